#include "daereg/expr.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace daereg {

class ExprBuilder {
public:
    static Expr wrap(std::shared_ptr<const Expr::Node> n) { return Expr(std::move(n)); }
    static const Expr::Node* ptr(const Expr& e) { return e.node_.get(); }
};

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

uint64_t hash_string(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t node_hash(const Expr::Node& n) {
    uint64_t h = mix(0, static_cast<uint64_t>(n.kind));
    switch (n.kind) {
        case Expr::Kind::Rational: h = mix(h, hash_string(n.value.get_str())); break;
        case Expr::Kind::Time: break;
        case Expr::Kind::Param: h = mix(h, hash_string(n.name)); break;
        case Expr::Kind::Var: h = mix(h, (static_cast<uint64_t>(n.j) << 20) ^ static_cast<uint64_t>(n.l)); break;
        case Expr::Kind::Pow: h = mix(h, static_cast<uint64_t>(n.exp)); break;
        case Expr::Kind::Apply: h = mix(h, hash_string(n.name)); break;
        default: break;
    }
    for (const Expr& k : n.kids) h = mix(h, k.struct_hash());
    return h;
}

std::shared_ptr<const Expr::Node> make_node(Expr::Node n) {
    n.hash = node_hash(n);
    return std::make_shared<const Expr::Node>(std::move(n));
}

int kind_rank(Expr::Kind k) { return static_cast<int>(k); }

}  // namespace

Expr::Expr() : node_(nullptr) { *this = zero(); }

int expr_compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Expr::Kind::Rational: return cmp(a.value(), b.value());
        case Expr::Kind::Time: return 0;
        case Expr::Kind::Param: return a.name().compare(b.name());
        case Expr::Kind::Var:
            if (a.var_index() != b.var_index()) return a.var_index() < b.var_index() ? -1 : 1;
            if (a.var_order() != b.var_order()) return a.var_order() < b.var_order() ? -1 : 1;
            return 0;
        case Expr::Kind::Pow: {
            int c = expr_compare(a.base(), b.base());
            if (c != 0) return c;
            if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
            return 0;
        }
        case Expr::Kind::Apply: {
            int c = a.name().compare(b.name());
            if (c != 0) return c;
            return expr_compare(a.arg(), b.arg());
        }
        case Expr::Kind::Product:
        case Expr::Kind::Sum: {
            const auto& ka = a.children();
            const auto& kb = b.children();
            size_t m = std::min(ka.size(), kb.size());
            for (size_t i = 0; i < m; ++i) {
                int c = expr_compare(ka[i], kb[i]);
                if (c != 0) return c;
            }
            if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

bool Expr::same(const Expr& o) const {
    if (node_ == o.node_) return true;
    if (struct_hash() != o.struct_hash()) return false;
    return expr_compare(*this, o) == 0;
}

// --- factories ---

namespace {
int sum_sign(const Expr& s);
Expr negate_sum(const Expr& s);
}  // namespace

Expr Expr::rational(Rat v) {
    v.canonicalize();
    Node n{};
    n.kind = Kind::Rational;
    n.value = std::move(v);
    return Expr(make_node(std::move(n)));
}

Expr Expr::time() {
    Node n{};
    n.kind = Kind::Time;
    return Expr(make_node(std::move(n)));
}

Expr Expr::param(std::string name) {
    if (name.empty()) throw std::invalid_argument("Expr::param: empty name");
    Node n{};
    n.kind = Kind::Param;
    n.name = std::move(name);
    return Expr(make_node(std::move(n)));
}

Expr Expr::var(int j, int l) {
    if (j < 1 || l < 0) throw std::invalid_argument("Expr::var: bad index/order");
    Node n{};
    n.kind = Kind::Var;
    n.j = j;
    n.l = l;
    return Expr(make_node(std::move(n)));
}

Expr Expr::pow(const Expr& base, long k) {
    if (k == 0) return one();
    if (k == 1) return base;
    if (base.kind() == Kind::Sum && sum_sign(base) < 0) {
        Expr p = pow(negate_sum(base), k);
        return k % 2 != 0 ? product({integer(-1), p}) : p;
    }
    switch (base.kind()) {
        case Kind::Rational: {
            const Rat& v = base.value();
            if (v == 0) {
                if (k > 0) return zero();
                throw std::domain_error("Expr::pow: 0 raised to negative power");
            }
            Rat r = 1;
            Rat b = k > 0 ? v : Rat(1) / v;
            for (long i = 0; i < std::labs(k); ++i) r *= b;
            return rational(r);
        }
        case Kind::Pow:
            return pow(base.base(), base.exponent() * k);
        case Kind::Product: {
            std::vector<Expr> fs;
            fs.reserve(base.children().size());
            for (const Expr& c : base.children()) fs.push_back(pow(c, k));
            return product(fs);
        }
        default: {
            Node n{};
            n.kind = Kind::Pow;
            n.exp = k;
            n.kids = {base};
            return Expr(make_node(std::move(n)));
        }
    }
}

Expr Expr::apply(std::string fname, Expr argument) {
    if (fname.empty()) throw std::invalid_argument("Expr::apply: empty function name");
    Node n{};
    n.kind = Kind::Apply;
    n.name = std::move(fname);
    n.kids = {std::move(argument)};
    return Expr(make_node(std::move(n)));
}

namespace {

// Rebuilds a product from already-canonical, sorted monic factors.
Expr product_of_factors(Rat coeff, std::vector<Expr> factors) {
    if (coeff == 0) return Expr::zero();
    if (factors.empty()) return Expr::rational(std::move(coeff));
    if (coeff == 1 && factors.size() == 1) return factors[0];
    std::vector<Expr> kids;
    kids.reserve(factors.size() + 1);
    if (coeff != 1) kids.push_back(Expr::rational(std::move(coeff)));
    for (auto& f : factors) kids.push_back(std::move(f));
    if (kids.size() == 1) return kids[0];
    Expr::Node n{};
    n.kind = Expr::Kind::Product;
    n.kids = std::move(kids);
    return ExprBuilder::wrap(make_node(std::move(n)));
}

// coeff * monic with the product kept flat when monic is itself a product.
Expr make_term(Rat coeff, const Expr& monic) {
    if (coeff == 0) return Expr::zero();
    if (monic.is_one()) return Expr::rational(std::move(coeff));
    if (coeff == 1) return monic;
    std::vector<Expr> kids{Expr::rational(std::move(coeff))};
    if (monic.kind() == Expr::Kind::Product)
        kids.insert(kids.end(), monic.children().begin(), monic.children().end());
    else
        kids.push_back(monic);
    Expr::Node n{};
    n.kind = Expr::Kind::Product;
    n.kids = std::move(kids);
    return ExprBuilder::wrap(make_node(std::move(n)));
}

// Splits a canonical non-sum term into (rational coefficient, monic part).
std::pair<Rat, Expr> split_coeff(const Expr& t) {
    if (t.kind() == Expr::Kind::Rational) return {t.value(), Expr::one()};
    if (t.kind() == Expr::Kind::Product && t.children()[0].kind() == Expr::Kind::Rational) {
        std::vector<Expr> rest(t.children().begin() + 1, t.children().end());
        if (rest.size() == 1) return {t.children()[0].value(), rest[0]};
        Expr::Node n{};
        n.kind = Expr::Kind::Product;
        n.kids = std::move(rest);
        return {t.children()[0].value(), ExprBuilder::wrap(make_node(std::move(n)))};
    }
    return {Rat(1), t};
}

// Sign of a sum: the sign of the coefficient on its lexicographically
// smallest monic. Antisymmetric (negating the sum flips it), which makes the
// sign extraction below well defined.
int sum_sign(const Expr& s) {
    bool have = false;
    Expr best_monic;
    Rat best_coeff;
    for (const Expr& t : s.children()) {
        auto [c, monic] = split_coeff(t);
        if (!have || expr_compare(monic, best_monic) < 0) {
            have = true;
            best_monic = monic;
            best_coeff = c;
        }
    }
    return !have || best_coeff >= 0 ? 1 : -1;
}

// Flat negation: every term's coefficient flipped.
Expr negate_sum(const Expr& s) {
    std::vector<Expr> ts;
    ts.reserve(s.children().size());
    for (const Expr& t : s.children()) ts.push_back(Expr::product({Expr::integer(-1), t}));
    return Expr::sum(ts);
}

}  // namespace

Expr Expr::product(const std::vector<Expr>& factors) {
    Rat coeff = 1;
    std::map<Expr, long, ExprLess> bases;  // base -> accumulated exponent
    std::vector<const Expr*> stack;
    for (const Expr& f : factors) stack.push_back(&f);
    for (size_t s = 0; s < stack.size(); ++s) {
        const Expr& f = *stack[s];
        switch (f.kind()) {
            case Kind::Rational:
                coeff *= f.value();
                break;
            case Kind::Product:
                for (const Expr& c : f.children()) stack.push_back(&c);
                break;
            case Kind::Pow:
                bases[f.base()] += f.exponent();
                break;
            default:
                bases[f] += 1;
        }
    }
    if (coeff == 0) return zero();
    std::vector<Expr> fs;
    fs.reserve(bases.size());
    for (const auto& [base, e] : bases) {
        if (e == 0) continue;
        // sum factors are stored sign-normalized, the sign moves into the
        // coefficient, so a*X and (-a)*X share one monic when a is a sum
        if (base.kind() == Kind::Sum && sum_sign(base) < 0) {
            if (e % 2 != 0) coeff = -coeff;
            fs.push_back(pow(negate_sum(base), e));
        } else {
            fs.push_back(pow(base, e));
        }
    }
    // pow() may fold rational bases back into constants
    Rat extra = 1;
    std::vector<Expr> monic;
    for (auto& f : fs) {
        if (f.is_rational()) extra *= f.value();
        else monic.push_back(std::move(f));
    }
    // sign normalization can change a factor's position in the total order
    std::sort(monic.begin(), monic.end(), ExprLess{});
    Rat c = coeff * extra;
    // A rational coefficient on a lone sum distributes, so c*(a+b) and
    // c*a + c*b share one canonical form and like terms can cancel.
    if (c != 1 && monic.size() == 1 && monic[0].kind() == Kind::Sum) {
        std::vector<Expr> ts;
        ts.reserve(monic[0].children().size());
        for (const Expr& t : monic[0].children()) ts.push_back(product({rational(c), t}));
        return sum(ts);
    }
    return product_of_factors(std::move(c), std::move(monic));
}

Expr Expr::sum(const std::vector<Expr>& terms) {
    Rat constant = 0;
    std::map<Expr, Rat, ExprLess> by_monic;
    std::vector<const Expr*> stack;
    for (const Expr& t : terms) stack.push_back(&t);
    for (size_t s = 0; s < stack.size(); ++s) {
        const Expr& t = *stack[s];
        if (t.kind() == Kind::Sum) {
            for (const Expr& c : t.children()) stack.push_back(&c);
        } else if (t.kind() == Kind::Rational) {
            constant += t.value();
        } else {
            auto [c, monic] = split_coeff(t);
            by_monic[monic] += c;
        }
    }
    std::vector<Expr> kids;
    if (constant != 0) kids.push_back(rational(constant));
    for (const auto& [monic, c] : by_monic) {
        if (c == 0) continue;
        kids.push_back(make_term(c, monic));
    }
    if (kids.empty()) return zero();
    if (kids.size() == 1) return kids[0];
    std::sort(kids.begin(), kids.end(), ExprLess{});
    Node n{};
    n.kind = Kind::Sum;
    n.kids = std::move(kids);
    return Expr(make_node(std::move(n)));
}

// --- serialization ---

namespace {

void write_sexpr(const Expr& e, const std::vector<std::string>* names, std::string& out) {
    switch (e.kind()) {
        case Expr::Kind::Rational:
            out += e.value().get_str();
            return;
        case Expr::Kind::Time:
            out += "t";
            return;
        case Expr::Kind::Param:
            out += "(param " + e.name() + ")";
            return;
        case Expr::Kind::Var: {
            std::string v = names && e.var_index() <= static_cast<int>(names->size())
                                ? (*names)[e.var_index() - 1]
                                : "x" + std::to_string(e.var_index());
            if (e.var_order() == 0) out += "(var " + v + ")";
            else out += "(d " + v + " " + std::to_string(e.var_order()) + ")";
            return;
        }
        case Expr::Kind::Pow:
            out += "(pow ";
            write_sexpr(e.base(), names, out);
            out += " " + std::to_string(e.exponent()) + ")";
            return;
        case Expr::Kind::Apply:
            out += "(" + e.name() + " ";
            write_sexpr(e.arg(), names, out);
            out += ")";
            return;
        case Expr::Kind::Product:
        case Expr::Kind::Sum:
            out += e.kind() == Expr::Kind::Product ? "(* " : "(+ ";
            for (size_t i = 0; i < e.children().size(); ++i) {
                if (i) out += " ";
                write_sexpr(e.children()[i], names, out);
            }
            out += ")";
            return;
    }
}

}  // namespace

std::string to_sexpr(const Expr& e, const std::vector<std::string>* var_names) {
    std::string out;
    write_sexpr(e, var_names, out);
    return out;
}

// --- differentiation ---

namespace {

// Derivative of a unary function symbol applied to u. Builtins are special;
// an opaque symbol f differentiates to a fresh opaque symbol f'.
Expr function_derivative(const std::string& fname, const Expr& u) {
    if (fname == "sin") return Expr::apply("cos", u);
    if (fname == "cos") return -Expr::apply("sin", u);
    if (fname == "exp") return Expr::apply("exp", u);
    if (fname == "log") return Expr::pow(u, -1);
    return Expr::apply(fname + "'", u);
}

Expr diff_with(const Expr& e, const std::function<Expr(const Expr&)>& leaf) {
    switch (e.kind()) {
        case Expr::Kind::Rational:
        case Expr::Kind::Time:
        case Expr::Kind::Param:
        case Expr::Kind::Var:
            return leaf(e);
        case Expr::Kind::Sum: {
            std::vector<Expr> ts;
            ts.reserve(e.children().size());
            for (const Expr& c : e.children()) ts.push_back(diff_with(c, leaf));
            return Expr::sum(ts);
        }
        case Expr::Kind::Product: {
            std::vector<Expr> ts;
            const auto& kids = e.children();
            for (size_t i = 0; i < kids.size(); ++i) {
                Expr di = diff_with(kids[i], leaf);
                if (di.is_zero()) continue;
                std::vector<Expr> fs;
                fs.reserve(kids.size());
                for (size_t k = 0; k < kids.size(); ++k) fs.push_back(k == i ? di : kids[k]);
                ts.push_back(Expr::product(fs));
            }
            return Expr::sum(ts);
        }
        case Expr::Kind::Pow: {
            Expr db = diff_with(e.base(), leaf);
            if (db.is_zero()) return Expr::zero();
            return Expr::product({Expr::integer(e.exponent()), Expr::pow(e.base(), e.exponent() - 1), db});
        }
        case Expr::Kind::Apply: {
            Expr du = diff_with(e.arg(), leaf);
            if (du.is_zero()) return Expr::zero();
            return Expr::product({function_derivative(e.name(), e.arg()), du});
        }
    }
    return Expr::zero();
}

}  // namespace

Expr diff_partial(const Expr& e, int j, int l) {
    return diff_with(e, [&](const Expr& leaf) {
        if (leaf.kind() == Expr::Kind::Var && leaf.var_index() == j && leaf.var_order() == l) return Expr::one();
        return Expr::zero();
    });
}

Expr diff_time(const Expr& e) {
    return diff_with(e, [](const Expr& leaf) {
        switch (leaf.kind()) {
            case Expr::Kind::Var: return Expr::var(leaf.var_index(), leaf.var_order() + 1);
            case Expr::Kind::Time: return Expr::one();
            default: return Expr::zero();
        }
    });
}

int max_var_order(const Expr& e, int j) {
    int best = -1;
    switch (e.kind()) {
        case Expr::Kind::Var:
            if (e.var_index() == j) best = e.var_order();
            break;
        case Expr::Kind::Pow:
        case Expr::Kind::Apply:
        case Expr::Kind::Product:
        case Expr::Kind::Sum:
            for (const Expr& c : e.children()) best = std::max(best, max_var_order(c, j));
            break;
        default:
            break;
    }
    return best;
}

int max_total_order(const Expr& e) {
    int best = -1;
    switch (e.kind()) {
        case Expr::Kind::Var:
            best = e.var_order();
            break;
        case Expr::Kind::Pow:
        case Expr::Kind::Apply:
        case Expr::Kind::Product:
        case Expr::Kind::Sum:
            for (const Expr& c : e.children()) best = std::max(best, max_total_order(c));
            break;
        default:
            break;
    }
    return best;
}

namespace {
void scan_orders(const Expr& e, std::vector<int>& out) {
    switch (e.kind()) {
        case Expr::Kind::Var:
            if (e.var_index() <= static_cast<int>(out.size()))
                out[e.var_index() - 1] = std::max(out[e.var_index() - 1], e.var_order());
            break;
        case Expr::Kind::Pow:
        case Expr::Kind::Apply:
        case Expr::Kind::Product:
        case Expr::Kind::Sum:
            for (const Expr& c : e.children()) scan_orders(c, out);
            break;
        default:
            break;
    }
}
}  // namespace

std::vector<int> var_max_orders(const Expr& e, int nvars) {
    std::vector<int> out(nvars, -1);
    scan_orders(e, out);
    return out;
}

std::optional<int> sigma_order(const Expr& e, int j) {
    for (int l = max_var_order(e, j); l >= 0; --l) {
        if (!diff_partial(e, j, l).is_zero()) return l;
    }
    return std::nullopt;
}

// --- arithmetic expansion ---

namespace {

// Multiplies two expanded expressions, distributing over sums.
Expr distribute(const Expr& a, const Expr& b) {
    std::vector<Expr> ta = a.kind() == Expr::Kind::Sum ? a.children() : std::vector<Expr>{a};
    std::vector<Expr> tb = b.kind() == Expr::Kind::Sum ? b.children() : std::vector<Expr>{b};
    std::vector<Expr> out;
    out.reserve(ta.size() * tb.size());
    for (const Expr& x : ta)
        for (const Expr& y : tb) out.push_back(Expr::product({x, y}));
    return Expr::sum(out);
}

}  // namespace

Expr expand_arithmetic(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Sum: {
            std::vector<Expr> ts;
            ts.reserve(e.children().size());
            for (const Expr& c : e.children()) ts.push_back(expand_arithmetic(c));
            return Expr::sum(ts);
        }
        case Expr::Kind::Product: {
            Expr acc = Expr::one();
            for (const Expr& c : e.children()) acc = distribute(acc, expand_arithmetic(c));
            return acc;
        }
        case Expr::Kind::Pow: {
            if (e.exponent() >= 2 && e.base().kind() == Expr::Kind::Sum) {
                Expr b = expand_arithmetic(e.base());
                Expr acc = b;
                for (long i = 1; i < e.exponent(); ++i) acc = distribute(acc, b);
                return acc;
            }
            return e;
        }
        default:
            return e;  // functional atoms kept intact
    }
}

std::vector<LinTerm> linear_terms(const Expr& e) {
    Expr x = expand_arithmetic(e);
    std::vector<Expr> ts = x.kind() == Expr::Kind::Sum ? x.children() : std::vector<Expr>{x};
    std::vector<LinTerm> out;
    out.reserve(ts.size());
    for (const Expr& t : ts) {
        if (t.is_zero()) continue;
        if (t.kind() == Expr::Kind::Rational) {
            out.push_back({t.value(), Expr::one()});
        } else if (t.kind() == Expr::Kind::Product && t.children()[0].is_rational()) {
            std::vector<Expr> rest(t.children().begin() + 1, t.children().end());
            out.push_back({t.children()[0].value(), Expr::product(rest)});
        } else {
            out.push_back({Rat(1), t});
        }
    }
    return out;
}

// --- hashing ---

std::string normal_form_string(const Expr& e) { return to_sexpr(expand_arithmetic(e)); }

HashKey canonical_hash(const Expr& e) {
    std::string s = normal_form_string(e);
    // FNV-1a over 128 bits, then length folded in.
    unsigned __int128 h = (static_cast<unsigned __int128>(0x6c62272e07bb0142ULL) << 64) | 0x62b821756295c58dULL;
    const unsigned __int128 prime = (static_cast<unsigned __int128>(1) << 88) + (1 << 8) + 0x3b;
    for (unsigned char c : s) {
        h ^= c;
        h *= prime;
    }
    h ^= s.size();
    h *= prime;
    HashKey k;
    k.hi = static_cast<uint64_t>(h >> 64);
    k.lo = static_cast<uint64_t>(h);
    return k;
}

// --- substitution ---

Expr substitute(const Expr& e, const VarSubst& map) {
    switch (e.kind()) {
        case Expr::Kind::Var: {
            auto it = map.find({e.var_index(), e.var_order()});
            return it == map.end() ? e : it->second;
        }
        case Expr::Kind::Pow:
            return Expr::pow(substitute(e.base(), map), e.exponent());
        case Expr::Kind::Apply:
            return Expr::apply(e.name(), substitute(e.arg(), map));
        case Expr::Kind::Product:
        case Expr::Kind::Sum: {
            std::vector<Expr> ks;
            ks.reserve(e.children().size());
            for (const Expr& c : e.children()) ks.push_back(substitute(c, map));
            return e.kind() == Expr::Kind::Product ? Expr::product(ks) : Expr::sum(ks);
        }
        default:
            return e;
    }
}

Expr shift_var_indices(const Expr& e, int offset) {
    switch (e.kind()) {
        case Expr::Kind::Var:
            return Expr::var(e.var_index() + offset, e.var_order());
        case Expr::Kind::Pow:
            return Expr::pow(shift_var_indices(e.base(), offset), e.exponent());
        case Expr::Kind::Apply:
            return Expr::apply(e.name(), shift_var_indices(e.arg(), offset));
        case Expr::Kind::Product:
        case Expr::Kind::Sum: {
            std::vector<Expr> ks;
            ks.reserve(e.children().size());
            for (const Expr& c : e.children()) ks.push_back(shift_var_indices(c, offset));
            return e.kind() == Expr::Kind::Product ? Expr::product(ks) : Expr::sum(ks);
        }
        default:
            return e;
    }
}

Expr bind_params(const Expr& e, const std::map<std::string, Rat>& binding) {
    switch (e.kind()) {
        case Expr::Kind::Param: {
            auto it = binding.find(e.name());
            return it == binding.end() ? e : Expr::rational(it->second);
        }
        case Expr::Kind::Pow:
            return Expr::pow(bind_params(e.base(), binding), e.exponent());
        case Expr::Kind::Apply:
            return Expr::apply(e.name(), bind_params(e.arg(), binding));
        case Expr::Kind::Product:
        case Expr::Kind::Sum: {
            std::vector<Expr> ks;
            ks.reserve(e.children().size());
            for (const Expr& c : e.children()) ks.push_back(bind_params(c, binding));
            return e.kind() == Expr::Kind::Product ? Expr::product(ks) : Expr::sum(ks);
        }
        default:
            return e;
    }
}

// --- numeric evaluation ---

double eval_float(const Expr& e, const EvalPoint& pt) {
    switch (e.kind()) {
        case Expr::Kind::Rational:
            return e.value().get_d();
        case Expr::Kind::Time:
            return pt.t;
        case Expr::Kind::Param: {
            auto it = pt.params.find(e.name());
            if (it == pt.params.end()) throw EvalError("eval_float: unbound parameter " + e.name());
            return it->second;
        }
        case Expr::Kind::Var: {
            auto it = pt.vars.find({e.var_index(), e.var_order()});
            if (it == pt.vars.end())
                throw EvalError("eval_float: unbound variable x" + std::to_string(e.var_index()) + "^(" +
                                std::to_string(e.var_order()) + ")");
            return it->second;
        }
        case Expr::Kind::Pow: {
            double b = eval_float(e.base(), pt);
            if (b == 0.0 && e.exponent() < 0) throw EvalError("eval_float: division by zero");
            return std::pow(b, static_cast<double>(e.exponent()));
        }
        case Expr::Kind::Apply: {
            double u = eval_float(e.arg(), pt);
            const std::string& f = e.name();
            if (f == "sin") return std::sin(u);
            if (f == "cos") return std::cos(u);
            if (f == "exp") return std::exp(u);
            if (f == "log") {
                if (u <= 0.0) throw EvalError("eval_float: log of nonpositive value");
                return std::log(u);
            }
            auto it = pt.functions.find(f);
            if (it == pt.functions.end()) throw EvalError("eval_float: no evaluator for function " + f);
            return it->second(u);
        }
        case Expr::Kind::Product: {
            double r = 1.0;
            for (const Expr& c : e.children()) r *= eval_float(c, pt);
            return r;
        }
        case Expr::Kind::Sum: {
            double r = 0.0;
            for (const Expr& c : e.children()) r += eval_float(c, pt);
            return r;
        }
    }
    throw EvalError("eval_float: unreachable");
}

}  // namespace daereg
