#include "daereg/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace daereg {

namespace {

struct Token {
    std::string text;
    size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '(' || c == ')') {
            out.push_back({std::string(1, c), i});
            ++i;
            continue;
        }
        size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' && s[j] != ')') ++j;
        out.push_back({s.substr(i, j - i), i});
        i = j;
    }
    return out;
}

bool is_rational_literal(const std::string& t) {
    size_t i = t[0] == '-' ? 1 : 0;
    if (i >= t.size()) return false;
    bool digits = false, slash = false;
    for (; i < t.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(t[i]))) {
            digits = true;
        } else if (t[i] == '/' && !slash && digits) {
            slash = true;
            digits = false;
        } else {
            return false;
        }
    }
    return digits;
}

[[noreturn]] void fail(const std::string& msg, size_t pos) {
    throw ParseError(msg + " at offset " + std::to_string(pos));
}

class SexprParser {
public:
    SexprParser(const std::string& text, const SymbolTable* table) : toks_(tokenize(text)), table_(table) {}

    Expr parse() {
        if (toks_.empty()) throw ParseError("empty expression");
        Expr e = expr();
        if (at_ < toks_.size()) fail("trailing input", toks_[at_].pos);
        return e;
    }

private:
    const Token& peek() {
        if (at_ >= toks_.size()) throw ParseError("unexpected end of expression");
        return toks_[at_];
    }
    Token next() {
        Token t = peek();
        ++at_;
        return t;
    }

    int var_index(const std::string& name, size_t pos) {
        if (table_) {
            auto it = std::find(table_->variables.begin(), table_->variables.end(), name);
            if (it != table_->variables.end()) return static_cast<int>(it - table_->variables.begin()) + 1;
        }
        // canonical xJ token
        if (name.size() >= 2 && name[0] == 'x') {
            bool all = true;
            for (size_t k = 1; k < name.size(); ++k)
                if (!std::isdigit(static_cast<unsigned char>(name[k]))) all = false;
            if (all) {
                int j = std::stoi(name.substr(1));
                if (j >= 1 && (!table_ || table_->variables.empty() || j <= static_cast<int>(table_->variables.size())))
                    return j;
            }
        }
        fail("unknown variable '" + name + "'", pos);
    }

    bool is_declared_function(const std::string& name) const {
        if (!table_) return true;  // canonical mode accepts any head as opaque
        // derivatives of declared symbols (trailing apostrophes) also parse
        std::string base = name;
        while (!base.empty() && base.back() == '\'') base.pop_back();
        return std::find(table_->functions.begin(), table_->functions.end(), base) != table_->functions.end();
    }

    Expr atom(const Token& t) {
        if (is_rational_literal(t.text)) return Expr::rational(parse_rat(t.text));
        if (t.text == "t") return Expr::time();
        if (table_) {
            auto vi = std::find(table_->variables.begin(), table_->variables.end(), t.text);
            if (vi != table_->variables.end())
                return Expr::var(static_cast<int>(vi - table_->variables.begin()) + 1, 0);
            auto pi = std::find(table_->parameters.begin(), table_->parameters.end(), t.text);
            if (pi != table_->parameters.end()) return Expr::param(t.text);
        }
        fail("unknown symbol '" + t.text + "'", t.pos);
    }

    Expr expr() {
        Token t = next();
        if (t.text == ")") fail("unexpected ')'", t.pos);
        if (t.text != "(") return atom(t);
        Token head = next();
        if (head.text == "(" || head.text == ")") fail("expected operator name", head.pos);
        std::vector<Expr> args;
        std::vector<Token> raw;
        while (peek().text != ")") {
            if (head.text == "var" || head.text == "d" || head.text == "param") {
                raw.push_back(next());
            } else {
                args.push_back(expr());
            }
        }
        next();  // consume ')'
        const std::string& op = head.text;
        if (op == "+") {
            if (args.size() < 1) fail("(+) needs arguments", head.pos);
            return Expr::sum(args);
        }
        if (op == "*") {
            if (args.size() < 1) fail("(*) needs arguments", head.pos);
            return Expr::product(args);
        }
        if (op == "pow") {
            if (args.size() != 2 || raw.size() != 0) fail("(pow base k) malformed", head.pos);
            if (!args[1].is_rational() || !is_integer(args[1].value())) fail("pow exponent must be an integer", head.pos);
            return Expr::pow(args[0], args[1].value().get_num().get_si());
        }
        if (op == "var") {
            if (raw.size() != 1) fail("(var name) malformed", head.pos);
            return Expr::var(var_index(raw[0].text, raw[0].pos), 0);
        }
        if (op == "d") {
            if (raw.size() != 2 || !is_rational_literal(raw[1].text)) fail("(d name order) malformed", head.pos);
            return Expr::var(var_index(raw[0].text, raw[0].pos), std::stoi(raw[1].text));
        }
        if (op == "param") {
            if (raw.size() != 1) fail("(param name) malformed", head.pos);
            return Expr::param(raw[0].text);
        }
        if (op == "sin" || op == "cos" || op == "exp" || op == "log" || is_declared_function(op)) {
            if (args.size() != 1) fail("(" + op + " arg) takes one argument", head.pos);
            return Expr::apply(op, args[0]);
        }
        fail("unknown operator '" + op + "'", head.pos);
    }

    std::vector<Token> toks_;
    const SymbolTable* table_;
    size_t at_ = 0;
};

SymbolTable table_of(const DaeSystem& dae) {
    SymbolTable t;
    t.variables = dae.var_names;
    t.parameters = dae.parameters;
    t.functions = dae.functions;
    return t;
}

std::vector<int> ints_from_json(const nlohmann::json& j) {
    std::vector<int> v;
    for (const auto& x : j) v.push_back(x.get<int>());
    return v;
}

}  // namespace

Expr parse_sexpr(const std::string& text, const SymbolTable* table) { return SexprParser(text, table).parse(); }

DaeSystem dae_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("DaeFile: object expected");
    if (j.contains("schema") && j["schema"].get<int>() != 1) throw ParseError("DaeFile: unsupported schema");
    DaeSystem dae;
    for (const auto& v : j.at("variables")) dae.var_names.push_back(v.get<std::string>());
    if (j.contains("parameters"))
        for (const auto& v : j["parameters"]) dae.parameters.push_back(v.get<std::string>());
    if (j.contains("functions"))
        for (const auto& v : j["functions"])
            dae.functions.push_back(v.is_object() ? v.at("name").get<std::string>() : v.get<std::string>());
    SymbolTable table = table_of(dae);
    if (!j.contains("equations")) throw ParseError("DaeFile: equations missing");
    for (const auto& v : j["equations"]) dae.equations.push_back(parse_sexpr(v.get<std::string>(), &table));
    if (dae.var_names.size() != dae.equations.size())
        throw ParseError("DaeFile: equation count differs from variable count");
    dae.validate();
    return dae;
}

nlohmann::json dae_to_json(const DaeSystem& dae) {
    nlohmann::json j;
    j["schema"] = 1;
    j["variables"] = dae.var_names;
    j["parameters"] = dae.parameters;
    j["functions"] = dae.functions;
    std::vector<std::string> eqs;
    for (const Expr& e : dae.equations) eqs.push_back(to_sexpr(e, &dae.var_names));
    j["equations"] = eqs;
    return j;
}

std::optional<std::pair<std::vector<RatMatrix>, std::vector<Expr>>> decomposition_from_json(
    const nlohmann::json& j, const DaeSystem& dae) {
    if (!j.contains("decomposition")) return std::nullopt;
    const auto& d = j["decomposition"];
    std::vector<RatMatrix> coeffs;
    for (const auto& grid : d.at("coeffs")) coeffs.push_back(ratmatrix_from_json(grid));
    SymbolTable table = table_of(dae);
    std::vector<Expr> g;
    for (const auto& s : d.at("g")) g.push_back(parse_sexpr(s.get<std::string>(), &table));
    return std::make_pair(std::move(coeffs), std::move(g));
}

nlohmann::json ratmatrix_to_json(const RatMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(rat_to_string(m.at(i, c)));
        rows.push_back(row);
    }
    return rows;
}

RatMatrix ratmatrix_from_json(const nlohmann::json& j) {
    int rows = static_cast<int>(j.size());
    int cols = rows == 0 ? 0 : static_cast<int>(j.at(0).size());
    RatMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j.at(i).size()) != cols) throw ParseError("matrix: ragged rows");
        for (int c = 0; c < cols; ++c) m.at(i, c) = parse_rat(j.at(i).at(c).get<std::string>());
    }
    return m;
}

namespace {
nlohmann::json ratvec_to_json(const RatVec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Rat& x : v) a.push_back(rat_to_string(x));
    return a;
}
}  // namespace

nlohmann::json lsm_to_json(const LinSymMatrix& l) {
    nlohmann::json j;
    j["n"] = l.n;
    j["A0"] = ratmatrix_to_json(l.A0);
    nlohmann::json terms = nlohmann::json::array();
    for (const LinSymTerm& t : l.terms)
        terms.push_back({{"symbol", t.label}, {"atom", to_sexpr(t.atom)}, {"coeff", ratmatrix_to_json(t.coeff)}});
    j["terms"] = terms;
    return j;
}

nlohmann::json onecm_to_json(const OneCMMatrix& a) {
    nlohmann::json j;
    j["n"] = a.n;
    j["A0"] = ratmatrix_to_json(a.A0);
    nlohmann::json fs = nlohmann::json::array();
    for (const OneCMFactor& f : a.factors)
        fs.push_back({{"symbol", f.label},
                      {"atom", to_sexpr(f.atom)},
                      {"split_index", f.split_index},
                      {"b", ratvec_to_json(f.b)},
                      {"c", ratvec_to_json(f.c)}});
    j["factors"] = fs;
    return j;
}

nlohmann::json pair_to_json(const VanishingPair& vp) {
    nlohmann::json j;
    j["schema"] = 1;
    j["U"] = ratmatrix_to_json(vp.U);
    j["V"] = ratmatrix_to_json(vp.V);
    j["p"] = vp.p;
    j["q"] = vp.q;
    j["block"] = {{"rows", vp.block_rows}, {"cols", vp.block_cols}};
    return j;
}

VanishingPair pair_from_json(const nlohmann::json& j) {
    VanishingPair vp;
    vp.U = ratmatrix_from_json(j.at("U"));
    vp.V = ratmatrix_from_json(j.at("V"));
    vp.p = ints_from_json(j.at("p"));
    vp.q = ints_from_json(j.at("q"));
    if (j.contains("block")) {
        vp.block_rows = ints_from_json(j["block"].at("rows"));
        vp.block_cols = ints_from_json(j["block"].at("cols"));
    }
    return vp;
}

nlohmann::json trace_to_json(const RegularizationResult& res, const std::string& input_name) {
    nlohmann::json j;
    j["schema"] = 1;
    j["input"] = input_name;
    switch (res.status) {
        case RegStatus::Regularized: j["status"] = "Regularized"; break;
        case RegStatus::StructurallySingular: j["status"] = "StructurallySingular"; break;
        case RegStatus::Inconclusive: j["status"] = "Inconclusive"; break;
    }
    if (!res.probe_note.empty()) j["probe"] = res.probe_note;
    nlohmann::json iters = nlohmann::json::array();
    for (const IterationRecord& r : res.trace) {
        nlohmann::json it;
        it["p"] = r.p;
        it["q"] = r.q;
        it["delta_hat"] = r.delta_hat;
        it["n"] = r.n;
        it["lsm_symbols"] = r.lsm_symbols;
        it["onecm_symbols"] = r.onecm_symbols;
        it["rank_1cm"] = r.rank_1cm;
        if (r.pair) it["pair"] = pair_to_json(*r.pair);
        iters.push_back(it);
    }
    j["iterations"] = iters;
    return j;
}

LoadedInput load_input(const std::string& spec) {
    LoadedInput in;
    in.name = spec;
    if (spec.rfind("robot:N=", 0) == 0) {
        int n = std::stoi(spec.substr(8));
        in.dae = robotic_arm(n);
        return in;
    }
    if (spec == "robot") {
        in.dae = robotic_arm(1);
        return in;
    }
    if (spec == "transamp") {
        in.dae = transistor_amplifier();
        return in;
    }
    if (spec == "ringmod") {
        in.dae = ring_modulator();
        return in;
    }
    if (spec == "toy") {
        DecomposedDae d = toy_example();
        in.dae = d.dae;
        in.decomposition = std::make_pair(d.coeffs, d.g);
        return in;
    }
    if (spec == "mna") {
        in.dae = mna_example();
        return in;
    }
    std::ifstream f(spec);
    if (!f) throw ParseError("cannot open input '" + spec + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("JSON error in '" + spec + "': " + e.what());
    }
    in.dae = dae_from_json(j);
    in.decomposition = decomposition_from_json(j, in.dae);
    return in;
}

}  // namespace daereg
