#include "daereg/models.hpp"

#include <cmath>
#include <map>

#include "daereg/exactla.hpp"

namespace daereg {

namespace {

Expr P(const std::string& name) { return Expr::param(name); }
Expr V(int j, int l = 0) { return Expr::var(j, l); }
Expr inv(const Expr& e) { return Expr::pow(e, -1); }
Expr num(long v) { return Expr::integer(v); }
Expr half() { return Expr::rational(rat(1, 2)); }

}  // namespace

DaeSystem robotic_arm(int n_arms) {
    if (n_arms < 1) throw std::invalid_argument("robotic_arm: N >= 1 required");
    const int N = n_arms;
    const int n = 3 * N + 2;
    DaeSystem dae;
    dae.var_names.push_back("theta0");
    for (int j = 1; j <= N; ++j) dae.var_names.push_back("theta" + std::to_string(j));
    for (int j = 1; j <= N; ++j) dae.var_names.push_back("phi" + std::to_string(j));
    dae.var_names.push_back("tau0");
    for (int j = 1; j <= N; ++j) dae.var_names.push_back("tau" + std::to_string(j));
    dae.parameters = {"alpha", "l0"};
    for (int j = 1; j <= N; ++j)
        for (const char* base : {"beta", "gamma", "J", "K", "R", "l"})
            dae.parameters.push_back(base + std::to_string(j));

    auto theta = [&](int j) { return j == 0 ? V(1) : V(1 + j); };
    auto phi = [&](int j) { return V(N + 1 + j); };
    auto tau = [&](int j) { return j == 0 ? V(2 * N + 2) : V(2 * N + 2 + j); };
    auto beta = [&](int j) { return P("beta" + std::to_string(j)); };
    auto gamma = [&](int j) { return P("gamma" + std::to_string(j)); };
    auto motJ = [&](int j) { return P("J" + std::to_string(j)); };
    auto spring = [&](int j) { return P("K" + std::to_string(j)); };
    auto ratio = [&](int j) { return P("R" + std::to_string(j)); };
    auto len = [&](int j) { return P("l" + std::to_string(j)); };

    // Q = alpha + sum 2 gamma_j cos theta_j - sum J_j - sum (beta_j + gamma_j cos theta_j)^2 / beta_j
    std::vector<Expr> qterms{P("alpha")};
    for (int j = 1; j <= N; ++j) {
        Expr cj = Expr::apply("cos", theta(j));
        qterms.push_back(num(2) * gamma(j) * cj);
        qterms.push_back(-motJ(j));
        qterms.push_back(-inv(beta(j)) * Expr::pow(beta(j) + gamma(j) * cj, 2));
    }
    Expr q = Expr::sum(qterms);
    auto a_of = [&](int j) { return num(-1) - gamma(j) * inv(beta(j)) * Expr::apply("cos", theta(j)); };

    // z vector of length 2N+1
    std::vector<Expr> z;
    {
        // -(sum_j (2 theta0' thetaj' - thetaj'^2) gamma_j sin theta_j) - tau0
        std::vector<Expr> z1;
        for (int j = 1; j <= N; ++j) {
            Expr dots = num(2) * Expr::var(1, 1) * Expr::var(1 + j, 1) - Expr::pow(Expr::var(1 + j, 1), 2);
            z1.push_back(-(dots * gamma(j) * Expr::apply("sin", theta(j))));
        }
        z1.push_back(-tau(0));
        z.push_back(Expr::sum(z1));
    }
    for (int j = 1; j <= N; ++j)
        z.push_back(gamma(j) * Expr::pow(Expr::var(1, 1), 2) * Expr::apply("sin", theta(j)) +
                    spring(j) * (theta(j) - phi(j) * inv(ratio(j))));
    for (int j = 1; j <= N; ++j)
        z.push_back(spring(j) * inv(ratio(j)) * (phi(j) * inv(ratio(j)) - theta(j)) - tau(j));

    // mass-matrix rows applied to z, with the 1/Q scaling distributed and the
    // Q/Q cancellations carried out (the Q/beta_j and Q/J_j diagonal blocks)
    const int dyn = 2 * N + 1;
    auto mat = [&](int r, int c) -> Expr {
        if (r == 0) {
            if (c == 0) return inv(q);
            if (c <= N) return a_of(c) * inv(q);
            return -inv(q);
        }
        if (r <= N) {
            int j = r;
            if (c == 0) return a_of(j) * inv(q);
            if (c <= N) {
                Expr e = a_of(j) * a_of(c) * inv(q);
                if (c == j) e = e + inv(beta(j));
                return e;
            }
            return -a_of(j) * inv(q);
        }
        int j = r - N;
        if (c == 0) return -inv(q);
        if (c <= N) return a_of(c) * inv(q);
        Expr e = inv(q);
        if (c - N == j) e = e + inv(motJ(j));
        return e;
    };
    for (int r = 0; r < dyn; ++r) {
        std::vector<Expr> acc{Expr::var(r + 1, 2)};
        for (int c = 0; c < dyn; ++c) acc.push_back(mat(r, c) * z[c]);
        dae.equations.push_back(Expr::sum(acc));
    }
    // constraints l0 cos theta0 = p0(t), l0 cos theta0 + lj cos(theta0 + thetaj) = pj(t)
    Expr p0 = len(0) * Expr::apply("cos", Expr::one() - Expr::apply("exp", Expr::time()));
    dae.equations.push_back(len(0) * Expr::apply("cos", theta(0)) - p0);
    for (int j = 1; j <= N; ++j) {
        Expr pj = p0 + len(j) * Expr::apply("cos", Expr::one() - num(j) * Expr::time());
        dae.equations.push_back(len(0) * Expr::apply("cos", theta(0)) + len(j) * Expr::apply("cos", theta(0) + theta(j)) -
                                pj);
    }
    if (dae.size() != n) throw std::logic_error("robotic_arm: size mismatch");
    return dae;
}

DaeSystem transistor_amplifier() {
    DaeSystem dae;
    for (int j = 1; j <= 8; ++j) dae.var_names.push_back("x" + std::to_string(j));
    dae.parameters = {"C1", "C2", "C3", "C4", "C5", "R0", "R1", "R2", "R3", "R4",
                      "R5", "R6", "R7", "R8", "R9", "Ub", "alpha"};
    dae.functions = {"e", "U_e"};
    auto C = [&](int k) { return P("C" + std::to_string(k)); };
    auto R = [&](int k) { return P("R" + std::to_string(k)); };
    Expr Ub = P("Ub"), al = P("alpha");
    Expr ue = Expr::apply("U_e", Expr::time());
    auto bjt = [&](Expr x) { return Expr::apply("e", x); };

    dae.equations = {
        C(1) * (V(1, 1) - V(2, 1)) + (V(1) - ue) * inv(R(0)),
        -C(1) * (V(1, 1) - V(2, 1)) - Ub * inv(R(2)) + V(2) * (inv(R(1)) + inv(R(2))) -
            (al - num(1)) * bjt(V(2) - V(3)),
        C(2) * V(3, 1) + V(3) * inv(R(3)) - bjt(V(2) - V(3)),
        C(3) * (V(4, 1) - V(5, 1)) + (V(4) - Ub) * inv(R(4)) + al * bjt(V(2) - V(3)),
        -C(3) * (V(4, 1) - V(5, 1)) - Ub * inv(R(6)) + V(5) * (inv(R(5)) + inv(R(6))) -
            (al - num(1)) * bjt(V(5) - V(6)),
        C(4) * V(6, 1) + V(6) * inv(R(7)) - bjt(V(5) - V(6)),
        C(5) * (V(7, 1) - V(8, 1)) + (V(7) - Ub) * inv(R(8)) + al * bjt(V(5) - V(6)),
        -C(5) * (V(7, 1) - V(8, 1)) + V(8) * inv(R(9)),
    };
    return dae;
}

DaeSystem ring_modulator() {
    DaeSystem dae;
    for (int j = 1; j <= 15; ++j) dae.var_names.push_back("x" + std::to_string(j));
    dae.parameters = {"R", "Rp", "Ri", "Rc", "Rg1", "Rg2", "Rg3", "C", "Cp", "Lh", "Ls1", "Ls2", "Ls3"};
    dae.functions = {"q", "U_in1", "U_in2"};
    Expr uin2 = Expr::apply("U_in2", Expr::time());
    Expr uin1 = Expr::apply("U_in1", Expr::time());
    Expr ud1 = V(3) - V(5) - V(7) - uin2;
    Expr ud2 = -V(4) + V(6) - V(7) - uin2;
    Expr ud3 = V(4) + V(5) + V(7) + uin2;
    Expr ud4 = -V(3) - V(6) + V(7) + uin2;
    auto diode = [&](const Expr& u) { return Expr::apply("q", u); };

    dae.equations = {
        V(1, 1) + (V(1) * inv(P("R")) - V(8) + half() * V(10) - half() * V(11) - V(14)) * inv(P("C")),
        V(2, 1) + (V(2) * inv(P("R")) - V(9) + half() * V(12) - half() * V(13) - V(15)) * inv(P("C")),
        V(10) - diode(ud1) + diode(ud4),
        V(11) - diode(ud2) + diode(ud3),
        V(12) + diode(ud1) - diode(ud3),
        V(13) + diode(ud2) - diode(ud4),
        V(7, 1) + (V(7) * inv(P("Rp")) - diode(ud1) - diode(ud2) + diode(ud3) + diode(ud4)) * inv(P("Cp")),
        V(8, 1) + V(1) * inv(P("Lh")),
        V(9, 1) + V(2) * inv(P("Lh")),
        V(10, 1) + (-half() * V(1) + V(3) + P("Rg2") * V(10)) * inv(P("Ls2")),
        V(11, 1) + (half() * V(1) - V(4) + P("Rg3") * V(11)) * inv(P("Ls3")),
        V(12, 1) + (-half() * V(2) + V(5) + P("Rg2") * V(12)) * inv(P("Ls2")),
        V(13, 1) + (half() * V(2) - V(6) + P("Rg3") * V(13)) * inv(P("Ls3")),
        V(14, 1) + (V(1) + (P("Rg1") + P("Ri")) * V(14) - uin1) * inv(P("Ls1")),
        V(15, 1) + (V(2) + (P("Rc") + P("Rg1")) * V(15)) * inv(P("Ls1")),
    };
    return dae;
}

DecomposedDae toy_example() {
    DecomposedDae out;
    out.dae.var_names = {"x1", "x2", "x3"};
    Expr g1 = V(1, 1) * V(2, 1) + V(2, 1) * V(3, 1) + V(3, 1) * V(1, 1) + Expr::pow(V(3, 1), 2);
    Expr g2 = Expr::apply("cos", V(1, 1) - V(2, 1));
    out.dae.equations = {g1, V(2) + g2, V(2, 1) + V(3, 1) + g2};
    out.coeffs = {RatMatrix{{0, 0, 0}, {0, 1, 0}, {0, 0, 0}}, RatMatrix{{0, 0, 0}, {0, 0, 0}, {0, 1, 1}}};
    out.g = {g1, g2, g2};
    return out;
}

DaeSystem mna_example() {
    DaeSystem dae;
    dae.var_names = {"E1", "E2", "E3", "IE", "IL"};
    dae.parameters = {"I", "E"};
    dae.functions = {"r", "c", "l"};
    Expr res = Expr::apply("r", V(1) - V(2));
    Expr cap = Expr::apply("c", V(2, 1) - V(3, 1));
    Expr ind = Expr::apply("l", V(5, 1));
    dae.equations = {
        V(4) - V(5) - res,
        res - cap,
        cap + V(5) - P("I"),
        V(1) - P("E"),
        ind - V(3) + V(1),
    };
    return dae;
}

DaeSystem Rank1FormDae::to_dae() const {
    const int n = size();
    DaeSystem dae;
    for (int j = 1; j <= n; ++j) dae.var_names.push_back("x" + std::to_string(j));
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        if (i < static_cast<int>(g.size())) terms.push_back(g[i]);
        for (size_t l = 0; l < coeffs.size(); ++l)
            for (int j = 0; j < n; ++j) {
                const Rat& v = coeffs[l].at(i, j);
                if (v != 0) terms.push_back(Expr::rational(v) * V(j + 1, static_cast<int>(l)));
            }
        dae.equations.push_back(Expr::sum(terms));
    }
    for (const Rank1Term& t : terms) {
        std::vector<Expr> arg;
        for (int j = 0; j < n; ++j)
            if (t.a[j] != 0) arg.push_back(Expr::rational(t.a[j]) * V(j + 1, t.order));
        Expr call = Expr::apply(t.h, Expr::sum(arg));
        for (int i = 0; i < n; ++i) {
            if (t.b[i] == 0) continue;
            dae.equations[i] = dae.equations[i] + Expr::rational(t.b[i]) * call;
        }
    }
    // collect declared names
    std::map<std::string, int> fs;
    for (const Rank1Term& t : terms) fs.emplace(t.h, 0);
    for (auto& [name, c] : fs) dae.functions.push_back(name);
    return dae;
}

Rank1FormDae mna_rank1() {
    Rank1FormDae d;
    d.g = {Expr::zero(), Expr::zero(), -P("I"), -P("E"), Expr::zero()};
    d.coeffs = {RatMatrix{{0, 0, 0, 1, -1}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 1}, {1, 0, 0, 0, 0}, {1, 0, -1, 0, 0}},
                RatMatrix(5, 5)};
    Rank1Term r;
    r.order = 0;
    r.a = {Rat(1), Rat(-1), Rat(0), Rat(0), Rat(0)};
    r.b = {Rat(-1), Rat(1), Rat(0), Rat(0), Rat(0)};
    r.h = "r";
    Rank1Term c;
    c.order = 1;
    c.a = {Rat(0), Rat(1), Rat(-1), Rat(0), Rat(0)};
    c.b = {Rat(0), Rat(-1), Rat(1), Rat(0), Rat(0)};
    c.h = "c";
    Rank1Term l;
    l.order = 1;
    l.a = {Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)};
    l.b = {Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)};
    l.h = "l";
    d.terms = {r, c, l};
    return d;
}

LinSymMatrix rank1_jacobian(const Rank1FormDae& d, const std::vector<int>& p, const std::vector<int>& q) {
    const int n = d.size();
    if (static_cast<int>(p.size()) != n || static_cast<int>(q.size()) != n)
        throw std::invalid_argument("rank1_jacobian: dual size mismatch");
    LinSymMatrix out;
    out.n = n;
    out.A0 = RatMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int l = q[j] - p[i];
            if (l >= 0 && l < static_cast<int>(d.coeffs.size())) out.A0.at(i, j) = d.coeffs[l].at(i, j);
        }
    // one symbol per derivative atom; identical atoms merge (their b vectors
    // share the same a, so the merged coefficient matrix stays rank <= 1)
    std::map<std::string, size_t> by_atom;
    for (const Rank1Term& t : d.terms) {
        std::vector<Expr> arg;
        for (int j = 0; j < n; ++j)
            if (t.a[j] != 0) arg.push_back(Expr::rational(t.a[j]) * Expr::var(j + 1, t.order));
        Expr atom = Expr::apply(t.h + "'", Expr::sum(arg));
        RatMatrix coeff(n, n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            if (t.b[i] == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (t.a[j] == 0 || q[j] - p[i] != t.order) continue;
                coeff.at(i, j) = t.b[i] * t.a[j];
                nonzero = true;
            }
        }
        if (!nonzero) continue;
        std::string key = normal_form_string(atom);
        auto it = by_atom.find(key);
        if (it == by_atom.end()) {
            by_atom.emplace(key, out.terms.size());
            out.terms.push_back({"a" + std::to_string(out.terms.size() + 1), atom, coeff});
        } else {
            out.terms[it->second].coeff = out.terms[it->second].coeff + coeff;
        }
    }
    std::vector<LinSymTerm> kept;
    for (auto& t : out.terms)
        if (!t.coeff.is_zero()) kept.push_back(std::move(t));
    out.terms = std::move(kept);
    return out;
}

Rank1FormDae linear_transform(const Rank1FormDae& d, const RatMatrix& c_mat, const RatMatrix& d_mat) {
    const int n = d.size();
    if (c_mat.rows() != n || c_mat.cols() != n || d_mat.rows() != n || d_mat.cols() != n)
        throw std::invalid_argument("linear_transform: dimension mismatch");
    auto dinv = rat_inverse(d_mat);
    if (!dinv || !rat_inverse(c_mat)) throw SingularTransform("linear_transform: C or D is singular");
    Rank1FormDae out;
    out.g.reserve(d.g.size());
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        for (int j = 0; j < n; ++j) {
            const Rat& c = c_mat.at(i, j);
            if (c != 0 && j < static_cast<int>(d.g.size())) terms.push_back(Expr::rational(c) * d.g[j]);
        }
        out.g.push_back(Expr::sum(terms));
    }
    for (const RatMatrix& b : d.coeffs) out.coeffs.push_back(c_mat * b * *dinv);
    for (const Rank1Term& t : d.terms) {
        Rank1Term nt;
        nt.order = t.order;
        nt.h = t.h;
        nt.a.assign(n, Rat(0));
        nt.b.assign(n, Rat(0));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                nt.a[j] += t.a[k] * dinv->at(k, j);  // a^T D^{-1}
                nt.b[j] += c_mat.at(j, k) * t.b[k];  // C b
            }
        out.terms.push_back(std::move(nt));
    }
    return out;
}

DaeSystem multibody(int n_nodes, const std::vector<MultibodyEdge>& edges, const RatMatrix& a_in,
                    const RatMatrix& b_out, const std::vector<Expr>& p_signals) {
    const int n = n_nodes, d = a_in.cols();
    if (a_in.rows() != n || b_out.cols() != n || b_out.rows() != d || static_cast<int>(p_signals.size()) != d)
        throw std::invalid_argument("multibody: dimension mismatch");
    DaeSystem dae;
    for (int j = 1; j <= n; ++j) dae.var_names.push_back("x" + std::to_string(j));
    for (int j = 1; j <= d; ++j) dae.var_names.push_back("u" + std::to_string(j));
    std::vector<std::vector<Expr>> acc(n);
    for (const MultibodyEdge& e : edges) {
        if (e.i < 1 || e.j <= e.i || e.j > n) throw std::invalid_argument("multibody: bad edge");
        int ord = e.kind == InteractionKind::Velocity ? 1 : 0;
        std::string name = "k" + std::to_string(e.i) + "_" + std::to_string(e.j);
        dae.functions.push_back(name);
        Expr force = Expr::apply(name, Expr::var(e.i, ord) - Expr::var(e.j, ord));
        // force on X_i for i < j, opposite sign on X_j
        acc[e.i - 1].push_back(-force);
        acc[e.j - 1].push_back(force);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms{Expr::var(i + 1, 2)};
        for (Expr& f : acc[i]) terms.push_back(f);
        for (int j = 0; j < d; ++j) {
            const Rat& c = a_in.at(i, j);
            if (c != 0) terms.push_back(Expr::rational(-c) * Expr::var(n + j + 1));
        }
        dae.equations.push_back(Expr::sum(terms));
    }
    for (int r = 0; r < d; ++r) {
        std::vector<Expr> terms;
        for (int j = 0; j < n; ++j) {
            const Rat& c = b_out.at(r, j);
            if (c != 0) terms.push_back(Expr::rational(c) * Expr::var(j + 1));
        }
        terms.push_back(-p_signals[r]);
        dae.equations.push_back(Expr::sum(terms));
    }
    return dae;
}

Rank1FormDae multibody_rank1(int n_nodes, const std::vector<MultibodyEdge>& edges, const RatMatrix& a_in,
                             const RatMatrix& b_out, const std::vector<Expr>& p_signals) {
    const int n = n_nodes, d = a_in.cols();
    const int size = n + d;
    Rank1FormDae out;
    out.coeffs.assign(3, RatMatrix(size, size));
    for (int i = 0; i < n; ++i) out.coeffs[2].at(i, i) = 1;  // x-accelerations
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) out.coeffs[0].at(i, n + j) = -a_in.at(i, j);
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < n; ++j) out.coeffs[0].at(n + r, j) = b_out.at(r, j);
    out.g.assign(size, Expr::zero());
    for (int r = 0; r < d; ++r) out.g[n + r] = -p_signals[r];
    for (const MultibodyEdge& e : edges) {
        Rank1Term t;
        t.order = e.kind == InteractionKind::Velocity ? 1 : 0;
        t.h = "k" + std::to_string(e.i) + "_" + std::to_string(e.j);
        t.a.assign(size, Rat(0));
        t.b.assign(size, Rat(0));
        t.a[e.i - 1] = 1;
        t.a[e.j - 1] = -1;
        t.b[e.i - 1] = -1;
        t.b[e.j - 1] = 1;
        out.terms.push_back(std::move(t));
    }
    return out;
}

std::map<std::string, std::function<double(double)>> benchmark_evaluators() {
    std::map<std::string, std::function<double(double)>> fs;
    fs["e"] = [](double x) { return 1e-6 * (std::exp(x / 0.026) - 1.0); };
    fs["e'"] = [](double x) { return 1e-6 / 0.026 * std::exp(x / 0.026); };
    fs["q"] = [](double x) { return 40.67286402e-9 * (std::exp(17.7493332 * x) - 1.0); };
    fs["q'"] = [](double x) { return 40.67286402e-9 * 17.7493332 * std::exp(17.7493332 * x); };
    fs["U_e"] = [](double t) { return 0.1 * std::sin(200.0 * M_PI * t); };
    fs["U_e'"] = [](double t) { return 0.1 * 200.0 * M_PI * std::cos(200.0 * M_PI * t); };
    fs["U_in1"] = [](double t) { return 0.5 * std::sin(2000.0 * M_PI * t); };
    fs["U_in1'"] = [](double t) { return 0.5 * 2000.0 * M_PI * std::cos(2000.0 * M_PI * t); };
    fs["U_in2"] = [](double t) { return 2.0 * std::sin(20000.0 * M_PI * t); };
    fs["U_in2'"] = [](double t) { return 2.0 * 20000.0 * M_PI * std::cos(20000.0 * M_PI * t); };
    fs["r"] = [](double x) { return std::tanh(2.0 * x); };
    fs["r'"] = [](double x) { double c = std::cosh(2.0 * x); return 2.0 / (c * c); };
    fs["c"] = [](double x) { return x + 0.1 * x * x; };
    fs["c'"] = [](double x) { return 1.0 + 0.2 * x; };
    fs["l"] = [](double x) { return std::sinh(x); };
    fs["l'"] = [](double x) { return std::cosh(x); };
    return fs;
}

}  // namespace daereg
