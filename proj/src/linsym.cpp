#include "daereg/linsym.hpp"

#include <algorithm>
#include <map>

#include "daereg/exactla.hpp"

namespace daereg {

SymMatrix system_jacobian(const DaeSystem& dae, const std::vector<int>& p, const std::vector<int>& q) {
    const int n = dae.size();
    if (static_cast<int>(p.size()) != n || static_cast<int>(q.size()) != n)
        throw std::invalid_argument("system_jacobian: dual size mismatch");
    SymMatrix j(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> occ = var_max_orders(dae.equations[i], n);
        for (int c = 0; c < n; ++c) {
            int order = q[c] - p[i];
            if (occ[c] > order) {
                // occurrence above the dual gap; infeasible unless the
                // high-order derivatives all cancel syntactically
                auto sig = sigma_order(dae.equations[i], c + 1);
                if (sig && *sig > order)
                    throw InfeasibleDuals("system_jacobian: duals infeasible at entry (" + std::to_string(i + 1) +
                                          "," + std::to_string(c + 1) + ")");
            }
            j.at(i, c) = (order < 0 || occ[c] < order) ? Expr::zero()
                                                       : diff_partial(dae.equations[i], c + 1, order);
        }
    }
    return j;
}

Expr LinSymMatrix::entry(int i, int j) const {
    std::vector<Expr> ts{Expr::rational(A0.at(i, j))};
    for (const LinSymTerm& t : terms) {
        if (t.coeff.at(i, j) == 0) continue;
        ts.push_back(Expr::rational(t.coeff.at(i, j)) * t.atom);
    }
    return Expr::sum(ts);
}

Expr OneCMMatrix::entry(int i, int j) const {
    std::vector<Expr> ts{Expr::rational(A0.at(i, j))};
    for (const OneCMFactor& f : factors) {
        Rat c = f.b[i] * f.c[j];
        if (c == 0) continue;
        ts.push_back(Expr::rational(c) * f.atom);
    }
    return Expr::sum(ts);
}

RatMatrix OneCMMatrix::b_matrix() const {
    RatMatrix b(n, static_cast<int>(factors.size()));
    for (size_t k = 0; k < factors.size(); ++k)
        for (int i = 0; i < n; ++i) b.at(i, static_cast<int>(k)) = factors[k].b[i];
    return b;
}

RatMatrix OneCMMatrix::c_matrix() const {
    RatMatrix c(n, static_cast<int>(factors.size()));
    for (size_t k = 0; k < factors.size(); ++k)
        for (int i = 0; i < n; ++i) c.at(i, static_cast<int>(k)) = factors[k].c[i];
    return c;
}

LinSymMatrix to_linear_symbolic(const SymMatrix& j) {
    const int n = j.n;
    LinSymMatrix out;
    out.n = n;
    out.A0 = RatMatrix(n, n);
    // atoms deduplicated by digest, with the serialized normal form kept
    // alongside so equal keys can never merge distinct forms
    std::map<HashKey, std::pair<std::string, size_t>> seen;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            for (const LinTerm& t : linear_terms(j.at(r, c))) {
                if (t.monic.is_one()) {
                    out.A0.at(r, c) += t.coeff;
                    continue;
                }
                HashKey key = canonical_hash(t.monic);
                std::string nf = normal_form_string(t.monic);
                auto it = seen.find(key);
                size_t idx;
                if (it == seen.end()) {
                    idx = out.terms.size();
                    seen.emplace(key, std::make_pair(nf, idx));
                    out.terms.push_back({"a" + std::to_string(idx + 1), t.monic, RatMatrix(n, n)});
                } else {
                    if (it->second.first != nf)
                        throw std::logic_error("to_linear_symbolic: hash key collision between distinct atoms");
                    idx = it->second.second;
                }
                out.terms[idx].coeff.at(r, c) += t.coeff;
            }
        }
    // a coefficient matrix can cancel to zero entirely; drop such symbols
    std::vector<LinSymTerm> kept;
    for (auto& t : out.terms)
        if (!t.coeff.is_zero()) kept.push_back(std::move(t));
    for (size_t k = 0; k < kept.size(); ++k) kept[k].label = "a" + std::to_string(k + 1);
    out.terms = std::move(kept);
    return out;
}

LinSymMatrix compress_symbols(const LinSymMatrix& l) {
    const int n = l.n;
    LinSymMatrix out;
    out.n = n;
    out.A0 = l.A0;
    // incremental elimination over flattened n^2-vectors, greedy by index
    std::vector<std::pair<RatVec, int>> basis;  // reduced vector, pivot position
    for (const LinSymTerm& t : l.terms) {
        RatVec v(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < n; ++c) v[static_cast<size_t>(i) * n + c] = t.coeff.at(i, c);
        for (const auto& [b, piv] : basis) {
            if (v[piv] == 0) continue;
            Rat f = v[piv] / b[piv];
            for (size_t x = 0; x < v.size(); ++x) v[x] -= f * b[x];
        }
        int piv = -1;
        for (size_t x = 0; x < v.size(); ++x)
            if (v[x] != 0) {
                piv = static_cast<int>(x);
                break;
            }
        if (piv < 0) continue;  // dependent on kept coefficient matrices
        basis.push_back({std::move(v), piv});
        out.terms.push_back(t);
    }
    return out;
}

OneCMMatrix rank_one_split(const LinSymMatrix& l) {
    const int n = l.n;
    OneCMMatrix out;
    out.n = n;
    out.A0 = l.A0;
    for (const LinSymTerm& t : l.terms) {
        // CR decomposition: pivot columns of A give B, nonzero rows of the
        // reduced echelon form give C, with A = B * C exactly.
        RatMatrix a = t.coeff;
        std::vector<int> pivot_cols;
        int row = 0;
        for (int col = 0; col < n && row < n; ++col) {
            int piv = -1;
            for (int i = row; i < n; ++i)
                if (a.at(i, col) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            if (piv != row)
                for (int x = 0; x < n; ++x) std::swap(a.at(row, x), a.at(piv, x));
            Rat d = Rat(1) / a.at(row, col);
            for (int x = 0; x < n; ++x) a.at(row, x) *= d;
            for (int i = 0; i < n; ++i) {
                if (i == row || a.at(i, col) == 0) continue;
                Rat f = a.at(i, col);
                for (int x = 0; x < n; ++x) a.at(i, x) -= f * a.at(row, x);
            }
            pivot_cols.push_back(col);
            ++row;
        }
        for (int s = 0; s < row; ++s) {
            OneCMFactor f;
            f.label = row == 1 ? t.label : t.label + "_" + std::to_string(s + 1);
            f.atom = t.atom;
            f.split_index = s;
            f.b = t.coeff.col(pivot_cols[s]);
            f.c = a.row(s);
            out.factors.push_back(std::move(f));
        }
    }
    return out;
}

LayerForm layer_form(const DaeSystem& dae, const std::vector<RatMatrix>& a_coeffs, const std::vector<Expr>& g) {
    const int n = dae.size();
    if (static_cast<int>(g.size()) != n) throw std::invalid_argument("layer_form: g size mismatch");
    for (const auto& a : a_coeffs)
        if (a.rows() != n || a.cols() != n) throw std::invalid_argument("layer_form: coefficient shape mismatch");

    LayerForm out;
    out.dae.var_names = dae.var_names;
    for (int i = 0; i < n; ++i) out.dae.var_names.push_back("y" + std::to_string(i + 1));
    out.dae.parameters = dae.parameters;
    out.dae.functions = dae.functions;
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> ts{Expr::var(n + i + 1)};
        for (size_t l = 0; l < a_coeffs.size(); ++l)
            for (int j = 0; j < n; ++j) {
                const Rat& v = a_coeffs[l].at(i, j);
                if (v != 0) ts.push_back(Expr::rational(v) * Expr::var(j + 1, static_cast<int>(l)));
            }
        out.dae.equations.push_back(Expr::sum(ts));
    }
    for (int i = 0; i < n; ++i) out.dae.equations.push_back(g[i] - Expr::var(n + i + 1));

    auto duals = solve_dual(sigma_matrix(out.dae));
    if (!duals) throw std::invalid_argument("layer_form: layer system is structurally singular");
    out.duals = *duals;

    SymMatrix j = system_jacobian(out.dae, out.duals.p, out.duals.q);
    out.jm.Q = RatMatrix(n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 2 * n; ++c) {
            const Expr& e = j.at(i, c);
            if (!e.is_rational())
                throw std::logic_error("layer_form: non-constant entry in the top rows of the layer Jacobian");
            out.jm.Q.at(i, c) = e.value();
        }
    out.jm.t_rows = n;
    int sym = 0;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 2 * n; ++c) {
            const Expr& e = j.at(n + i, c);
            if (e.is_zero()) continue;
            if (e.is_rational()) out.jm.t_constants.push_back({i, c, e.value()});
            else out.jm.t_entries.push_back({i, c, sym++});
        }
    out.symbol_count = sym;
    return out;
}

}  // namespace daereg
