#include "daereg/transform.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "daereg/exactla.hpp"

namespace daereg {

DaeSystem apply_row_transform(const DaeSystem& dae, const RatMatrix& u, const std::vector<int>& p) {
    const int n = dae.size();
    if (u.rows() != n || u.cols() != n || static_cast<int>(p.size()) != n)
        throw std::invalid_argument("apply_row_transform: dimension mismatch");
    if (!is_triangular_along(u, p))
        throw TriangularityViolation("apply_row_transform: U not triangular along p");
    DaeSystem out = dae;
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        for (int k = 0; k < n; ++k) {
            const Rat& c = u.at(i, k);
            if (c == 0) continue;
            int order = p[k] - p[i];
            if (order < 0) throw TriangularityViolation("apply_row_transform: negative derivative order");
            terms.push_back(Expr::rational(c) * diff_time_n(dae.equations[k], order));
        }
        out.equations[i] = Expr::sum(terms);
    }
    return out;
}

DaeSystem apply_col_transform(const DaeSystem& dae, const RatMatrix& v, const std::vector<int>& q,
                              const std::vector<std::string>* new_names) {
    const int n = dae.size();
    if (v.rows() != n || v.cols() != n || static_cast<int>(q.size()) != n)
        throw std::invalid_argument("apply_col_transform: dimension mismatch");
    if (!is_triangular_along(v, q))
        throw TriangularityViolation("apply_col_transform: V not triangular along q");
    // one substitution entry per occurring (m, l) pair
    VarSubst subst;
    for (const Expr& f : dae.equations)
        for (int m = 1; m <= n; ++m)
            for (int l = 0; l <= max_var_order(f, m); ++l) {
                if (subst.count({m, l})) continue;
                std::vector<Expr> terms;
                for (int j = 0; j < n; ++j) {
                    const Rat& c = v.at(m - 1, j);
                    if (c == 0) continue;
                    int order = q[j] - q[m - 1] + l;
                    if (order < 0) throw TriangularityViolation("apply_col_transform: negative derivative order");
                    terms.push_back(Expr::rational(c) * Expr::var(j + 1, order));
                }
                subst[{m, l}] = Expr::sum(terms);
            }
    DaeSystem out = dae;
    if (new_names) {
        if (static_cast<int>(new_names->size()) != n)
            throw std::invalid_argument("apply_col_transform: name roster size mismatch");
        out.var_names = *new_names;
    } else {
        out.var_names.clear();
        for (int j = 1; j <= n; ++j) out.var_names.push_back("y" + std::to_string(j));
    }
    for (Expr& f : out.equations) f = substitute(f, subst);
    return out;
}

namespace {

// Float-point rank probe of the symbolic Jacobian; advisory only.
// Returns nullopt when some expression cannot be evaluated (missing
// evaluator for an opaque function).
std::optional<long> probe_rank(const SymMatrix& j, const DaeSystem& dae, const RegularizeOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> val(0.5, 1.5);
    long best = -1;
    for (int trial = 0; trial < 5; ++trial) {
        EvalPoint pt;
        pt.t = val(rng);
        int k = dae.max_order() + 1;
        for (int v = 1; v <= dae.size(); ++v)
            for (int l = 0; l <= k; ++l) pt.vars[{v, l}] = val(rng);
        for (const std::string& p : dae.parameters) pt.params[p] = val(rng);
        pt.functions = opts.evaluators;
        std::vector<double> m(static_cast<size_t>(j.n) * j.n);
        try {
            for (int r = 0; r < j.n; ++r)
                for (int c = 0; c < j.n; ++c) m[static_cast<size_t>(r) * j.n + c] = eval_float(j.at(r, c), pt);
        } catch (const EvalError&) {
            return std::nullopt;
        }
        // Gaussian elimination with partial pivoting, tolerance 1e-8 * |J|
        int n = j.n;
        double norm = 0;
        for (double x : m) norm = std::max(norm, std::abs(x));
        double tol = 1e-8 * std::max(norm, 1.0);
        long rank = 0;
        std::vector<int> rows(n);
        for (int i = 0; i < n; ++i) rows[i] = i;
        for (int c = 0; c < n && rank < n; ++c) {
            int piv = -1;
            double bestv = tol;
            for (int r = static_cast<int>(rank); r < n; ++r) {
                double x = std::abs(m[static_cast<size_t>(rows[r]) * n + c]);
                if (x > bestv) {
                    bestv = x;
                    piv = r;
                }
            }
            if (piv < 0) continue;
            std::swap(rows[rank], rows[piv]);
            double d = m[static_cast<size_t>(rows[rank]) * n + c];
            for (int r = static_cast<int>(rank) + 1; r < n; ++r) {
                double f = m[static_cast<size_t>(rows[r]) * n + c] / d;
                for (int x = c; x < n; ++x) m[static_cast<size_t>(rows[r]) * n + x] -= f * m[static_cast<size_t>(rows[rank]) * n + x];
            }
            ++rank;
        }
        best = std::max(best, rank);
    }
    return best;
}

}  // namespace

RegularizationResult regularize(const DaeSystem& dae, const RegularizeOptions& opts) {
    RegularizationResult res;
    res.dae = dae;
    res.dae.validate();
    const int n = dae.size();

    int iter_cap = opts.max_iters;
    long prev_delta = -1;
    bool have_prev = false;
    for (int iter = 0;; ++iter) {
        SigmaMatrix sigma = sigma_matrix(res.dae);
        auto duals = solve_dual(sigma);
        if (!duals) {
            res.status = RegStatus::StructurallySingular;
            return res;
        }
        if (have_prev && duals->delta_hat >= prev_delta)
            throw InternalInvariantViolation("regularize: delta_hat failed to decrease strictly");
        prev_delta = duals->delta_hat;
        have_prev = true;
        if (iter_cap < 0) iter_cap = static_cast<int>(duals->delta_hat) + 1;

        SymMatrix j = system_jacobian(res.dae, duals->p, duals->q);
        LinSymMatrix lsm = compress_symbols(to_linear_symbolic(j));
        OneCMMatrix a = rank_one_split(lsm);
        OneCMRank rk = rank_1cm(a);

        IterationRecord rec;
        rec.p = duals->p;
        rec.q = duals->q;
        rec.delta_hat = duals->delta_hat;
        rec.lsm_symbols = static_cast<int>(lsm.terms.size());
        rec.onecm_symbols = static_cast<int>(a.factors.size());
        rec.rank_1cm = rk.rank;
        rec.n = n;

        if (rk.rank == n) {
            res.status = RegStatus::Regularized;
            if (opts.probe) {
                auto pr = probe_rank(j, res.dae, opts);
                if (!pr) {
                    res.probe_note = "probe skipped: no evaluator for an opaque function";
                } else if (*pr < n) {
                    res.status = RegStatus::Inconclusive;
                    res.probe_note = "float probe saw rank " + std::to_string(*pr) + " < n; the 1CM certificate " +
                                     "disagrees with a numeric sample, consider a symbolic-elimination method";
                } else {
                    res.probe_note = "float probe agrees: full rank at sampled points";
                }
            }
            res.trace.push_back(std::move(rec));
            return res;
        }

        if (iter >= iter_cap)
            throw InternalInvariantViolation("regularize: iteration cap exceeded without termination");

        auto vp = vanishing_pair(a, duals->p, duals->q);
        if (!vp) throw InternalInvariantViolation("regularize: singular 1CM matrix produced no vanishing pair");
        rec.pair = *vp;
        res.trace.push_back(std::move(rec));

        DaeSystem rowed = apply_row_transform(res.dae, vp->U, duals->p);
        std::vector<std::string> names;
        for (int v = 1; v <= n; ++v) names.push_back("y" + std::to_string(iter + 1) + "_" + std::to_string(v));
        res.dae = apply_col_transform(rowed, vp->V, duals->q, &names);
        res.v_chain.push_back({vp->V, duals->q});
    }
}

DaeSystem retrieval_system(const RegularizationResult& result, const DaeSystem& original) {
    if (result.status != RegStatus::Regularized)
        throw std::invalid_argument("retrieval_system: result is not Regularized");
    const int n = result.dae.size();
    DaeSystem out;
    out.parameters = result.dae.parameters;
    out.functions = result.dae.functions;
    out.var_names = original.var_names;
    for (int i = 0; i < n; ++i) out.var_names.push_back("z" + std::to_string(i + 1));

    // f*_i = f^r_i over the z block
    for (int i = 0; i < n; ++i) out.equations.push_back(shift_var_indices(result.dae.equations[i], n));

    // f*_{n+i} = x_i - (V^1(D_t) ... V^r(D_t) z)_i
    std::vector<Expr> u(n);
    for (int j = 0; j < n; ++j) u[j] = Expr::var(n + j + 1);
    for (auto it = result.v_chain.rbegin(); it != result.v_chain.rend(); ++it) {
        const RatMatrix& v = it->first;
        const std::vector<int>& q = it->second;
        std::vector<Expr> next(n);
        for (int m = 0; m < n; ++m) {
            std::vector<Expr> terms;
            for (int j = 0; j < n; ++j) {
                const Rat& c = v.at(m, j);
                if (c == 0) continue;
                int order = q[j] - q[m];
                if (order < 0) throw TriangularityViolation("retrieval_system: negative operator order");
                terms.push_back(Expr::rational(c) * diff_time_n(u[j], order));
            }
            next[m] = Expr::sum(terms);
        }
        u = std::move(next);
    }
    for (int i = 0; i < n; ++i) out.equations.push_back(Expr::var(i + 1) - u[i]);
    return out;
}

SigmaMatrix lti_sigma(const std::vector<RatMatrix>& coeffs) {
    const int n = coeffs.at(0).rows();
    SigmaMatrix s(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = static_cast<int>(coeffs.size()) - 1; l >= 0; --l)
                if (coeffs[l].at(i, j) != 0) {
                    s.set(i, j, l);
                    break;
                }
    return s;
}

DaeSystem lti_to_dae(const LtiSystem& sys) {
    const int n = sys.coeffs.at(0).rows();
    DaeSystem dae;
    for (int j = 1; j <= n; ++j) dae.var_names.push_back("x" + std::to_string(j));
    for (int i = 0; i < n; ++i) {
        std::vector<Expr> terms;
        for (size_t l = 0; l < sys.coeffs.size(); ++l)
            for (int j = 0; j < n; ++j) {
                const Rat& c = sys.coeffs[l].at(i, j);
                if (c != 0) terms.push_back(Expr::rational(c) * Expr::var(j + 1, static_cast<int>(l)));
            }
        if (i < static_cast<int>(sys.g.size()) && !sys.g[i].is_zero()) terms.push_back(-sys.g[i]);
        dae.equations.push_back(Expr::sum(terms));
    }
    return dae;
}

LtiRegularizationResult lti_regularize(const LtiSystem& sys, int max_iters) {
    LtiRegularizationResult res;
    res.system = sys;
    const int n = sys.coeffs.at(0).rows();
    for (const auto& a : sys.coeffs)
        if (a.rows() != n || a.cols() != n) throw std::invalid_argument("lti_regularize: square coefficients required");

    long prev_delta = -1;
    bool have_prev = false;
    int cap = max_iters;
    for (int iter = 0;; ++iter) {
        SigmaMatrix sigma = lti_sigma(res.system.coeffs);
        auto duals = solve_dual(sigma);
        if (!duals) {
            res.status = RegStatus::StructurallySingular;
            return res;
        }
        if (have_prev && duals->delta_hat >= prev_delta)
            throw InternalInvariantViolation("lti_regularize: delta_hat failed to decrease strictly");
        prev_delta = duals->delta_hat;
        have_prev = true;
        if (cap < 0) cap = static_cast<int>(duals->delta_hat) + 1;

        // constant system Jacobian J_ij = (A_{q_j - p_i})_ij
        RatMatrix j(n, n);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < n; ++c) {
                int l = duals->q[c] - duals->p[i];
                if (l >= 0 && l < static_cast<int>(res.system.coeffs.size())) j.at(i, c) = res.system.coeffs[l].at(i, c);
            }
        LtiIteration rec;
        rec.p = duals->p;
        rec.q = duals->q;
        rec.delta_hat = duals->delta_hat;
        rec.rank_j = rat_rank(j);
        res.trace.push_back(rec);
        if (rec.rank_j == n) {
            res.status = RegStatus::Regularized;
            return res;
        }
        if (iter >= cap) throw InternalInvariantViolation("lti_regularize: iteration cap exceeded");

        PriorityElim ue = eliminate_rows_with_priority(j, duals->p);
        res.u_chain.push_back(ue.E);
        // A'(s) = U(s) A(s): A'_l[i][j] = sum_k U_ik A_{l - p_k + p_i}[k][j]
        int old_k = static_cast<int>(res.system.coeffs.size()) - 1;
        int max_shift = 0;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                if (ue.E.at(i, k) != 0) max_shift = std::max(max_shift, duals->p[k] - duals->p[i]);
        std::vector<RatMatrix> ncoeffs(old_k + max_shift + 1, RatMatrix(n, n));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Rat& c = ue.E.at(i, k);
                if (c == 0) continue;
                int shift = duals->p[k] - duals->p[i];
                if (shift < 0) throw TriangularityViolation("lti_regularize: negative operator order");
                for (int l = 0; l <= old_k; ++l)
                    for (int col = 0; col < n; ++col) {
                        const Rat& v = res.system.coeffs[l].at(k, col);
                        if (v != 0) ncoeffs[l + shift].at(i, col) += c * v;
                    }
            }
        while (ncoeffs.size() > 1 && ncoeffs.back().is_zero()) ncoeffs.pop_back();
        std::vector<Expr> ng(n, Expr::zero());
        for (int i = 0; i < n; ++i) {
            std::vector<Expr> terms;
            for (int k = 0; k < n; ++k) {
                const Rat& c = ue.E.at(i, k);
                if (c == 0) continue;
                Expr gk = k < static_cast<int>(res.system.g.size()) ? res.system.g[k] : Expr::zero();
                terms.push_back(Expr::rational(c) * diff_time_n(gk, duals->p[k] - duals->p[i]));
            }
            ng[i] = Expr::sum(terms);
        }
        res.system.coeffs = std::move(ncoeffs);
        res.system.g = std::move(ng);
    }
}

}  // namespace daereg
