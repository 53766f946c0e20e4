#include "daereg/dae.hpp"

#include <algorithm>
#include <stdexcept>

namespace daereg {

void DaeSystem::validate() const {
    if (var_names.size() != equations.size())
        throw std::invalid_argument("DaeSystem: equation count differs from variable count");
    int n = size();
    for (const Expr& f : equations) {
        // every referenced variable index must be within the roster
        struct Walk {
            int n;
            void run(const Expr& e) const {
                if (e.kind() == Expr::Kind::Var) {
                    if (e.var_index() < 1 || e.var_index() > n)
                        throw std::invalid_argument("DaeSystem: variable index out of range");
                    return;
                }
                switch (e.kind()) {
                    case Expr::Kind::Pow:
                    case Expr::Kind::Apply:
                    case Expr::Kind::Product:
                    case Expr::Kind::Sum:
                        for (const Expr& c : e.children()) run(c);
                        break;
                    default:
                        break;
                }
            }
        } w{n};
        w.run(f);
    }
}

std::string SigmaMatrix::to_string() const {
    // column widths for alignment
    std::vector<std::string> cells(static_cast<size_t>(n) * n);
    size_t width = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::string& c = cells[static_cast<size_t>(i) * n + j];
            c = finite(i, j) ? std::to_string(at(i, j)) : "*";
            width = std::max(width, c.size());
        }
    std::string out;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::string& c = cells[static_cast<size_t>(i) * n + j];
            out += std::string(width - c.size(), ' ') + c;
            if (j + 1 < n) out += " ";
        }
        out += "\n";
    }
    return out;
}

SigmaMatrix sigma_matrix(const DaeSystem& dae) {
    dae.validate();
    int n = dae.size();
    SigmaMatrix s(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> occ = var_max_orders(dae.equations[i], n);
        for (int j = 0; j < n; ++j) {
            // scan down from the occurrence order; a cancellation in the
            // derivative lowers sigma below it
            for (int l = occ[j]; l >= 0; --l)
                if (!diff_partial(dae.equations[i], j + 1, l).is_zero()) {
                    s.set(i, j, l);
                    break;
                }
        }
    }
    return s;
}

bool duals_feasible(const SigmaMatrix& sigma, const std::vector<int>& p, const std::vector<int>& q) {
    int n = sigma.n;
    if (static_cast<int>(p.size()) != n || static_cast<int>(q.size()) != n) return false;
    for (int i = 0; i < n; ++i) {
        if (p[i] < 0 || q[i] < 0) return false;
        for (int j = 0; j < n; ++j)
            if (sigma.finite(i, j) && q[j] - p[i] < sigma.at(i, j)) return false;
    }
    return true;
}

namespace {

// Maximum-weight perfect matching on finite entries via the O(n^3) Hungarian
// method (potentials and slack arrays, lowest-index-first scanning).
// Returns row -> column assignment, or nullopt when no perfect matching exists.
std::optional<std::vector<int>> hungarian_max(const SigmaMatrix& sigma) {
    const int n = sigma.n;
    if (n == 0) return std::vector<int>{};
    const long long kInf = std::numeric_limits<long long>::max() / 4;
    // minimize cost = -sigma over allowed edges
    std::vector<long long> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);  // 1-based; match[j] = row matched to column j
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<long long> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = match[j0], j1 = -1;
            long long delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                if (sigma.finite(i0 - 1, j - 1)) {
                    long long cur = -static_cast<long long>(sigma.at(i0 - 1, j - 1)) - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (delta >= kInf / 2) return std::nullopt;  // no augmenting edge: structurally singular
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else if (minv[j] < kInf / 2) {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

std::optional<DualPair> solve_dual(const SigmaMatrix& sigma) {
    const int n = sigma.n;
    auto matching = hungarian_max(sigma);
    if (!matching) return std::nullopt;
    const std::vector<int>& m = *matching;

    // Smallest optimal dual by fixed-point iteration from p = 0:
    //   q_j <- max_i (sigma(i,j) + p_i),  p_i <- q_{m(i)} - sigma(i, m(i)).
    // Monotone nondecreasing and bounded above by every optimal dual, so it
    // converges to the elementwise-smallest one.
    std::vector<int> p(n, 0), q(n, 0);
    long weight = 0;
    for (int i = 0; i < n; ++i) weight += sigma.at(i, m[i]);
    long guard = 0;
    for (;;) {
        for (int j = 0; j < n; ++j) {
            int best = SigmaMatrix::kNegInf;
            for (int i = 0; i < n; ++i)
                if (sigma.finite(i, j)) best = std::max(best, sigma.at(i, j) + p[i]);
            if (best == SigmaMatrix::kNegInf)
                throw std::logic_error("solve_dual: unmatched column despite perfect matching");
            q[j] = best;
        }
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int np = q[m[i]] - sigma.at(i, m[i]);
            if (np != p[i]) {
                p[i] = np;
                changed = true;
            }
        }
        if (!changed) break;
        if (++guard > static_cast<long>(n) * (weight + n + 2) + 4)
            throw std::logic_error("solve_dual: dual fixed point failed to converge");
    }

    DualPair d;
    d.p = p;
    d.q = q;
    d.delta_hat = 0;
    for (int j = 0; j < n; ++j) d.delta_hat += q[j];
    for (int i = 0; i < n; ++i) d.delta_hat -= p[i];
    if (d.delta_hat != weight) throw std::logic_error("solve_dual: strong duality violated");
    if (!duals_feasible(sigma, d.p, d.q)) throw std::logic_error("solve_dual: infeasible dual produced");
    return d;
}

std::optional<long> max_matching_weight(const SigmaMatrix& sigma) {
    const int n = sigma.n;
    if (n > 20) throw std::invalid_argument("max_matching_weight: oracle limited to n <= 20");
    if (n == 0) return 0L;
    const long long kNeg = std::numeric_limits<long long>::min() / 4;
    std::vector<long long> dp(static_cast<size_t>(1) << n, kNeg);
    dp[0] = 0;
    for (size_t mask = 0; mask + 1 < dp.size(); ++mask) {
        if (dp[mask] == kNeg) continue;
        int i = __builtin_popcountll(mask);  // next row to assign
        for (int j = 0; j < n; ++j) {
            if (mask & (1ULL << j)) continue;
            if (!sigma.finite(i, j)) continue;
            size_t next = mask | (1ULL << j);
            dp[next] = std::max(dp[next], dp[mask] + sigma.at(i, j));
        }
    }
    long long best = dp.back();
    if (best == kNeg) return std::nullopt;
    return static_cast<long>(best);
}

}  // namespace daereg
