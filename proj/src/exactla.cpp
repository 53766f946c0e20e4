#include "daereg/exactla.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace daereg {

long rat_rank(const RatMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0;
    // Clear denominators row-wise; row scaling does not change rank.
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (int i = 0; i < rows; ++i) {
        mpz_class lcm = 1;
        for (int j = 0; j < cols; ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
        for (int j = 0; j < cols; ++j) {
            const Rat& v = m.at(i, j);
            a[i][j] = v.get_num() * (lcm / v.get_den());
        }
    }
    // Bareiss fraction-free elimination; pivot = smallest row index available.
    mpz_class prev = 1;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < cols; ++j) {
                mpz_class num = a[i][j] * a[r][c] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

Rat rat_det(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("rat_det: square matrix required");
    const int n = m.rows();
    if (n == 0) return Rat(1);
    RatMatrix a = m;
    Rat det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (a.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a.at(c, j), a.at(piv, j));
            det = -det;
        }
        det *= a.at(c, c);
        Rat inv = Rat(1) / a.at(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (a.at(i, c) == 0) continue;
            Rat f = a.at(i, c) * inv;
            for (int j = c; j < n; ++j) a.at(i, j) -= f * a.at(c, j);
        }
    }
    return det;
}

std::optional<RatMatrix> rat_inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("rat_inverse: square matrix required");
    const int n = m.rows();
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (a.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return std::nullopt;
        if (piv != c)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(c, j), a.at(piv, j));
                std::swap(inv.at(c, j), inv.at(piv, j));
            }
        Rat d = Rat(1) / a.at(c, c);
        for (int j = 0; j < n; ++j) {
            a.at(c, j) *= d;
            inv.at(c, j) *= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || a.at(i, c) == 0) continue;
            Rat f = a.at(i, c);
            for (int j = 0; j < n; ++j) {
                a.at(i, j) -= f * a.at(c, j);
                inv.at(i, j) -= f * inv.at(c, j);
            }
        }
    }
    return inv;
}

namespace {

// Reduces rows of M in the given processing order. The returned E (identity
// combination bookkeeping) is unit-triangular in that order, so nonsingular.
PriorityElim eliminate_rows_ordered(const RatMatrix& m, const std::vector<int>& order) {
    const int rows = m.rows(), cols = m.cols();
    struct BasisRow {
        RatVec row, comb;
        int pivot;
    };
    std::vector<BasisRow> basis;
    RatMatrix e(rows, rows);
    std::vector<int> zeroed;
    for (int idx : order) {
        RatVec row = m.row(idx);
        RatVec comb(rows, Rat(0));
        comb[idx] = 1;
        for (const BasisRow& b : basis) {
            if (row[b.pivot] == 0) continue;
            Rat f = row[b.pivot] / b.row[b.pivot];
            for (int j = 0; j < cols; ++j) row[j] -= f * b.row[j];
            for (int j = 0; j < rows; ++j) comb[j] -= f * b.comb[j];
        }
        int pivot = -1;
        for (int j = 0; j < cols; ++j)
            if (row[j] != 0) {
                pivot = j;
                break;
            }
        if (pivot < 0) zeroed.push_back(idx);
        else basis.push_back({std::move(row), comb, pivot});
        for (int j = 0; j < rows; ++j) e.at(idx, j) = comb[j];
    }
    std::sort(zeroed.begin(), zeroed.end());
    PriorityElim out;
    out.E = std::move(e);
    out.zeroed = std::move(zeroed);
    out.rank = static_cast<long>(basis.size());
    return out;
}

std::vector<int> sorted_indices(int n, const std::vector<int>& prio, bool descending) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (prio[a] != prio[b]) return descending ? prio[a] > prio[b] : prio[a] < prio[b];
        return a < b;
    });
    return order;
}

}  // namespace

PriorityElim eliminate_rows_with_priority(const RatMatrix& m, const std::vector<int>& prio) {
    if (static_cast<int>(prio.size()) != m.rows())
        throw std::invalid_argument("eliminate_rows_with_priority: priority size mismatch");
    // Rows of larger priority enter the basis first, so a row is only ever
    // reduced by rows of >= priority and dependent rows of smallest priority
    // become the zero rows.
    return eliminate_rows_ordered(m, sorted_indices(m.rows(), prio, /*descending=*/true));
}

PriorityElim eliminate_cols_with_priority(const RatMatrix& m, const std::vector<int>& prio) {
    if (static_cast<int>(prio.size()) != m.cols())
        throw std::invalid_argument("eliminate_cols_with_priority: priority size mismatch");
    // Mirror: a column may only be cancelled using columns of <= priority, so
    // smaller-priority columns enter the basis first.
    PriorityElim rowwise = eliminate_rows_ordered(m.transpose(), sorted_indices(m.cols(), prio, /*descending=*/false));
    rowwise.E = rowwise.E.transpose();
    return rowwise;
}

bool is_triangular_along(const RatMatrix& e, const std::vector<int>& prio) {
    for (int i = 0; i < e.rows(); ++i)
        for (int j = 0; j < e.cols(); ++j)
            if (prio[i] > prio[j] && e.at(i, j) != 0) return false;
    return true;
}

std::vector<Rat> poly_det_coeffs(const std::vector<RatMatrix>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("poly_det_coeffs: empty coefficient list");
    const int n = coeffs[0].rows();
    for (const auto& a : coeffs)
        if (a.rows() != n || a.cols() != n) throw std::invalid_argument("poly_det_coeffs: square matrices required");
    if (n == 0) return {Rat(1)};
    const int deg_bound = static_cast<int>(coeffs.size() - 1) * n;
    const int npts = deg_bound + 1;
    // Evaluation points 0, 1, -1, 2, -2, ...
    std::vector<Rat> xs(npts), ys(npts);
    for (int k = 0; k < npts; ++k) {
        long x = k == 0 ? 0 : (k % 2 == 1 ? (k + 1) / 2 : -(k / 2));
        xs[k] = Rat(x);
        RatMatrix m(n, n);
        Rat sp = 1;
        for (const RatMatrix& a : coeffs) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m.at(i, j) += sp * a.at(i, j);
            sp *= xs[k];
        }
        ys[k] = rat_det(m);
    }
    // Newton's divided differences, then expansion to monomial coefficients.
    std::vector<Rat> dd = ys;
    for (int level = 1; level < npts; ++level)
        for (int k = npts - 1; k >= level; --k) dd[k] = (dd[k] - dd[k - 1]) / (xs[k] - xs[k - level]);
    std::vector<Rat> poly{dd[npts - 1]};
    for (int k = npts - 2; k >= 0; --k) {
        // poly = poly * (x - xs[k]) + dd[k]
        std::vector<Rat> next(poly.size() + 1, Rat(0));
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * xs[k];
        }
        next[0] += dd[k];
        poly = std::move(next);
    }
    while (!poly.empty() && poly.back() == 0) poly.pop_back();
    return poly;
}

std::optional<long> poly_det_degree(const std::vector<RatMatrix>& coeffs) {
    std::vector<Rat> poly = poly_det_coeffs(coeffs);
    if (poly.empty()) return std::nullopt;
    return static_cast<long>(poly.size()) - 1;
}

}  // namespace daereg
