#pragma once

#include <optional>
#include <vector>

#include "daereg/matrix.hpp"

namespace daereg {

// Exact rank by fraction-free (Bareiss) elimination on a row-scaled integer copy.
long rat_rank(const RatMatrix& m);

Rat rat_det(const RatMatrix& m);
std::optional<RatMatrix> rat_inverse(const RatMatrix& m);  // nullopt if singular

// Result of constrained elimination. E is exactly nonsingular and
// upper-triangular along the priority vector (E_ij = 0 whenever r_i > r_j).
struct PriorityElim {
    RatMatrix E;
    std::vector<int> zeroed;  // zero rows of E*M (or zero columns of M*E), ascending
    long rank = 0;
};

// E*M has exactly rows(M) - rank(M) zero rows; a pivot row j may be combined
// into a target row i only when r_j >= r_i, so dependent rows are zeroed among
// the smallest-priority rows feasible (ties: lowest index enters the basis first).
PriorityElim eliminate_rows_with_priority(const RatMatrix& m, const std::vector<int>& prio);

// Column-side mirror: M*E has exactly cols(M) - rank(M) zero columns; a target
// column may be combined only with columns of smaller or equal priority.
PriorityElim eliminate_cols_with_priority(const RatMatrix& m, const std::vector<int>& prio);

bool is_triangular_along(const RatMatrix& e, const std::vector<int>& prio);

// Degree in s of det(sum_l A_l s^l), exact via evaluation at k*n+1 rational
// points and Lagrange interpolation; nullopt for an identically zero determinant.
std::optional<long> poly_det_degree(const std::vector<RatMatrix>& coeffs);

// Coefficients of det(sum_l A_l s^l), lowest degree first (trailing zeros trimmed).
std::vector<Rat> poly_det_coeffs(const std::vector<RatMatrix>& coeffs);

}  // namespace daereg
