#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daereg/linsym.hpp"
#include "daereg/matroid.hpp"
#include "daereg/matrix.hpp"

namespace daereg {

// Sparse representation of a 1CM-matrix: (n+m) x (n+m) with A0 | b-columns on
// top and c-rows | diag(alpha) below. The alpha cells are symbolic; rank is
// only probed by substitution (tests), never eliminated symbolically.
struct SparseRep {
    RatMatrix base;                            // constants, zero at symbol cells
    std::vector<std::pair<int, int>> sym_cells;  // positions of alpha_1..alpha_m
};
SparseRep sparse_rep(const OneCMMatrix& a);

// Layered sparse representation: (n+2m) x (n+2m) layered mixed matrix with
// Q-part [I_m | O | c-stack; O | B | A0] and a T-part of 2m distinct symbols
// on two diagonals.
LayeredMixedMatrix layered_sparse_rep(const OneCMMatrix& a);

// rank A = min_I rank (A0 B[I]; C[[m]\I]^T O) over I subset of [m].
struct OneCMRank {
    long rank = 0;
    std::vector<int> I;  // minimizer, ascending, indices into factors
    bool used_fallback = false;  // index extraction failed its self-check
};

// Bordered matrix of the minimization above for a given I.
RatMatrix bordered_matrix(const OneCMMatrix& a, const std::vector<int>& I);

// Computes the rank via lm_rank on the layered sparse representation and the
// index-extraction rule, self-checked against the bordered-rank identity;
// falls back to direct minimization over I for small m if extraction fails.
OneCMRank rank_1cm(const OneCMMatrix& a);

// Nonsingular (U, V) with trank(U A V) < n, triangular along (p, q), plus the
// certified all-zero block of U A V (|rows| + |cols| = 2n - rank A).
struct VanishingPair {
    RatMatrix U, V;
    std::vector<int> block_rows, block_cols;
    std::vector<int> p, q;
};

// Algorithm: find minimizer I; eliminate rows of B[I] along p, columns of
// C[[m]\I]^T along q, then clear the remaining constant block of U A0 V on
// the zero rows without leaving them. nullopt reports a nonsingular input.
std::optional<VanishingPair> vanishing_pair(const OneCMMatrix& a, const std::vector<int>& p,
                                            const std::vector<int>& q);

struct PairValidation {
    bool ok = false;
    std::string reason;  // empty when ok
    long trank_uav = 0;
};

// Checks exact nonsingularity of U and V, triangularity along (p, q), and
// that the symbolic support of U A V has term-rank < n. The support is exact:
// constant part from U A0 V, symbol parts from (U b_k)(c_k^T V) outer
// supports; distinct symbols cannot cancel one another.
PairValidation validate_vanishing_pair(const OneCMMatrix& a, const RatMatrix& u, const RatMatrix& v,
                                       const std::vector<int>& p, const std::vector<int>& q);

}  // namespace daereg
