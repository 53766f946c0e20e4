#pragma once

#include <tuple>
#include <vector>

#include "daereg/matrix.hpp"

namespace daereg {

// Sparse bipartite support of a matrix.
struct Support {
    int rows = 0, cols = 0;
    std::vector<std::pair<int, int>> entries;
};

// Term-rank with a Konig witness: an all-zero block (block_rows x block_cols)
// with |block_rows| + |block_cols| = rows + cols - trank.
struct TrankCert {
    long trank = 0;
    std::vector<int> block_rows, block_cols;
};

TrankCert trank(const Support& s);

// Layered mixed matrix (Q; T): constant Q on top, T below with each nonzero a
// distinct symbol. t_constants holds rational entries appearing in the T rows
// of layer-form approximations; lm_rank requires it empty, trank does not.
struct LayeredMixedMatrix {
    RatMatrix Q;  // m_Q x cols
    int t_rows = 0;
    struct TEntry {
        int row, col, sym;  // row < t_rows, 0-based; sym ids pairwise distinct
    };
    std::vector<TEntry> t_entries;
    std::vector<std::tuple<int, int, Rat>> t_constants;

    int cols() const { return Q.cols(); }
    int rows() const { return Q.rows() + t_rows; }
    Support support() const;
    void validate() const;
};

// Certificate for the layered-mixed rank identity
//   rank A = min_{I subset of C} { rank Q[I] + trank T[I] + |C \ I| }.
struct LMRankCert {
    long rank = 0;
    std::vector<int> I;  // a minimizer, ascending
};

// Rank of a layered mixed matrix by the matroid-union (independent matching)
// algorithm: linear matroid of Q's columns against the transversal matroid of
// T's support, augmenting-path based; the certificate I is the reachable set
// of the final failed search.
LMRankCert lm_rank(const LayeredMixedMatrix& a);

long trank_of_columns(const LayeredMixedMatrix& a, const std::vector<int>& cols);

}  // namespace daereg
