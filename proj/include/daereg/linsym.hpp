#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "daereg/dae.hpp"
#include "daereg/expr.hpp"
#include "daereg/matrix.hpp"
#include "daereg/matroid.hpp"

namespace daereg {

struct InfeasibleDuals : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// n x n functional matrix of expressions.
struct SymMatrix {
    int n = 0;
    std::vector<Expr> entries;

    SymMatrix() = default;
    explicit SymMatrix(int n_) : n(n_), entries(static_cast<size_t>(n_) * n_) {}
    const Expr& at(int i, int j) const { return entries[static_cast<size_t>(i) * n + j]; }
    Expr& at(int i, int j) { return entries[static_cast<size_t>(i) * n + j]; }
};

// J^{p,q}(i,j) = d f_i / d x_j^{(q_j - p_i)}, zero when q_j - p_i < 0.
// Throws InfeasibleDuals if some sigma(i,j) > q_j - p_i.
SymMatrix system_jacobian(const DaeSystem& dae, const std::vector<int>& p, const std::vector<int>& q);

// Linear symbolic matrix A0 + sum_k atom_k * A_k with pairwise-distinct atoms.
struct LinSymTerm {
    std::string label;  // display symbol, e.g. "a3"
    Expr atom;          // monic functional atom
    RatMatrix coeff;    // nonzero coefficient matrix
};
struct LinSymMatrix {
    int n = 0;
    RatMatrix A0;
    std::vector<LinSymTerm> terms;

    Expr entry(int i, int j) const;  // reconstruction A0 + sum atom_k * A_k
};

// Expands every entry into coefficient*atom summands; rational-only summands
// accumulate into A0 and functional atoms are deduplicated across the whole
// matrix by canonical hash (with exact string dedup behind the keys).
LinSymMatrix to_linear_symbolic(const SymMatrix& j);

// Keeps a maximal linearly independent subset of the coefficient matrices
// (greedy by index, exact elimination of the m x n^2 flattening).
LinSymMatrix compress_symbols(const LinSymMatrix& l);

// 1CM-matrix: A0 + sum_k atom_k * b_k c_k^T.
struct OneCMFactor {
    std::string label;   // provenance: original symbol label + split index
    Expr atom;
    int split_index = 0;
    RatVec b, c;
};
struct OneCMMatrix {
    int n = 0;
    RatMatrix A0;
    std::vector<OneCMFactor> factors;

    Expr entry(int i, int j) const;
    RatMatrix b_matrix() const;  // n x m, columns b_k
    RatMatrix c_matrix() const;  // n x m, columns c_k
};

// Exact rank factorization of every coefficient matrix into rank-one outer
// products; rank-one matrices pass through with a single factor.
OneCMMatrix rank_one_split(const LinSymMatrix& l);

// Layer form of a DAE given the decomposition sum_l A_l x^{(l)} + g = 0:
//   y + sum_l A_l x^{(l)} = 0,  -y + g = 0     (size 2n)
// plus the layered-mixed approximation of its system Jacobian at the
// canonical duals: top n rows constant, functional entries of the bottom n
// rows replaced by distinct symbols (constants there stay constant).
struct LayerForm {
    DaeSystem dae;  // 2n equations over (x, y)
    DualPair duals;
    LayeredMixedMatrix jm;
    int symbol_count = 0;  // distinct symbols introduced in the T part
};
LayerForm layer_form(const DaeSystem& dae, const std::vector<RatMatrix>& a_coeffs, const std::vector<Expr>& g);

}  // namespace daereg
