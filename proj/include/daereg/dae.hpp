#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "daereg/expr.hpp"

namespace daereg {

// A square DAE f(x, x', ..., t) = 0: n equations over n named variables.
struct DaeSystem {
    std::vector<std::string> var_names;
    std::vector<Expr> equations;
    std::vector<std::string> parameters;  // declared parameter symbols
    std::vector<std::string> functions;   // declared opaque function symbols

    int size() const { return static_cast<int>(equations.size()); }
    int max_order() const {
        int k = 0;
        for (const Expr& f : equations) k = std::max(k, max_total_order(f));
        return k;
    }
    void validate() const;  // throws std::invalid_argument on malformed systems
};

// n x n array over Z>=0 union {-infinity}.
struct SigmaMatrix {
    static constexpr int kNegInf = std::numeric_limits<int>::min();

    int n = 0;
    std::vector<int> entries;

    SigmaMatrix() = default;
    explicit SigmaMatrix(int n_) : n(n_), entries(static_cast<size_t>(n_) * n_, kNegInf) {}

    int at(int i, int j) const { return entries[static_cast<size_t>(i) * n + j]; }
    void set(int i, int j, int v) { entries[static_cast<size_t>(i) * n + j] = v; }
    bool finite(int i, int j) const { return at(i, j) != kNegInf; }

    // Integer grid with '*' for -infinity.
    std::string to_string() const;
};

SigmaMatrix sigma_matrix(const DaeSystem& dae);

// Optimal duals of the assignment problem (D_f), canonicalized to the
// elementwise-smallest nonnegative optimal solution.
struct DualPair {
    std::vector<int> p, q;
    long delta_hat = 0;
};

// nullopt means structurally singular: no perfect matching on finite entries.
std::optional<DualPair> solve_dual(const SigmaMatrix& sigma);

// Independent check: maximum weight of a perfect matching over finite edges,
// by bitmask dynamic programming (practical up to n ~ 20). nullopt = -infinity.
std::optional<long> max_matching_weight(const SigmaMatrix& sigma);

// q_j - p_i >= sigma(i,j) for all finite entries.
bool duals_feasible(const SigmaMatrix& sigma, const std::vector<int>& p, const std::vector<int>& q);

}  // namespace daereg
