#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "daereg/dae.hpp"
#include "daereg/linsym.hpp"
#include "daereg/onecm.hpp"

namespace daereg {

struct TriangularityViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InternalInvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// g_i = sum_k U_ik f_k^{(p_k - p_i)}. Requires U triangular along p.
DaeSystem apply_row_transform(const DaeSystem& dae, const RatMatrix& u, const std::vector<int>& p);

// Change of variables x = V(D_t) y: every x_m^{(l)} is replaced by
// sum_j V_mj y_j^{(q_j - q_m + l)}. Requires V triangular along q.
// new_names supplies the y roster (defaults to y1..yn).
DaeSystem apply_col_transform(const DaeSystem& dae, const RatMatrix& v, const std::vector<int>& q,
                              const std::vector<std::string>* new_names = nullptr);

enum class RegStatus { Regularized, StructurallySingular, Inconclusive };

struct IterationRecord {
    std::vector<int> p, q;
    long delta_hat = 0;
    int lsm_symbols = 0;      // m after compression
    int onecm_symbols = 0;    // m after the rank-one split
    long rank_1cm = 0;
    int n = 0;
    std::optional<VanishingPair> pair;  // present when a transform was applied
};

struct RegularizationResult {
    DaeSystem dae;  // final system
    RegStatus status = RegStatus::StructurallySingular;
    std::vector<IterationRecord> trace;
    // change-of-variable chain: V^k with its q-priorities, in application order
    std::vector<std::pair<RatMatrix, std::vector<int>>> v_chain;
    std::string probe_note;  // diagnostic only
};

struct RegularizeOptions {
    int max_iters = -1;  // defaults to initial delta_hat + 1
    bool probe = true;   // float-point diagnostic on the final Jacobian
    std::map<std::string, std::function<double(double)>> evaluators;  // for opaque symbols
    unsigned long long seed = 20240817ULL;
};

// The three-phase driver: solve duals, approximate the system Jacobian by a
// 1CM-matrix, stop when it is nonsingular, otherwise transform with a
// vanishing pair and repeat. delta_hat strictly decreases per transform.
RegularizationResult regularize(const DaeSystem& dae, const RegularizeOptions& opts = {});

// Retrieval system f*: 2n equations over (x, z) coupling the regularized
// variables back to the original ones via the recorded V-chain.
DaeSystem retrieval_system(const RegularizationResult& result, const DaeSystem& original);

// Linear time-invariant specialization: sum_l A_l x^{(l)} - g(t) = 0. The
// certificate is U from priority row elimination of the constant system
// Jacobian (V = I).
struct LtiSystem {
    std::vector<RatMatrix> coeffs;  // A_0 .. A_k
    std::vector<Expr> g;            // forcing, expressions in t only
};

struct LtiIteration {
    std::vector<int> p, q;
    long delta_hat = 0;
    long rank_j = 0;
};

struct LtiRegularizationResult {
    LtiSystem system;
    RegStatus status = RegStatus::StructurallySingular;
    std::vector<LtiIteration> trace;
    std::vector<RatMatrix> u_chain;
};

LtiRegularizationResult lti_regularize(const LtiSystem& sys, int max_iters = -1);

// Expression form of an LTI system, for cross-checking against regularize().
DaeSystem lti_to_dae(const LtiSystem& sys);

// sigma matrix of an LTI pencil, directly from the coefficient degrees.
SigmaMatrix lti_sigma(const std::vector<RatMatrix>& coeffs);

}  // namespace daereg
