#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "daereg/dae.hpp"
#include "daereg/linsym.hpp"

namespace daereg {

struct SingularTransform : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A DAE together with a linear/nonlinear decomposition sum_l A_l x^{(l)} + g = 0.
struct DecomposedDae {
    DaeSystem dae;
    std::vector<RatMatrix> coeffs;
    std::vector<Expr> g;
};

// Path control of a planar robotic arm with N+1 arms; size 3N+2 over
// (theta_0..theta_N, phi_1..phi_N, tau_0..tau_N). Physical constants stay
// parameter symbols.
DaeSystem robotic_arm(int n_arms);

// Size-8 transistor amplifier circuit; the BJT characteristic e is a
// declared opaque nonlinearity and U_e an opaque time signal.
DaeSystem transistor_amplifier();

// Size-15 ring modulator with the diode characteristic q opaque.
DaeSystem ring_modulator();

// The three-equation system whose layer form separates the layered-mixed and
// 1CM approximations, with its canonical decomposition.
DecomposedDae toy_example();

// Five-equation modified-nodal-analysis circuit.
DaeSystem mna_example();

// Structured form g(t) + sum_l B_l x^{(l)} + sum h_lm(a_lm^T x^{(l)}) b_lm.
struct Rank1Term {
    int order = 0;  // l
    RatVec a, b;    // nonzero
    std::string h;  // unary function symbol
};
struct Rank1FormDae {
    std::vector<Expr> g;            // entries in t and parameters only
    std::vector<RatMatrix> coeffs;  // B_0 .. B_k
    std::vector<Rank1Term> terms;

    int size() const { return coeffs.empty() ? 0 : coeffs[0].rows(); }
    DaeSystem to_dae() const;
};

Rank1FormDae mna_rank1();

// Direct system-Jacobian expansion of the structured form: one symbol per
// derivative atom h'(a^T x^{(l)}); every coefficient matrix has rank <= 1.
LinSymMatrix rank1_jacobian(const Rank1FormDae& d, const std::vector<int>& p, const std::vector<int>& q);

// Row/variable change f' = C f, y = D x in closed form. Throws
// SingularTransform when C or D is not invertible.
Rank1FormDae linear_transform(const Rank1FormDae& d, const RatMatrix& c_mat, const RatMatrix& d_mat);

// Interacting mass points on a line with position- or velocity-dependent
// pairwise forces, d control inputs and d tracking constraints.
enum class InteractionKind { Position, Velocity };
struct MultibodyEdge {
    int i = 0, j = 0;  // 1-based node ids, i < j
    InteractionKind kind = InteractionKind::Position;
};
DaeSystem multibody(int n_nodes, const std::vector<MultibodyEdge>& edges, const RatMatrix& a_in,
                    const RatMatrix& b_out, const std::vector<Expr>& p_signals);
Rank1FormDae multibody_rank1(int n_nodes, const std::vector<MultibodyEdge>& edges, const RatMatrix& a_in,
                             const RatMatrix& b_out, const std::vector<Expr>& p_signals);

// Float evaluators for the benchmark nonlinearities (diagnostic probes).
std::map<std::string, std::function<double(double)>> benchmark_evaluators();

}  // namespace daereg
