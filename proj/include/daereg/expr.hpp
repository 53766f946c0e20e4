#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "daereg/rational.hpp"

namespace daereg {

// Immutable symbolic expression over variables x_j^{(l)}, time t, named
// parameters, exact rationals, integer powers and smooth unary functions.
// Every handle is in canonical form: sums and products are flattened with a
// fixed child order, like terms are merged, rational constants are folded,
// and a product carries at most one rational, placed first.
class Expr {
public:
    enum class Kind : uint8_t { Rational, Time, Param, Var, Pow, Apply, Product, Sum };
    struct Node;  // canonical tree node; construction goes through the factories

    Expr();  // zero constant

    Kind kind() const;
    bool is_rational() const { return kind() == Kind::Rational; }
    bool is_zero() const;
    bool is_one() const;

    const Rat& value() const;               // Rational
    const std::string& name() const;        // Param / Apply
    int var_index() const;                  // Var, 1-based
    int var_order() const;                  // Var, derivative order >= 0
    long exponent() const;                  // Pow
    const Expr& base() const;               // Pow
    const Expr& arg() const;                // Apply
    const std::vector<Expr>& children() const;  // Sum / Product

    uint64_t struct_hash() const;
    bool same(const Expr& o) const;  // structural equality of canonical forms

    // Canonicalizing factories. All construction funnels through these.
    static Expr rational(Rat v);
    static Expr integer(long v) { return rational(Rat(v)); }
    static Expr zero() { return integer(0); }
    static Expr one() { return integer(1); }
    static Expr time();
    static Expr param(std::string name);
    static Expr var(int j, int l = 0);
    static Expr pow(const Expr& base, long k);
    static Expr apply(std::string fname, Expr argument);
    static Expr sum(const std::vector<Expr>& terms);
    static Expr product(const std::vector<Expr>& factors);

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;

    friend int expr_compare(const Expr& a, const Expr& b);
    friend class ExprBuilder;
};

struct Expr::Node {
    Kind kind;
    Rat value;          // Rational
    std::string name;   // Param / Apply
    int j = 0, l = 0;   // Var
    long exp = 0;       // Pow
    std::vector<Expr> kids;  // Pow: {base}; Apply: {arg}; Sum/Product: children
    uint64_t hash = 0;
};

inline Expr::Kind Expr::kind() const { return node_->kind; }
inline bool Expr::is_zero() const { return kind() == Kind::Rational && node_->value == 0; }
inline bool Expr::is_one() const { return kind() == Kind::Rational && node_->value == 1; }
inline const Rat& Expr::value() const { return node_->value; }
inline const std::string& Expr::name() const { return node_->name; }
inline int Expr::var_index() const { return node_->j; }
inline int Expr::var_order() const { return node_->l; }
inline long Expr::exponent() const { return node_->exp; }
inline const Expr& Expr::base() const { return node_->kids[0]; }
inline const Expr& Expr::arg() const { return node_->kids[0]; }
inline const std::vector<Expr>& Expr::children() const { return node_->kids; }
inline uint64_t Expr::struct_hash() const { return node_->hash; }

// Total order on canonical forms; defines the deterministic serialization.
int expr_compare(const Expr& a, const Expr& b);

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return expr_compare(a, b) < 0; }
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::product({Expr::integer(-1), b})}); }
inline Expr operator-(const Expr& a) { return Expr::product({Expr::integer(-1), a}); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }

// --- serialization ---------------------------------------------------------

// Prefix s-expression text, e.g. "(+ (d x1 2) (sin (var x2)))".
// With `var_names`, variable tokens use the given display names instead of xJ.
std::string to_sexpr(const Expr& e, const std::vector<std::string>* var_names = nullptr);

// --- differentiation -------------------------------------------------------

// Partial derivative treating each x_j^{(l)} as an independent coordinate.
Expr diff_partial(const Expr& e, int j, int l);

// Total time derivative: x_j^{(l)} -> x_j^{(l+1)}, t -> 1, params -> 0,
// function symbols via their declared derivatives (opaque f gets f').
Expr diff_time(const Expr& e);

inline Expr diff_time_n(Expr e, int times) {
    for (int i = 0; i < times; ++i) e = diff_time(e);
    return e;
}

// Largest l with d e / d x_j^{(l)} not syntactically zero; nullopt if none.
std::optional<int> sigma_order(const Expr& e, int j);

// Largest derivative order of x_j occurring syntactically; -1 if absent.
int max_var_order(const Expr& e, int j);
// Largest derivative order of any variable occurring; -1 if none.
int max_total_order(const Expr& e);
// Per-variable occurrence orders for j = 1..nvars in one traversal (-1 absent).
std::vector<int> var_max_orders(const Expr& e, int nvars);

// --- arithmetic expansion --------------------------------------------------

// Distributes products over sums and expands positive integer powers of sums,
// merging like terms. Non-polynomial structure (function applications,
// negative powers of sums) is kept intact.
Expr expand_arithmetic(const Expr& e);

// One summand of an arithmetically expanded expression: coeff * monic, where
// monic is a product of functional atoms (monic == 1 for the constant part).
struct LinTerm {
    Rat coeff;
    Expr monic;
};
std::vector<LinTerm> linear_terms(const Expr& e);

// --- hashing ---------------------------------------------------------------

// Fixed-width digest of the canonical serialization of the normal form.
// Key equality is designed to imply syntactic identity of normal forms;
// distinct normal forms of equal functions may get distinct keys.
struct HashKey {
    uint64_t hi = 0, lo = 0;
    friend bool operator==(const HashKey&, const HashKey&) = default;
    friend auto operator<=>(const HashKey&, const HashKey&) = default;
};

HashKey canonical_hash(const Expr& e);
// The string the digest is taken over (used for exact dedup alongside keys).
std::string normal_form_string(const Expr& e);

// --- substitution ----------------------------------------------------------

using VarSubst = std::map<std::pair<int, int>, Expr>;

// Simultaneous substitution of x_j^{(l)} nodes; unmapped variables pass
// through unchanged. Result is canonical.
Expr substitute(const Expr& e, const VarSubst& map);

// Renumber variable indices (e.g. embedding into a larger roster).
Expr shift_var_indices(const Expr& e, int offset);

// Fixes parameter symbols to exact rationals; unbound parameters pass through.
Expr bind_params(const Expr& e, const std::map<std::string, Rat>& binding);

// --- numeric evaluation ----------------------------------------------------

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalPoint {
    std::map<std::pair<int, int>, double> vars;  // (j, l) -> value
    std::map<std::string, double> params;
    double t = 0.0;
    std::map<std::string, std::function<double(double)>> functions;  // opaque evaluators
};

// IEEE double evaluation; domain errors and missing bindings throw EvalError.
double eval_float(const Expr& e, const EvalPoint& pt);

}  // namespace daereg
