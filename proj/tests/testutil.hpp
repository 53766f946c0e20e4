#pragma once

#include <random>
#include <vector>

#include "daereg/dae.hpp"
#include "daereg/expr.hpp"
#include "daereg/matrix.hpp"

namespace daereg::test {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Rat random_rat(Rng& rng, int num_bound = 6, int den_bound = 3) {
    int num = uniform(rng, -num_bound, num_bound);
    int den = uniform(rng, 1, den_bound);
    return rat(num, den);
}

inline Rat random_nonzero_rat(Rng& rng, int num_bound = 6, int den_bound = 3) {
    Rat r;
    do {
        r = random_rat(rng, num_bound, den_bound);
    } while (r == 0);
    return r;
}

// Random expression suited to float evaluation: no log, no negative powers.
inline Expr random_expr(Rng& rng, int depth, int nvars = 4, int max_order = 2) {
    if (depth <= 0) {
        switch (uniform(rng, 0, 4)) {
            case 0: return Expr::rational(random_rat(rng));
            case 1: return Expr::time();
            case 2: return Expr::param(uniform(rng, 0, 1) ? "a" : "b");
            default: return Expr::var(uniform(rng, 1, nvars), uniform(rng, 0, max_order));
        }
    }
    switch (uniform(rng, 0, 5)) {
        case 0: {
            std::vector<Expr> ts;
            int k = uniform(rng, 2, 3);
            for (int i = 0; i < k; ++i) ts.push_back(random_expr(rng, depth - 1, nvars, max_order));
            return Expr::sum(ts);
        }
        case 1: {
            std::vector<Expr> ts;
            int k = uniform(rng, 2, 3);
            for (int i = 0; i < k; ++i) ts.push_back(random_expr(rng, depth - 1, nvars, max_order));
            return Expr::product(ts);
        }
        case 2:
            return Expr::pow(random_expr(rng, depth - 1, nvars, max_order), uniform(rng, 2, 3));
        case 3: {
            const char* fs[] = {"sin", "cos", "exp"};
            return Expr::apply(fs[uniform(rng, 0, 2)], random_expr(rng, depth - 1, nvars, max_order));
        }
        default:
            return random_expr(rng, 0, nvars, max_order);
    }
}

// Random polynomial in the variables (no functions, no time).
inline Expr random_poly(Rng& rng, int nvars = 3, int max_order = 2, int terms = 4) {
    std::vector<Expr> ts;
    for (int i = 0; i < terms; ++i) {
        std::vector<Expr> fs{Expr::rational(random_nonzero_rat(rng))};
        int nf = uniform(rng, 1, 3);
        for (int k = 0; k < nf; ++k)
            fs.push_back(Expr::pow(Expr::var(uniform(rng, 1, nvars), uniform(rng, 0, max_order)), uniform(rng, 1, 2)));
        ts.push_back(Expr::product(fs));
    }
    return Expr::sum(ts);
}

inline EvalPoint random_point(Rng& rng, int nvars = 6, int max_order = 4) {
    EvalPoint pt;
    std::uniform_real_distribution<double> val(0.3, 1.7);
    for (int j = 1; j <= nvars; ++j)
        for (int l = 0; l <= max_order; ++l) pt.vars[{j, l}] = val(rng);
    pt.params["a"] = val(rng);
    pt.params["b"] = val(rng);
    pt.t = val(rng);
    return pt;
}

inline RatMatrix random_matrix(Rng& rng, int rows, int cols, int rank_target = -1) {
    if (rank_target < 0) {
        RatMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = random_rat(rng, 4, 2);
        return m;
    }
    // product of rows x r and r x cols factors gives rank <= rank_target
    RatMatrix b(rows, rank_target), c(rank_target, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rank_target; ++j) b.at(i, j) = random_rat(rng, 3, 1);
    for (int i = 0; i < rank_target; ++i)
        for (int j = 0; j < cols; ++j) c.at(i, j) = random_rat(rng, 3, 1);
    return b * c;
}

// Structural rebuild through the factories; a fixed point certifies that
// canonicalization is idempotent.
inline Expr rebuild(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Rational: return Expr::rational(e.value());
        case Expr::Kind::Time: return Expr::time();
        case Expr::Kind::Param: return Expr::param(e.name());
        case Expr::Kind::Var: return Expr::var(e.var_index(), e.var_order());
        case Expr::Kind::Pow: return Expr::pow(rebuild(e.base()), e.exponent());
        case Expr::Kind::Apply: return Expr::apply(e.name(), rebuild(e.arg()));
        case Expr::Kind::Product: {
            std::vector<Expr> ks;
            for (const Expr& c : e.children()) ks.push_back(rebuild(c));
            return Expr::product(ks);
        }
        case Expr::Kind::Sum: {
            std::vector<Expr> ks;
            for (const Expr& c : e.children()) ks.push_back(rebuild(c));
            return Expr::sum(ks);
        }
    }
    return e;
}

}  // namespace daereg::test
