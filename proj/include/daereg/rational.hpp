#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace daereg {

// Exact rational scalar used throughout the combinatorial core.
// Floats appear only in diagnostic oracles, never here.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p" or "p/q" (arbitrary precision).
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rat: empty string");
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("parse_rat: bad rational '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

}  // namespace daereg
