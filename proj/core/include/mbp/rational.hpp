#pragma once

#include <gmpxx.h>

#include <string>

namespace mbp {

// Exact field element. mpq_class keeps numerator and denominator coprime
// with a positive denominator once canonicalized.
using Rational = mpq_class;

// "p/q", or "p" when q = 1.
std::string to_string(const Rational& r);

// Accepts "p", "-p", "p/q"; throws Error("ParseError") otherwise or when q = 0.
Rational parse_rational(const std::string& text);

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_one(const Rational& r) { return r == 1; }

}  // namespace mbp
