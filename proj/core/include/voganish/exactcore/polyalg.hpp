#pragma once

#include "voganish/exactcore/poly.hpp"

#include <optional>

namespace voganish::exactcore {

// Exact quotient a/b, or nullopt if b does not divide a.
std::optional<QPoly> divide_exact(const QPoly& a, const QPoly& b);

// Scales so the leading coefficient is 1 (zero stays zero).
QPoly make_monic(const QPoly& p);

// Monic greatest common divisor; gcd(0, 0) = 0.
QPoly gcd(const QPoly& a, const QPoly& b);

// Gcd of the coefficients of p viewed as a polynomial in v.
QPoly content_in(const QPoly& p, VarId v);

}  // namespace voganish::exactcore
