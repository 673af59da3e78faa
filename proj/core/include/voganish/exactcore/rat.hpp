#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace voganish::exactcore {

using Int = mpz_class;
using Rat = mpq_class;

Rat parse_rat(std::string_view s);
std::string to_string(const Rat& r);

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline bool is_one(const Rat& r) { return r == 1; }
inline bool is_zero(const Int& r) { return sgn(r) == 0; }

// Rough size measure used by pivot heuristics.
inline std::size_t complexity(const Rat& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

}  // namespace voganish::exactcore
