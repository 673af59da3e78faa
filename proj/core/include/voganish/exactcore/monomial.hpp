#pragma once

#include "voganish/exactcore/registry.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace voganish::exactcore {

struct VarPow {
  VarId var;
  std::uint32_t exp;
  bool operator==(const VarPow&) const = default;
};

// Sparse power product; factors sorted by variable id, exponents positive.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(VarId v, std::uint32_t e = 1) {
    if (e) f_.push_back({v, e});
  }
  static Monomial from_factors(std::vector<VarPow> f);

  const std::vector<VarPow>& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }
  std::uint32_t degree() const;
  std::uint32_t degree_in(VarId v) const;
  bool contains(VarId v) const { return degree_in(v) > 0; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  // Requires divides(o).
  Monomial quotient_of(const Monomial& o) const;
  Monomial without(VarId v) const;
  Monomial with_exp(VarId v, std::uint32_t e) const;
  Monomial gcd(const Monomial& o) const;

  bool operator==(const Monomial& o) const { return f_ == o.f_; }
  std::size_t hash() const;

  std::string to_string(const VarRegistry& reg) const;

 private:
  std::vector<VarPow> f_;
};

// Lexicographic order with lower variable ids more significant.
// Returns <0, 0, >0.
int compare(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace voganish::exactcore
