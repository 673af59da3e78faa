#pragma once

#include "voganish/exactcore/polyalg.hpp"

#include <string>

namespace voganish::exactcore {

// Element of the fraction field Q(vars): reduced num/den with monic denominator.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(long c) : num_(c), den_(1) {}         // NOLINT(google-explicit-constructor)
  RatFunc(const Rat& c) : num_(c), den_(1) {}   // NOLINT(google-explicit-constructor)
  RatFunc(const QPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const QPoly& num, const QPoly& den);

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rat constant_value() const { return num_.constant_term() / den_.constant_term(); }

  RatFunc operator-() const;
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  RatFunc inverse() const;
  RatFunc derivative(VarId v) const;
  RatFunc substitute(const std::unordered_map<VarId, QPoly>& sub) const;

  // Throws std::domain_error if the denominator vanishes at the point.
  template <class F>
  Rat evaluate(F&& value_of) const {
    Rat d = den_.evaluate<Rat>(value_of);
    if (sgn(d) == 0) throw std::domain_error("pole of rational function");
    return num_.evaluate<Rat>(value_of) / d;
  }

  std::string to_string(const VarRegistry& reg) const;

 private:
  struct Raw {};
  RatFunc(QPoly num, QPoly den, Raw) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize_scale();

  QPoly num_;
  QPoly den_;
};

inline bool is_zero(const RatFunc& r) { return r.is_zero(); }
inline std::string coeff_string(const RatFunc& c, const VarRegistry& reg) { return c.to_string(reg); }
inline std::size_t complexity(const RatFunc& r) { return r.num().nterms() + r.den().nterms(); }

using RPoly = Poly<RatFunc>;

}  // namespace voganish::exactcore
