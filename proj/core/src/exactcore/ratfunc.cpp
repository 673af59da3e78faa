#include "voganish/exactcore/ratfunc.hpp"

#include <stdexcept>

namespace voganish::exactcore {

RatFunc::RatFunc(const QPoly& num, const QPoly& den) {
  if (den.is_zero()) throw std::domain_error("zero denominator");
  if (num.is_zero()) {
    den_ = QPoly(1);
    return;
  }
  if (den.is_constant()) {
    num_ = num.scaled(Rat(1) / den.constant_term());
    den_ = QPoly(1);
    return;
  }
  QPoly g = gcd(num, den);
  num_ = *divide_exact(num, g);
  den_ = *divide_exact(den, g);
  normalize_scale();
}

void RatFunc::normalize_scale() {
  Rat lc = den_.lead().coeff;
  if (lc != 1) {
    Rat inv = Rat(1) / lc;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, Raw{}); }

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_ == o.den_) {
    if (den_.is_constant()) return RatFunc(num_ + o.num_, den_, Raw{});
    return RatFunc(num_ + o.num_, den_);
  }
  if (o.den_.is_constant()) return RatFunc(num_ + o.num_ * den_, den_);
  if (den_.is_constant()) return RatFunc(num_ * o.den_ + o.num_, o.den_);
  QPoly g = gcd(den_, o.den_);
  QPoly d1 = *divide_exact(den_, g), d2 = *divide_exact(o.den_, g);
  return RatFunc(num_ * d2 + o.num_ * d1, den_ * d2);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero()) return RatFunc();
  if (den_.is_constant() && o.den_.is_constant()) return RatFunc(num_ * o.num_, QPoly(1), Raw{});
  if (num_.is_constant()) return RatFunc(o.num_.scaled(num_.constant_term()), o.den_ * den_);
  if (o.num_.is_constant()) return RatFunc(num_.scaled(o.num_.constant_term()), den_ * o.den_);
  QPoly g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
  QPoly n = *divide_exact(num_, g1) * *divide_exact(o.num_, g2);
  QPoly d = *divide_exact(den_, g2) * *divide_exact(o.den_, g1);
  RatFunc r(std::move(n), std::move(d), Raw{});
  r.normalize_scale();
  return r;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  RatFunc r(den_, num_, Raw{});
  r.normalize_scale();
  return r;
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inverse(); }

RatFunc RatFunc::derivative(VarId v) const {
  if (den_.is_constant()) return RatFunc(num_.derivative(v), den_, Raw{});
  return RatFunc(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

RatFunc RatFunc::substitute(const std::unordered_map<VarId, QPoly>& sub) const {
  return RatFunc(num_.substitute(sub), den_.substitute(sub));
}

std::string RatFunc::to_string(const VarRegistry& reg) const {
  if (den_.is_constant()) return num_.pretty(reg);
  auto wrap = [&](const QPoly& p) {
    std::string s = p.pretty(reg);
    return p.nterms() > 1 || s.find('*') != std::string::npos ? "(" + s + ")" : s;
  };
  return wrap(num_) + "/" + wrap(den_);
}

}  // namespace voganish::exactcore
