#include "voganish/exactcore/polyalg.hpp"

#include <stdexcept>

namespace voganish::exactcore {

namespace {

using UPoly = std::vector<QPoly>;

void trim(UPoly& u) {
  while (!u.empty() && u.back().is_zero()) u.pop_back();
}

QPoly from_upoly(const UPoly& u, VarId v) {
  QPoly r;
  for (std::size_t k = 0; k < u.size(); ++k)
    if (!u[k].is_zero()) r += u[k].times_monomial(Monomial(v, static_cast<std::uint32_t>(k)));
  return r;
}

QPoly exact(const QPoly& a, const QPoly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("expected exact polynomial division");
  return *q;
}

QPoly upoly_content(const UPoly& u) {
  QPoly g;
  for (const auto& c : u) {
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

UPoly primitive(UPoly u) {
  QPoly c = upoly_content(u);
  if (c.is_zero()) return u;
  if (c.is_constant()) {
    Rat inv = Rat(1) / c.constant_term();
    for (auto& x : u) x = x.scaled(inv);
    return u;
  }
  for (auto& x : u) x = exact(x, c);
  return u;
}

// Pseudo-remainder of a by b in the main variable.
UPoly prem(UPoly a, const UPoly& b) {
  const QPoly& lb = b.back();
  std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    QPoly la = a.back();
    std::size_t d = a.size() - 1 - db;
    for (auto& x : a) x = x * lb;
    for (std::size_t k = 0; k <= db; ++k) a[k + d] -= la * b[k];
    trim(a);
  }
  return a;
}

QPoly primitive_gcd(const QPoly& a, const QPoly& b, VarId v) {
  UPoly A = a.coefficients_in(v), B = b.coefficients_in(v);
  trim(A);
  trim(B);
  if (A.size() < B.size()) std::swap(A, B);
  while (!B.empty()) {
    if (B.size() == 1) return QPoly(1);
    UPoly R = prem(A, B);
    A = std::move(B);
    B = R.empty() ? R : primitive(std::move(R));
  }
  return from_upoly(primitive(std::move(A)), v);
}

}  // namespace

std::optional<QPoly> divide_exact(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (b.is_constant()) return a.scaled(Rat(1) / b.constant_term());
  QPoly r = a, q;
  const auto& lb = b.lead();
  Rat inv = Rat(1) / lb.coeff;
  while (!r.is_zero()) {
    const auto& lr = r.lead();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    QPoly t = QPoly::monomial(lb.mono.quotient_of(lr.mono), lr.coeff * inv);
    q += t;
    r -= b * t;
  }
  return q;
}

QPoly make_monic(const QPoly& p) {
  if (p.is_zero()) return p;
  return p.scaled(Rat(1) / p.lead().coeff);
}

QPoly content_in(const QPoly& p, VarId v) {
  UPoly u = p.coefficients_in(v);
  return upoly_content(u);
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return QPoly(1);
  Monomial ma = a.monomial_content(), mb = b.monomial_content();
  QPoly gm = QPoly::monomial(ma.gcd(mb), Rat(1));
  QPoly a1 = a.divided_by_monomial(ma), b1 = b.divided_by_monomial(mb);
  if (a1.is_constant() || b1.is_constant()) return gm;
  auto va = a1.variables(), vb = b1.variables();
  VarId v = std::min(va.front(), vb.front());
  bool in_a = a1.contains(v), in_b = b1.contains(v);
  if (!in_a) return make_monic(gm * gcd(a1, content_in(b1, v)));
  if (!in_b) return make_monic(gm * gcd(content_in(a1, v), b1));
  QPoly ca = content_in(a1, v), cb = content_in(b1, v);
  QPoly c = gcd(ca, cb);
  QPoly pa = exact(a1, ca), pb = exact(b1, cb);
  return make_monic(gm * c * primitive_gcd(pa, pb, v));
}

}  // namespace voganish::exactcore
