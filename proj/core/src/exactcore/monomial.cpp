#include "voganish/exactcore/monomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace voganish::exactcore {

Monomial Monomial::from_factors(std::vector<VarPow> f) {
  std::sort(f.begin(), f.end(), [](const VarPow& a, const VarPow& b) { return a.var < b.var; });
  Monomial m;
  for (const auto& p : f) {
    if (p.exp == 0) continue;
    if (!m.f_.empty() && m.f_.back().var == p.var)
      m.f_.back().exp += p.exp;
    else
      m.f_.push_back(p);
  }
  return m;
}

std::uint32_t Monomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& p : f_) d += p.exp;
  return d;
}

std::uint32_t Monomial::degree_in(VarId v) const {
  for (const auto& p : f_) {
    if (p.var == v) return p.exp;
    if (p.var > v) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  std::size_t i = 0, j = 0;
  while (i < f_.size() && j < o.f_.size()) {
    if (f_[i].var < o.f_[j].var) {
      r.f_.push_back(f_[i++]);
    } else if (f_[i].var > o.f_[j].var) {
      r.f_.push_back(o.f_[j++]);
    } else {
      r.f_.push_back({f_[i].var, f_[i].exp + o.f_[j].exp});
      ++i;
      ++j;
    }
  }
  while (i < f_.size()) r.f_.push_back(f_[i++]);
  while (j < o.f_.size()) r.f_.push_back(o.f_[j++]);
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  std::size_t j = 0;
  for (const auto& p : f_) {
    while (j < o.f_.size() && o.f_[j].var < p.var) ++j;
    if (j == o.f_.size() || o.f_[j].var != p.var || o.f_[j].exp < p.exp) return false;
  }
  return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  Monomial r;
  std::size_t i = 0;
  for (const auto& p : o.f_) {
    while (i < f_.size() && f_[i].var < p.var) ++i;
    std::uint32_t e = p.exp;
    if (i < f_.size() && f_[i].var == p.var) {
      if (f_[i].exp > e) throw std::logic_error("monomial does not divide");
      e -= f_[i].exp;
    }
    if (e) r.f_.push_back({p.var, e});
  }
  return r;
}

Monomial Monomial::without(VarId v) const {
  Monomial r;
  for (const auto& p : f_)
    if (p.var != v) r.f_.push_back(p);
  return r;
}

Monomial Monomial::with_exp(VarId v, std::uint32_t e) const {
  Monomial r = without(v);
  if (e) {
    auto it = std::lower_bound(r.f_.begin(), r.f_.end(), v,
                               [](const VarPow& a, VarId b) { return a.var < b; });
    r.f_.insert(it, {v, e});
  }
  return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < f_.size() && j < o.f_.size()) {
    if (f_[i].var < o.f_[j].var) {
      ++i;
    } else if (f_[i].var > o.f_[j].var) {
      ++j;
    } else {
      r.f_.push_back({f_[i].var, std::min(f_[i].exp, o.f_[j].exp)});
      ++i;
      ++j;
    }
  }
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& p : f_) {
    h ^= (static_cast<std::size_t>(p.var) << 20) ^ p.exp;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return h;
}

std::string Monomial::to_string(const VarRegistry& reg) const {
  std::string s;
  for (std::size_t k = 0; k < f_.size(); ++k) {
    if (k) s += '*';
    s += reg.name(f_[k].var);
    if (f_[k].exp > 1) s += "^" + std::to_string(f_[k].exp);
  }
  return s;
}

int compare(const Monomial& a, const Monomial& b) {
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (fa[i].var != fb[i].var) return fa[i].var < fb[i].var ? 1 : -1;
    if (fa[i].exp != fb[i].exp) return fa[i].exp > fb[i].exp ? 1 : -1;
  }
  if (fa.size() == fb.size()) return 0;
  return fa.size() > fb.size() ? 1 : -1;
}

}  // namespace voganish::exactcore
