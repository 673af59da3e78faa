#pragma once

#include "voganish/exactcore/monomial.hpp"
#include "voganish/exactcore/rat.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace voganish::exactcore {

inline std::string coeff_string(const Rat& c, const VarRegistry&) { return to_string(c); }

template <class C>
bool coeff_is_zero(const C& c) {
  return is_zero(c);
}

// Sparse multivariate polynomial with coefficients in a field C.
// Terms are kept sorted in decreasing monomial order with no zero coefficients.
template <class C>
class Poly {
 public:
  struct Term {
    Monomial mono;
    C coeff;
  };

  Poly() = default;
  Poly(const C& c) {  // NOLINT(google-explicit-constructor)
    if (!coeff_is_zero(c)) terms_.push_back({Monomial(), c});
  }
  Poly(long c) : Poly(C(c)) {}  // NOLINT(google-explicit-constructor)

  static Poly variable(VarId v) { return monomial(Monomial(v), C(1)); }
  static Poly monomial(Monomial m, C c) {
    Poly p;
    if (!coeff_is_zero(c)) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
  }
  static Poly from_terms(std::vector<Term> t) {
    Poly p;
    p.terms_ = std::move(t);
    p.normalize();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t nterms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  C constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
    return C(0);
  }
  const Term& lead() const { return terms_.front(); }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
  }
  std::uint32_t degree_in(VarId v) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree_in(v));
    return d;
  }
  bool contains(VarId v) const {
    for (const auto& t : terms_)
      if (t.mono.contains(v)) return true;
    return false;
  }
  std::vector<VarId> variables() const {
    std::set<VarId> s;
    for (const auto& t : terms_)
      for (const auto& f : t.mono.factors()) s.insert(f.var);
    return {s.begin(), s.end()};
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }
  Poly operator+(const Poly& o) const { return merge(o, false); }
  Poly operator-(const Poly& o) const { return merge(o, true); }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return {};
    if (o.is_constant()) return scaled(o.terms_[0].coeff);
    if (is_constant()) return o.scaled(terms_[0].coeff);
    std::unordered_map<Monomial, C, MonomialHash> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        Monomial m = a.mono * b.mono;
        auto it = acc.find(m);
        if (it == acc.end())
          acc.emplace(std::move(m), a.coeff * b.coeff);
        else
          it->second += a.coeff * b.coeff;
      }
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!coeff_is_zero(c)) r.terms_.push_back({m, std::move(c)});
    r.sort_terms();
    return r;
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const C& c) const {
    if (coeff_is_zero(c)) return {};
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }
  Poly times_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
  }

  bool operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (!(terms_[i].mono == o.terms_[i].mono) || !(terms_[i].coeff == o.terms_[i].coeff)) return false;
    return true;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly derivative(VarId v) const {
    Poly r;
    for (const auto& t : terms_) {
      std::uint32_t e = t.mono.degree_in(v);
      if (!e) continue;
      r.terms_.push_back({t.mono.with_exp(v, e - 1), t.coeff * C(static_cast<long>(e))});
    }
    r.sort_terms();
    return r;
  }

  // Evaluates with value_of(VarId) -> V for every variable; V must accept C scaling.
  template <class V, class F>
  V evaluate(F&& value_of) const {
    V acc = V(0);
    std::unordered_map<VarId, V> cache;
    for (const auto& t : terms_) {
      V term = V(t.coeff);
      for (const auto& f : t.mono.factors()) {
        auto it = cache.find(f.var);
        if (it == cache.end()) it = cache.emplace(f.var, value_of(f.var)).first;
        for (std::uint32_t k = 0; k < f.exp; ++k) term = term * it->second;
      }
      acc = acc + term;
    }
    return acc;
  }

  // Simultaneous substitution; unmapped variables stay symbolic.
  Poly substitute(const std::unordered_map<VarId, Poly>& sub) const {
    if (sub.empty()) return *this;
    std::map<std::pair<VarId, std::uint32_t>, Poly> powers;
    auto power = [&](VarId v, std::uint32_t e) -> const Poly& {
      auto key = std::make_pair(v, e);
      auto it = powers.find(key);
      if (it != powers.end()) return it->second;
      Poly p = sub.at(v);
      Poly r = p;
      for (std::uint32_t k = 1; k < e; ++k) r = r * p;
      return powers.emplace(key, std::move(r)).first->second;
    };
    std::vector<Term> kept;
    Poly out;
    for (const auto& t : terms_) {
      Monomial rest;
      std::vector<const Poly*> factors;
      bool touched = false;
      std::vector<VarPow> keep;
      for (const auto& f : t.mono.factors()) {
        if (sub.count(f.var)) {
          factors.push_back(&power(f.var, f.exp));
          touched = true;
        } else {
          keep.push_back(f);
        }
      }
      if (!touched) {
        kept.push_back(t);
        continue;
      }
      Poly prod = Poly::monomial(Monomial::from_factors(keep), t.coeff);
      for (const Poly* p : factors) {
        prod = prod * *p;
        if (prod.is_zero()) break;
      }
      out += prod;
    }
    return out + from_terms(std::move(kept));
  }

  // Coefficients of v^k, k = 0..deg.
  std::vector<Poly> coefficients_in(VarId v) const {
    std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
    for (const auto& t : terms_) buckets[t.mono.degree_in(v)].push_back({t.mono.without(v), t.coeff});
    std::vector<Poly> r;
    r.reserve(buckets.size());
    for (auto& b : buckets) r.push_back(from_terms(std::move(b)));
    return r;
  }

  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_[0].mono;
    for (const auto& t : terms_) g = g.gcd(t.mono);
    return g;
  }
  Poly divided_by_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.mono = m.quotient_of(t.mono);
    return r;
  }

  // Canonical serialization: coeff*var^e*... joined by '+'.
  std::string to_string(const VarRegistry& reg) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) s += '+';
      s += wrap(coeff_string(terms_[i].coeff, reg));
      if (!terms_[i].mono.is_one()) s += "*" + terms_[i].mono.to_string(reg);
    }
    return s;
  }

  // Human-oriented form, e.g. "t1*c3 + c3^2 - 1".
  std::string pretty(const VarRegistry& reg) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      std::string c = wrap(coeff_string(terms_[i].coeff, reg));
      bool neg = !c.empty() && c[0] == '-' && c.find_first_of("+-", 1) == std::string::npos;
      if (neg) c = c.substr(1);
      if (i) s += neg ? " - " : " + ";
      else if (neg) s += "-";
      if (terms_[i].mono.is_one()) {
        s += c;
      } else {
        if (c != "1") s += c + "*";
        s += terms_[i].mono.to_string(reg);
      }
    }
    return s;
  }

 private:
  static std::string wrap(const std::string& c) {
    if (c.find_first_of("+-", 1) != std::string::npos || c.find('/') != c.rfind('/')) return "(" + c + ")";
    return c;
  }

  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
  }
  void normalize() {
    sort_terms();
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().mono == t.mono)
        out.back().coeff += t.coeff;
      else
        out.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : out)
      if (!coeff_is_zero(t.coeff)) terms_.push_back(std::move(t));
  }
  Poly merge(const Poly& o, bool subtract) const {
    Poly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      int c;
      if (i == terms_.size())
        c = -1;
      else if (j == o.terms_.size())
        c = 1;
      else
        c = compare(terms_[i].mono, o.terms_[j].mono);
      if (c > 0) {
        r.terms_.push_back(terms_[i++]);
      } else if (c < 0) {
        r.terms_.push_back({o.terms_[j].mono, subtract ? C(-o.terms_[j].coeff) : o.terms_[j].coeff});
        ++j;
      } else {
        C s = subtract ? C(terms_[i].coeff - o.terms_[j].coeff) : C(terms_[i].coeff + o.terms_[j].coeff);
        if (!coeff_is_zero(s)) r.terms_.push_back({terms_[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

template <class C>
inline bool is_zero(const Poly<C>& p) {
  return p.is_zero();
}

template <class C>
Poly<C> pow(const Poly<C>& p, unsigned e) {
  Poly<C> r(C(1));
  for (unsigned k = 0; k < e; ++k) r = r * p;
  return r;
}

template <class D, class C, class F>
Poly<D> map_coeffs(const Poly<C>& p, F&& f) {
  std::vector<typename Poly<D>::Term> t;
  t.reserve(p.nterms());
  for (const auto& term : p.terms()) t.push_back({term.mono, f(term.coeff)});
  return Poly<D>::from_terms(std::move(t));
}

using QPoly = Poly<Rat>;

// Parses expressions like "t1*c3 + c3^2 - 1/2*x[1].0.0"; identifiers are interned.
QPoly parse_qpoly(std::string_view text, VarRegistry& reg);

}  // namespace voganish::exactcore
