#include "voganish/exactcore/linalg.hpp"

#include "voganish/exactcore/errors.hpp"

#include <numeric>

namespace voganish::exactcore {

namespace {

// Fraction-free elimination; returns rank and, for square input, the determinant.
template <class R, class Div, class Cost>
std::size_t bareiss(Matrix<R> m, Div div, Cost cost, R* det) {
  std::size_t r = 0;
  R prev(1);
  int sign = 1;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    for (std::size_t i = r; i < m.rows(); ++i)
      if (!coeff_is_zero(m(i, c)) && (best == m.rows() || cost(m(i, c)) < cost(m(best, c)))) best = i;
    if (best == m.rows()) {
      if (det) *det = R(0);
      det = nullptr;
      continue;
    }
    if (best != r) {
      m.swap_rows(r, best);
      sign = -sign;
    }
    const R piv = m(r, c);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const R lead = m(i, c);
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        R v = piv * m(i, j);
        if (!coeff_is_zero(lead) && !coeff_is_zero(m(r, j))) v = v - lead * m(r, j);
        m(i, j) = div(v, prev);
      }
      m(i, c) = R(0);
    }
    prev = piv;
    ++r;
  }
  if (det) *det = (r == m.rows() && m.rows() == m.cols()) ? (sign > 0 ? prev : R(-prev)) : R(0);
  return r;
}

Matrix<Int> integer_rows(const QMatrix& m, std::vector<Int>* scales) {
  Matrix<Int> z(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) z(i, j) = m(i, j).get_num() * (l / m(i, j).get_den());
    if (scales) scales->push_back(l);
  }
  return z;
}

Int zdiv(const Int& a, const Int& b) {
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
std::size_t zcost(const Int& a) { return mpz_sizeinbase(a.get_mpz_t(), 2); }

QPoly pdiv(const QPoly& a, const QPoly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("inexact division in fraction-free elimination");
  return *q;
}
std::size_t pcost(const QPoly& p) { return p.total_degree() * 1024 + p.nterms(); }

}  // namespace

std::size_t rank(const QMatrix& m) {
  if (m.empty()) return 0;
  return bareiss<Int>(integer_rows(m, nullptr), zdiv, zcost, nullptr);
}

std::size_t rank(const PolyMatrix& m) {
  if (m.empty()) return 0;
  return bareiss<QPoly>(m, pdiv, pcost, nullptr);
}

PolyMatrix clear_denominators(const RMatrix& m) {
  PolyMatrix p(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    QPoly l(1);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const QPoly& d = m(i, j).den();
      if (d.is_constant()) continue;
      l = l * *divide_exact(d, gcd(l, d));
    }
    for (std::size_t j = 0; j < m.cols(); ++j) p(i, j) = m(i, j).num() * *divide_exact(l, m(i, j).den());
  }
  return p;
}

std::size_t rank(const RMatrix& m) { return rank(clear_denominators(m)); }

Rat determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (m.rows() == 0) return Rat(1);
  std::vector<Int> scales;
  Int d;
  bareiss<Int>(integer_rows(m, &scales), zdiv, zcost, &d);
  Int s = 1;
  for (const auto& x : scales) s *= x;
  Rat r(d, s);
  r.canonicalize();
  return r;
}

QPoly determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (m.rows() == 0) return QPoly(1);
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  QPoly d;
  bareiss<QPoly>(m, pdiv, pcost, &d);
  return d;
}

RatFunc determinant(const RMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  RMatrix a = m;
  RatFunc det(1);
  for (std::size_t c = 0; c < a.cols(); ++c) {
    std::size_t p = a.rows();
    for (std::size_t i = c; i < a.rows(); ++i)
      if (!a(i, c).is_zero() && (p == a.rows() || complexity(a(i, c)) < complexity(a(p, c)))) p = i;
    if (p == a.rows()) return RatFunc(0);
    if (p != c) {
      a.swap_rows(p, c);
      det = -det;
    }
    det *= a(c, c);
    RatFunc inv = a(c, c).inverse();
    for (std::size_t i = c + 1; i < a.rows(); ++i) {
      if (a(i, c).is_zero()) continue;
      RatFunc f = a(i, c) * inv;
      for (std::size_t j = c + 1; j < a.cols(); ++j)
        if (!a(c, j).is_zero()) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> s(k);
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    out.push_back(s);
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

void for_each_minor(const PolyMatrix& m, std::size_t k,
                    const std::function<void(const std::vector<std::size_t>&, const std::vector<std::size_t>&,
                                             const QPoly&)>& visit) {
  if (k > std::min(m.rows(), m.cols())) throw precondition("MinorSize", "k exceeds matrix dimensions");
  auto rs = subsets(m.rows(), k);
  auto cs = subsets(m.cols(), k);
  for (const auto& r : rs)
    for (const auto& c : cs) visit(r, c, determinant(m.submatrix(r, c)));
}

std::vector<QPoly> minors(const PolyMatrix& m, std::size_t k) {
  std::vector<QPoly> out;
  for_each_minor(m, k, [&](const auto&, const auto&, const QPoly& d) { out.push_back(d); });
  return out;
}

QMatrix evaluate(const PolyMatrix& m, const std::vector<Rat>& values) {
  auto val = [&](VarId v) { return values.at(v); };
  return m.map<Rat>([&](const QPoly& p) { return p.evaluate<Rat>(val); });
}

QMatrix evaluate(const RMatrix& m, const std::vector<Rat>& values) {
  auto val = [&](VarId v) { return values.at(v); };
  return m.map<Rat>([&](const RatFunc& f) { return f.evaluate(val); });
}

QMatrix evaluate(const RPolyMatrix& m, const std::vector<Rat>& values) {
  auto val = [&](VarId v) { return values.at(v); };
  return m.map<Rat>([&](const RPoly& p) {
    Rat acc = 0;
    for (const auto& t : p.terms()) {
      Rat term = t.coeff.evaluate(val);
      for (const auto& f : t.mono.factors())
        for (std::uint32_t e = 0; e < f.exp; ++e) term *= values.at(f.var);
      acc += term;
    }
    return acc;
  });
}

std::vector<Rat> random_point(std::size_t nvars, std::mt19937_64& rng, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  std::vector<Rat> p(nvars);
  for (auto& x : p) x = d(rng);
  return p;
}

namespace {

template <class M>
GenericRank sampled_rank(const M& m, std::size_t nvars, std::uint64_t seed, int k, int range) {
  GenericRank g;
  g.seed = seed;
  std::mt19937_64 rng(seed);
  int attempts = 0;
  while (static_cast<int>(g.sample_ranks.size()) < k) {
    auto pt = random_point(nvars, rng, range);
    try {
      g.sample_ranks.push_back(rank(evaluate(m, pt)));
    } catch (const std::domain_error&) {
      if (++attempts > 100) throw;
    }
  }
  for (auto r : g.sample_ranks) {
    g.rank = std::max(g.rank, r);
    if (r != g.sample_ranks.front()) g.disagreement = true;
  }
  return g;
}

}  // namespace

GenericRank generic_rank(const PolyMatrix& m, std::size_t nvars, std::uint64_t seed, int k, int range) {
  return sampled_rank(m, nvars, seed, k, range);
}

GenericRank generic_rank(const RPolyMatrix& m, std::size_t nvars, std::uint64_t seed, int k, int range) {
  return sampled_rank(m, nvars, seed, k, range);
}

std::size_t symbolic_rank(const PolyMatrix& m) {
  if (m.rows() > 30 || m.cols() > 30) throw precondition("SymbolicRankTooLarge", "symbolic rank is limited to 30x30");
  return rank(m);
}

}  // namespace voganish::exactcore
