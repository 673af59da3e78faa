#include "voganish/exactcore/linalg.hpp"
#include "voganish/exactcore/polyalg.hpp"
#include "voganish/exactcore/psnf.hpp"
#include "voganish/exactcore/ratfunc.hpp"

#include "../support/gen.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace voganish;
using namespace voganish::exactcore;

namespace {

// Leibniz expansion, used as an independent determinant.
Rat leibniz(const QMatrix& m) {
  std::vector<std::size_t> p(m.rows());
  std::iota(p.begin(), p.end(), 0);
  Rat total = 0;
  do {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j)
        if (p[i] > p[j]) ++inv;
    Rat term = inv % 2 ? -1 : 1;
    for (std::size_t i = 0; i < p.size(); ++i) term *= m(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

QMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int range = 5) {
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = gen::uniform(rng, -range, range);
  return m;
}

}  // namespace

TEST_CASE("rationals parse and print") {
  CHECK(parse_rat("-6/4") == Rat(-3, 2));
  CHECK(to_string(parse_rat("7")) == "7");
  CHECK(to_string(Rat(-3, 2)) == "-3/2");
  CHECK_THROWS_AS(parse_rat("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rat("abc"), ParseError);
}

TEST_CASE("polynomial ring identities on random inputs") {
  std::mt19937_64 rng(11);
  VarRegistry reg;
  std::vector<VarId> vs{reg.intern("a"), reg.intern("b"), reg.intern("c")};
  for (int trial = 0; trial < 60; ++trial) {
    QPoly p = gen::poly(rng, vs), q = gen::poly(rng, vs), r = gen::poly(rng, vs);
    CHECK((p + q) * r == p * r + q * r);
    CHECK(p * q == q * p);
    CHECK((p - p).is_zero());
    if (!q.is_zero()) {
      auto d = divide_exact(p * q, q);
      REQUIRE(d);
      CHECK(*d == p);
    }
  }
}

TEST_CASE("polynomial text round trip") {
  std::mt19937_64 rng(3);
  VarRegistry reg;
  std::vector<VarId> vs{reg.intern("u"), reg.intern("v")};
  for (int trial = 0; trial < 40; ++trial) {
    QPoly p = gen::poly(rng, vs);
    CHECK(parse_qpoly(p.pretty(reg), reg) == p);
  }
}

TEST_CASE("gcd recovers a planted common factor") {
  std::mt19937_64 rng(5);
  VarRegistry reg;
  std::vector<VarId> vs{reg.intern("s"), reg.intern("t")};
  for (int trial = 0; trial < 25; ++trial) {
    QPoly g = gen::poly(rng, vs, 2, 2), a = gen::poly(rng, vs, 3, 2), b = gen::poly(rng, vs, 3, 2);
    if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
    QPoly h = gcd(a * g, b * g);
    CHECK(divide_exact(h, g).has_value());
  }
}

TEST_CASE("determinant agrees with the Leibniz expansion") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = random_matrix(rng, 4, 4);
    CHECK(determinant(m) == leibniz(m));
  }
}

TEST_CASE("rank of planted low-rank products and kernels") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t r = gen::uniform(rng, 0, 4);
    auto m = random_matrix(rng, 6, r) * random_matrix(rng, r, 7);
    CHECK(rank(m) <= r);
    auto ker = kernel_basis(m);
    CHECK(ker.size() == 7 - rank(m));
    for (const auto& k : ker) {
      QMatrix col(7, 1);
      for (std::size_t i = 0; i < 7; ++i) col(i, 0) = k[i];
      auto z = m * col;
      for (std::size_t i = 0; i < 6; ++i) CHECK(z(i, 0) == 0);
    }
  }
}

TEST_CASE("polynomial determinant commutes with evaluation") {
  std::mt19937_64 rng(29);
  VarRegistry reg;
  std::vector<VarId> vs{reg.intern("a"), reg.intern("b")};
  for (int trial = 0; trial < 10; ++trial) {
    PolyMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = gen::poly(rng, vs, 2, 2);
    std::vector<Rat> pt{gen::rat(rng), gen::rat(rng)};
    CHECK(determinant(m).evaluate<Rat>([&](VarId v) { return pt[v]; }) == determinant(evaluate(m, pt)));
  }
}

TEST_CASE("psnf log replays to the reported normal form") {
  std::mt19937_64 rng(31);
  VarRegistry reg;
  std::vector<VarId> vs{reg.intern("a"), reg.intern("b")};
  for (int trial = 0; trial < 20; ++trial) {
    PolyMatrix m(4, 5);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        m(i, j) = gen::uniform(rng, 0, 2) ? gen::poly(rng, vs, 2, 1) : QPoly(gen::uniform(rng, -3, 3));
    auto res = psnf<Rat>(m);
    CHECK(is_psnf_form(replay(m, res.log), res.identity_size, res.residual));
    CHECK(res.identity_size <= std::min<std::size_t>(4, 5));
  }
}

TEST_CASE("rational functions normalize") {
  VarRegistry reg;
  QPoly t = QPoly::variable(reg.intern("t"));
  RatFunc f(t * t - QPoly(1), t - QPoly(1));
  CHECK(f.is_polynomial());
  CHECK(f == RatFunc(t + QPoly(1)));
  CHECK((f / f) == RatFunc(QPoly(1)));
  CHECK(RatFunc(QPoly(1), t).derivative(reg.at("t")) == RatFunc(QPoly(-1), t * t));
}
