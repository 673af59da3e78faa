#include "voganish/evs/evs.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace voganish;
using namespace voganish::evs;
using exactcore::QPoly;
using exactcore::Rat;
using exactcore::RatFunc;
using exactcore::VarRegistry;

namespace {

struct Toy {
  VarRegistry reg;
  QPoly var(const char* n) { return QPoly::variable(reg.intern(n)); }
};

std::vector<RatFunc> point(std::initializer_list<long> v) {
  std::vector<RatFunc> p;
  for (long x : v) p.emplace_back(x);
  return p;
}

}  // namespace

TEST_CASE("implicit derivatives of a hypersurface") {
  Toy t;
  QPoly u = t.var("u"), w = t.var("w");
  SUBCASE("w = u^2") {
    std::vector<QPoly> g{w - u * u};
    auto split = local_coordinates(g, {0, 1}, point({1, 1}));
    REQUIRE(split.implicit.size() == 1);
    REQUIRE(split.local.size() == 1);
    if (split.implicit[0] == 1) {
      auto d = implicit_derivatives(g, split, point({1, 1}), 2);
      CHECK(d.first(0, 0) == RatFunc(2));
      CHECK(d.second[0](0, 0) == RatFunc(2));
    }
  }
  SUBCASE("w^2 = u") {
    std::vector<QPoly> g{w * w - u};
    Split split{{0}, {1}, {0}};
    auto d = implicit_derivatives(g, split, point({1, 1}), 2);
    CHECK(d.first(0, 0) == RatFunc(Rat(1, 2)));
    CHECK(d.second[0](0, 0) == RatFunc(Rat(-1, 4)));
  }
  SUBCASE("singular point") {
    std::vector<QPoly> g{w * w - u * u * u};
    CHECK_THROWS_AS(local_coordinates(g, {0, 1}, point({0, 0}), 1), Error);
  }
}

TEST_CASE("uv - w is smooth at (1, 1, 1)") {
  Toy t;
  QPoly u = t.var("u"), v = t.var("v"), w = t.var("w");
  std::vector<QPoly> g{u * v - w};
  auto split = local_coordinates(g, {0, 1, 2}, point({1, 1, 1}));
  CHECK(split.implicit.size() == 1);
  CHECK(split.local.size() == 2);
}

TEST_CASE("Hessian of a hyperbolic form is square") {
  Toy t;
  QPoly a = t.var("a"), b = t.var("b");
  Split split{{}, {}, {0, 1}};
  auto rep = hessian(a * b, {}, split, point({0, 0}));
  CHECK(rep.rank == 2);
  CHECK(exactcore::determinant(rep.hessian) == RatFunc(-1));
  square_certificate(rep);
  CHECK(rep.verdict == Verdict::Square);
  CHECK(rep.isotropic.size() == 1);
}

TEST_CASE("a definite form has no square certificate") {
  Toy t;
  QPoly a = t.var("a"), b = t.var("b");
  Split split{{}, {}, {0, 1}};
  auto rep = hessian(a * a + b * b, {}, split, point({0, 0}));
  CHECK(rep.rank == 2);
  square_certificate(rep);
  CHECK(rep.verdict == Verdict::Unknown);
}

TEST_CASE("Hessian requires a critical point") {
  Toy t;
  QPoly a = t.var("a"), b = t.var("b");
  Split split{{}, {}, {0, 1}};
  CHECK_THROWS_AS(hessian(a * b + a, {}, split, point({0, 0})), Error);
}

TEST_CASE("constrained Hessian matches direct substitution") {
  // f = u*w on w = u^2 restricts to u^3: second derivative 6u.
  Toy t;
  QPoly u = t.var("u"), w = t.var("w"), s = t.var("s");
  std::vector<QPoly> g{w - u * u};
  Split split{{0}, {1}, {0, 2}};
  auto rep = hessian(u * w - QPoly(3) * u + s * s, g, split, point({1, 1, 0}));
  CHECK(rep.hessian(0, 0) == RatFunc(6));
  CHECK(rep.hessian(1, 1) == RatFunc(2));
  CHECK(rep.hessian == rep.hessian.transpose());
}

TEST_CASE("triangular solver") {
  Toy t;
  QPoly a = t.var("a"), b = t.var("b");
  SUBCASE("linear chain") {
    auto sols = solve_triangular({a - QPoly(2), a * b - b - QPoly(3)}, {0, 1}, nullptr);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].values.at(0) == RatFunc(2));
    CHECK(sols[0].values.at(1) == RatFunc(3));
  }
  SUBCASE("product splits") {
    auto sols = solve_triangular({a * b}, {0, 1}, nullptr);
    CHECK(sols.size() == 2);
  }
  SUBCASE("inconsistent") { CHECK(solve_triangular({a, a - QPoly(1)}, {0, 1}, nullptr).empty()); }
}

TEST_CASE("solver factors admissible quadratics on the slice") {
  VarRegistry reg;
  QPoly b = QPoly::variable(reg.intern("b"));
  Admissible slice{reg.intern("t1"), reg.intern("t2")};
  QPoly t1 = QPoly::variable(slice.t1), t2 = QPoly::variable(slice.t2);
  auto sols = solve_triangular({(b + t1) * (b + t2)}, {0}, &slice, &reg);
  REQUIRE(sols.size() == 2);
  std::set<std::string> vals;
  for (const auto& s : sols) vals.insert(s.values.at(0).to_string(reg));
  CHECK(vals == std::set<std::string>{"-t1", "-t2"});
}

TEST_CASE("admissible units") {
  VarRegistry reg;
  Admissible slice{reg.intern("t1"), reg.intern("t2")};
  QPoly t1 = QPoly::variable(slice.t1), t2 = QPoly::variable(slice.t2);
  CHECK(slice.is_unit(QPoly(3) * t1 * (t1 - t2) * (t2 + QPoly(1))));
  CHECK_FALSE(slice.is_unit(t1 + t2));
  CHECK(slice.strip(t1 * t1 * (t1 + t2)) == t1 + t2);
}

TEST_CASE("worker pool keeps task order and rethrows") {
  std::vector<std::function<int()>> tasks;
  for (int i = 0; i < 50; ++i) tasks.emplace_back([i] { return i * i; });
  auto r = run_pool(tasks, 4);
  for (int i = 0; i < 50; ++i) CHECK(r[i] == i * i);
  tasks.emplace_back([]() -> int { throw std::runtime_error("boom"); });
  CHECK_THROWS_AS(run_pool(tasks, 3), std::runtime_error);
}

TEST_CASE("sampled points lie on the variety and ranks agree") {
  auto set = cover::load_chart_set("CR");
  auto spec = cover::cover_from_triangle(set.triangle);
  auto ksT = multiseg::parse_compact("2222/020/00/0", {2, 4, 4, 4, 2});
  auto sys = assemble_system(spec, set.charts[0], ksT);
  std::mt19937_64 rng(7);
  auto pt = sample_point(sys, rng);
  for (const auto& g : sys.generators) CHECK(g.evaluate<Rat>([&](exactcore::VarId v) { return pt.at(v); }) == 0);
  auto rc = check_generic_rank(sys, 3);
  CHECK(rc.expected == 41);
  CHECK(rc.sampled.rank == 41);
}

TEST_CASE("closure system of C_KS against itself") {
  auto ksT = multiseg::parse_compact("2222/020/00/0", {2, 4, 4, 4, 2});
  auto sys = assemble_closure_system(ksT, ksT);
  CHECK(sys.base_dim == 32);
  CHECK(sys.target_dim == 32);
  CHECK(check_generic_rank(sys, 5).sampled.rank == expected_generic_rank(sys));
}
