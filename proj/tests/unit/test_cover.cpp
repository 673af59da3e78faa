#include "voganish/cover/cover.hpp"

#include "../support/gen.hpp"

#include <doctest.h>

using namespace voganish;
using namespace voganish::cover;

namespace {

const std::vector<int> kKS{2, 4, 4, 4, 2};

RankTriangle ks(const char* c) { return multiseg::parse_compact(c, kKS); }

}  // namespace

TEST_CASE("count polynomial agrees with exhaustive flag counts") {
  for (const auto& m : std::vector<std::vector<int>>{{1, 2, 1}, {2, 2, 2}, {1, 2, 2, 1}}) {
    for (const auto& base : multiseg::enumerate_orbits(m)) {
      auto spec = cover_from_triangle(base);
      for (const auto& s : multiseg::enumerate_orbits(m)) {
        if (!multiseg::closure_leq(s, base)) continue;
        auto fc = fibre_count(spec, s);
        for (int q : {2, 3}) CHECK(evaluate_count(fc.poly, q) == point_count_fibre(spec, s, q));
      }
    }
  }
}

TEST_CASE("fibre dimension from counts matches the count polynomial degree") {
  auto spec = cover_from_triangle(ks("2232/021/00/0"));
  auto ksT = ks("2222/020/00/0");
  CHECK(fibre_dim_via_counts(spec, ksT) == 1);
  CHECK(point_count_fibre(spec, ksT, 2) == 3);
  CHECK(point_count_fibre(spec, ksT, 3) == 4);
  CHECK(fibre_count(spec, ksT).dimension == 1);
}

TEST_CASE("relation tables of the Kashiwara-Saito covers") {
  auto spec = cover_from_triangle(ks("2242/022/00/0"));
  std::vector<std::string> got;
  for (const auto& c : spec.conditions) got.push_back(describe(c, spec));
  std::sort(got.begin(), got.end());
  std::vector<std::string> want{"x1(FULL) <= E2l1", "x2(E2l1) <= E2l2", "x3(E2l2) = 0", "x3(FULL) <= E2l3",
                                "x4(E2l3) = 0"};
  std::sort(want.begin(), want.end());
  CHECK(got == want);
}

TEST_CASE("chart ideals vanish at x = 0 for every chart coordinate") {
  std::mt19937_64 rng(53);
  for (const auto& name : shipped_chart_names()) {
    auto set = load_chart_set(name);
    auto spec = cover_from_triangle(set.triangle);
    for (const auto& ch : set.charts) {
      validate_chart(spec, ch);
      VarRegistry reg;
      auto gens = chart_ideal(spec, ch, reg);
      const std::size_t nx = static_cast<std::size_t>(vogan::VoganSpace{spec.mults()}.dim_V());
      std::vector<Rat> pt(reg.size());
      for (std::size_t i = nx; i < pt.size(); ++i) pt[i] = gen::rat(rng);
      // Flag-chain relations involve chart variables only; the incidence relations are linear in x.
      int incidence = 0;
      for (const auto& g : gens) {
        const auto vs = g.variables();
        if (vs.empty() || vs.front() >= nx) continue;
        ++incidence;
        CHECK(g.evaluate<Rat>([&](VarId v) { return pt.at(v); }) == 0);
      }
      CHECK(incidence > 0);
    }
  }
}

TEST_CASE("shipped chart sets") {
  CHECK(load_chart_set("Cr").charts.size() == 2);
  CHECK(load_chart_set("Cm").charts.size() == 4);
  CHECK(load_chart_set("CR").charts.size() == 1);
  CHECK(load_chart_set("Cpsi").charts.size() == 16);
  CHECK(shipped_charts_for(ks("2332/121/11/0")).has_value());
  CHECK_THROWS_AS(load_chart_set("nope"), Error);
}

TEST_CASE("fibres over x_KS") {
  auto x = vogan::x_ks();
  CHECK(fibre_over(cover_from_triangle(ks("2242/022/00/0")), x).dimension == 0);
  auto m = fibre_over(cover_from_triangle(ks("2332/121/00/0")), x);
  CHECK(m.dimension == 2);
  CHECK(format_count(m.count) == "q^2 + 2*q + 1");
  auto p = fibre_over(cover_from_triangle(ks("2332/121/11/0")), x);
  CHECK(p.dimension == 4);
  CHECK(p.relations.size() == 2);
}

TEST_CASE("a cover is birational onto its base") {
  for (const auto& m : std::vector<std::vector<int>>{{1, 2, 1}, {2, 2, 2}})
    for (const auto& base : multiseg::enumerate_orbits(m)) {
      auto spec = cover_from_triangle(base);
      auto fc = fibre_count(spec, base);
      CHECK(fc.dimension == 0);
      CHECK(fc.leading == 1);
      auto rep = semismall_report(spec, base);
      CHECK(rep.cover_dim == vogan::orbit_dim(base));
    }
}
