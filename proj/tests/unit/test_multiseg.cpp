#include "voganish/multiseg/multiseg.hpp"

#include "../support/gen.hpp"

#include <doctest.h>

#include <set>

using namespace voganish;
using namespace voganish::multiseg;

namespace {

// Independent count: number of ways to tile the dimension vector by segments.
long count_tilings(std::vector<int> rem, std::size_t seg, const std::vector<Segment>& segs) {
  if (seg == segs.size()) {
    for (int r : rem)
      if (r) return 0;
    return 1;
  }
  long total = 0;
  const auto s = segs[seg];
  for (;;) {
    total += count_tilings(rem, seg + 1, segs);
    bool ok = true;
    for (int v = s.p; v <= s.q; ++v) ok = ok && rem[v] > 0;
    if (!ok) break;
    for (int v = s.p; v <= s.q; ++v) --rem[v];
  }
  return total;
}

long oracle_count(const std::vector<int>& m) {
  std::vector<Segment> segs;
  for (int p = 0; p < static_cast<int>(m.size()); ++p)
    for (int q = p; q < static_cast<int>(m.size()); ++q) segs.push_back({p, q});
  return count_tilings(m, 0, segs);
}

}  // namespace

TEST_CASE("orbit counts match an independent tiling count") {
  CHECK(enumerate_orbits({1, 1}).size() == 2);
  CHECK(enumerate_orbits({1, 1, 1}).size() == 4);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    auto m = gen::mults(rng, 4, 3);
    CHECK(static_cast<long>(enumerate_orbits(m).size()) == oracle_count(m));
  }
}

TEST_CASE("triangle and multisegment round trip on random multisegments") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    int n = gen::uniform(rng, 0, 5);
    auto ms = gen::multisegment(rng, n, gen::uniform(rng, 1, 7));
    auto t = triangle_from_multisegment(ms);
    CHECK(is_valid(t));
    CHECK(multisegment_from_triangle(t) == ms);
  }
}

TEST_CASE("closure order is a partial order with open and zero orbits as extremes") {
  std::vector<int> m{1, 2, 2, 1};
  auto all = enumerate_orbits(m);
  auto top = open_orbit(m), bottom = zero_orbit(m);
  for (const auto& a : all) {
    CHECK(closure_leq(a, a));
    CHECK(closure_leq(a, top));
    CHECK(closure_leq(bottom, a));
    for (const auto& b : all) {
      if (closure_leq(a, b) && closure_leq(b, a)) CHECK(a == b);
      if (!closure_leq(a, b)) continue;
      for (const auto& c : all)
        if (closure_leq(b, c)) CHECK(closure_leq(a, c));
    }
  }
  CHECK_THROWS(closure_leq(open_orbit({1, 1}), open_orbit({1, 2})));
}

TEST_CASE("orbits_between filters by predicate") {
  std::vector<int> m{1, 1, 1};
  auto all = enumerate_orbits(m);
  auto res = orbits_between(all, [&](const RankTriangle& t) { return closure_leq(zero_orbit(m), t); });
  CHECK(res.size() == all.size());
}

TEST_CASE("text and JSON formats round trip") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    auto ms = gen::multisegment(rng, gen::uniform(rng, 1, 4), gen::uniform(rng, 1, 6));
    auto t = triangle_from_multisegment(ms);
    CHECK(parse_triangle(format_triangle(t)) == t);
    CHECK(parse_compact(compact_ranks(t), t.mults()) == t);
    CHECK(triangle_from_json(to_json(t)) == t);
    CHECK(parse_multisegment(format_multisegment(ms), ms.n()) == ms);
    CHECK(multisegment_from_json(to_json(ms)) == ms);
  }
}

TEST_CASE("compact ranks of the named Kashiwara-Saito orbits") {
  const std::vector<int> m{2, 4, 4, 4, 2};
  auto ks = parse_compact("2222/020/00/0", m);
  CHECK(is_valid(ks));
  CHECK(compact_ranks(ks) == "2222/020/00/0");
  CHECK(parse_mults("2,4,4,4,2") == m);
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(parse_compact("22/0", {2, 4, 4, 4, 2}), Error);
  CHECK_THROWS_AS(parse_mults("2,x"), Error);
  CHECK_THROWS_AS(triangle_from_json("{\"mults\": [1]"), Error);
}

TEST_CASE("Arthur-type multisegments") {
  // A single segment is a (trivial) Arthur block; two disjoint non-linked points on distinct centers are not.
  Multisegment one(2);
  one.add({0, 2});
  CHECK(is_arthur_type(one));
  const std::vector<int> m{2, 4, 4, 4, 2};
  CHECK(is_arthur_type(multisegment_from_triangle(parse_compact("2332/121/11/0", m))));
  CHECK_FALSE(is_arthur_type(multisegment_from_triangle(parse_compact("2222/020/00/0", m))));
}
