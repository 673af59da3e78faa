#include "voganish/vogan/vogan.hpp"

#include "../support/gen.hpp"

#include <doctest.h>

using namespace voganish;
using namespace voganish::vogan;
using multiseg::Multisegment;
using multiseg::Segment;

namespace {

// Moeglin-Waldspurger algorithm on segment lists, independent of the conormal construction.
Multisegment mw_dual(const Multisegment& in) {
  std::vector<Segment> segs;
  for (const auto& [s, k] : in.segments())
    for (int i = 0; i < k; ++i) segs.push_back(s);
  Multisegment out(in.n());
  while (!segs.empty()) {
    int e = -1;
    for (const auto& s : segs) e = std::max(e, s.q);
    std::vector<std::size_t> chain;
    auto pick = [&](int end, int below) {
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].q != end || segs[i].p >= below) continue;
        if (std::find(chain.begin(), chain.end(), i) != chain.end()) continue;
        if (!best || segs[i].p > segs[*best].p) best = i;
      }
      return best;
    };
    auto first = pick(e, in.n() + 1);
    chain.push_back(*first);
    while (auto nxt = pick(segs[chain.back()].q - 1, segs[chain.back()].p)) chain.push_back(*nxt);
    out.add({e - static_cast<int>(chain.size()) + 1, e});
    for (auto i : chain) --segs[i].q;
    std::vector<Segment> keep;
    for (const auto& s : segs)
      if (s.p <= s.q) keep.push_back(s);
    segs = std::move(keep);
  }
  return out;
}

std::vector<std::vector<int>> small_mults() { return {{1, 1}, {1, 2, 1}, {2, 2, 2}, {1, 2, 2, 1}, {2, 3, 2}, {1, 1, 1, 1, 1}}; }

}  // namespace

TEST_CASE("space dimensions") {
  VoganSpace sp{{2, 4, 4, 4, 2}};
  CHECK(sp.dim_V() == 48);
  CHECK(sp.dim_H() == 56);
  CHECK(sp.total() == 16);
}

TEST_CASE("representatives realise their triangles") {
  for (const auto& m : small_mults())
    for (const auto& t : multiseg::enumerate_orbits(m)) CHECK(rank_triangle_of(representative(t)) == t);
}

TEST_CASE("orbit dimension, stabilizer and conormal fibre are consistent") {
  for (const auto& m : small_mults()) {
    VoganSpace sp{m};
    for (const auto& t : multiseg::enumerate_orbits(m)) {
      auto x = representative(t);
      CHECK(orbit_dim(t) == sp.dim_H() - stabilizer_dim(x));
      CHECK(static_cast<int>(conormal_dim(x)) + orbit_dim(t) == sp.dim_V());
      for (const auto& y : conormal_fiber(x)) CHECK(is_zero(bracket(x, y)));
    }
  }
}

TEST_CASE("dual agrees with the Moeglin-Waldspurger algorithm") {
  for (const auto& m : small_mults())
    for (const auto& t : multiseg::enumerate_orbits(m)) {
      auto d = compute_dual(t);
      CHECK(multiseg::multisegment_from_triangle(d) == mw_dual(multiseg::multisegment_from_triangle(t)));
      CHECK(compute_dual(d) == t);
    }
  auto all = multiseg::enumerate_orbits({2, 4, 4, 4, 2});
  for (std::size_t i = 0; i < all.size(); i += 37)
    CHECK(multiseg::multisegment_from_triangle(compute_dual(all[i])) ==
          mw_dual(multiseg::multisegment_from_triangle(all[i])));
}

TEST_CASE("dual does not reverse the closure order in general") {
  // {[0,1],[1,1],[2,2]} < {[0,1],[1,2]}, yet the duals are incomparable in that direction.
  std::vector<int> m{1, 2, 1};
  Multisegment a(2), b(2);
  a.add({0, 1});
  a.add({1, 1});
  a.add({2, 2});
  b.add({0, 1});
  b.add({1, 2});
  auto ta = multiseg::triangle_from_multisegment(a, m), tb = multiseg::triangle_from_multisegment(b, m);
  CHECK(multiseg::closure_leq(ta, tb));
  CHECK_FALSE(multiseg::closure_leq(compute_dual(tb), compute_dual(ta)));
}

TEST_CASE("Jordan partitions sum to the total dimension") {
  for (const auto& m : small_mults()) {
    VoganSpace sp{m};
    for (const auto& t : multiseg::enumerate_orbits(m)) {
      auto p = jordan_partition(representative(t));
      int s = 0;
      for (int k : p) s += k;
      CHECK(s == sp.total());
      CHECK(std::is_sorted(p.rbegin(), p.rend()));
    }
  }
}

TEST_CASE("closure ideal vanishes exactly on the smaller orbits") {
  for (const auto& m : std::vector<std::vector<int>>{{1, 2, 1}, {2, 2, 2}}) {
    auto all = multiseg::enumerate_orbits(m);
    for (const auto& bound : all) {
      exactcore::VarRegistry reg;
      auto eqs = closure_ideal(bound, Side::V, reg);
      CHECK(eqs.size() == closure_ideal_size(bound));
      for (const auto& s : all) {
        auto coords = flatten(representative(s));
        bool vanish = true;
        for (const auto& e : eqs)
          vanish = vanish && e.evaluate<Rat>([&](exactcore::VarId v) { return coords.at(v); }) == 0;
        CHECK(vanish == multiseg::closure_leq(s, bound));
      }
    }
  }
}

TEST_CASE("Kashiwara-Saito points") {
  auto x = x_ks();
  CHECK(multiseg::compact_ranks(rank_triangle_of(x)) == "2222/020/00/0");
  CHECK(conormal_dim(x) == 16);
  CHECK(stabilizer_dim(x) == 24);
  auto y = y_ks_slice<Rat>(2, 3);
  CHECK(is_zero(bracket(x, y)));
  CHECK(pair_stabilizer_dim(x, y) == 10);
}
