#pragma once

#include "voganish/exactcore/errors.hpp"

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voganish::multiseg {

// Interval [p, q] of quiver vertices.
struct Segment {
  int p = 0;
  int q = 0;
  auto operator<=>(const Segment&) const = default;
  int length() const { return q - p + 1; }
};

// Multiset of segments on vertices 0..n, canonically sorted by (p, q).
class Multisegment {
 public:
  Multisegment() = default;
  explicit Multisegment(int n) : n_(n) {}

  int n() const { return n_; }
  void add(Segment s, int mult = 1);
  // Returns false if fewer than mult copies are present.
  bool remove(Segment s, int mult = 1);
  int count(Segment s) const;
  const std::map<Segment, int>& segments() const { return segs_; }
  std::size_t size() const;
  bool empty() const { return segs_.empty(); }
  std::vector<int> coverage() const;
  bool operator==(const Multisegment& o) const { return n_ == o.n_ && segs_ == o.segs_; }

 private:
  int n_ = 0;
  std::map<Segment, int> segs_;
};

// Multiplicity row m_0..m_n plus ranks r(i, j) = rank(x_i ... x_j), 1 <= j <= i <= n.
class RankTriangle {
 public:
  RankTriangle() = default;
  explicit RankTriangle(std::vector<int> mults);

  int n() const { return static_cast<int>(mults_.size()) - 1; }
  const std::vector<int>& mults() const { return mults_; }
  int m(int v) const { return mults_.at(v); }
  int r(int i, int j) const { return ranks_.at(index(i, j)); }
  void set(int i, int j, int value) { ranks_.at(index(i, j)) = value; }
  int& at(int i, int j) { return ranks_.at(index(i, j)); }
  const std::vector<int>& flat() const { return ranks_; }

  bool operator==(const RankTriangle& o) const { return mults_ == o.mults_ && ranks_ == o.ranks_; }
  bool operator<(const RankTriangle& o) const {
    return mults_ != o.mults_ ? mults_ < o.mults_ : ranks_ < o.ranks_;
  }

 private:
  std::size_t index(int i, int j) const;
  std::vector<int> mults_;
  std::vector<int> ranks_;
};

struct RankTriangleHash {
  std::size_t operator()(const RankTriangle& t) const;
};

RankTriangle triangle_from_multisegment(const Multisegment& m);
// Throws SupportMismatch if coverage differs from mults.
RankTriangle triangle_from_multisegment(const Multisegment& m, const std::vector<int>& mults);

// Greedy extraction; throws NegativeRank on invalid input.
Multisegment multisegment_from_triangle(const RankTriangle& t);
std::optional<Multisegment> try_multisegment_from_triangle(const RankTriangle& t);

bool is_valid(const RankTriangle& t);

std::vector<Multisegment> enumerate_multisegments(const std::vector<int>& mults);
std::vector<RankTriangle> enumerate_orbits(const std::vector<int>& mults);

// Componentwise order; throws MultsMismatch.
bool closure_leq(const RankTriangle& a, const RankTriangle& b);
bool closure_lt(const RankTriangle& a, const RankTriangle& b);

std::vector<RankTriangle> orbits_between(const std::vector<RankTriangle>& orbits,
                                         const std::function<bool(const RankTriangle&)>& pred);

// Triangle of the unique open orbit (componentwise maximum).
RankTriangle open_orbit(const std::vector<int>& mults);
RankTriangle zero_orbit(const std::vector<int>& mults);

// Exact cover by Arthur blocks symmetric about center2 / 2 (vertex coordinates).
bool is_arthur_type(const Multisegment& m, int center2);
bool is_arthur_type(const Multisegment& m);
struct ArthurBlock {
  int a;
  int b;
  int start;
};
std::optional<std::vector<ArthurBlock>> arthur_decomposition(const Multisegment& m, int center2);

// Text format in display order, e.g. "2 4 4 4 2 / 2 2 2 2 / 0 2 0 / 0 0 / 0".
std::string format_triangle(const RankTriangle& t);
RankTriangle parse_triangle(std::string_view text);
// Compact rank rows only, e.g. "2222/020/00/0" (single-digit ranks).
std::string compact_ranks(const RankTriangle& t);
RankTriangle parse_compact(std::string_view ranks, const std::vector<int>& mults);
// Staggered layout mirroring the printed triangle.
std::string pretty_triangle(const RankTriangle& t);

std::string to_json(const RankTriangle& t);
RankTriangle triangle_from_json(std::string_view json);

// Text format, e.g. "2[0,1] 2[1,3] 2[2,2] 2[3,4]".
std::string format_multisegment(const Multisegment& m);
Multisegment parse_multisegment(std::string_view text, int n = -1);
std::string to_json(const Multisegment& m);
Multisegment multisegment_from_json(std::string_view json);

std::vector<int> parse_mults(std::string_view text);

}  // namespace voganish::multiseg
