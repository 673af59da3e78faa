#include "voganish/multiseg/multiseg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace voganish::multiseg {

using nlohmann::json;

void Multisegment::add(Segment s, int mult) {
  if (s.p < 0 || s.q < s.p || s.q > n_) throw precondition("BadSegment", "segment outside [0, n]");
  if (mult > 0) segs_[s] += mult;
}

bool Multisegment::remove(Segment s, int mult) {
  auto it = segs_.find(s);
  if (it == segs_.end() || it->second < mult) return false;
  it->second -= mult;
  if (it->second == 0) segs_.erase(it);
  return true;
}

int Multisegment::count(Segment s) const {
  auto it = segs_.find(s);
  return it == segs_.end() ? 0 : it->second;
}

std::size_t Multisegment::size() const {
  std::size_t k = 0;
  for (const auto& [s, c] : segs_) k += c;
  return k;
}

std::vector<int> Multisegment::coverage() const {
  std::vector<int> cov(n_ + 1, 0);
  for (const auto& [s, c] : segs_)
    for (int v = s.p; v <= s.q; ++v) cov[v] += c;
  return cov;
}

RankTriangle::RankTriangle(std::vector<int> mults) : mults_(std::move(mults)) {
  int n = this->n();
  ranks_.assign(n > 0 ? n * (n + 1) / 2 : 0, 0);
}

std::size_t RankTriangle::index(int i, int j) const {
  if (j < 1 || i < j || i > n()) throw std::out_of_range("rank index out of range");
  return static_cast<std::size_t>((i - 1) * i / 2 + (j - 1));
}

std::size_t RankTriangleHash::operator()(const RankTriangle& t) const {
  std::size_t h = 1469598103934665603ull;
  for (int v : t.mults()) h = (h ^ static_cast<std::size_t>(v + 1)) * 1099511628211ull;
  for (int v : t.flat()) h = (h ^ static_cast<std::size_t>(v + 7)) * 1099511628211ull;
  return h;
}

RankTriangle triangle_from_multisegment(const Multisegment& m) {
  RankTriangle t(m.coverage());
  for (const auto& [s, c] : m.segments())
    for (int k = s.p + 1; k <= s.q; ++k)
      for (int l = k; l <= s.q; ++l) t.at(l, k) += c;
  return t;
}

RankTriangle triangle_from_multisegment(const Multisegment& m, const std::vector<int>& mults) {
  if (m.coverage() != mults) throw precondition("SupportMismatch", "multisegment coverage differs from mults");
  return triangle_from_multisegment(m);
}

std::optional<Multisegment> try_multisegment_from_triangle(const RankTriangle& t) {
  const int n = t.n();
  for (int v : t.mults())
    if (v < 0) return std::nullopt;
  RankTriangle r = t;
  Multisegment m(n);
  for (;;) {
    int bi = -1, bj = -1;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= i; ++j) {
        int v = r.r(i, j);
        if (v < 0) return std::nullopt;
        if (v == 0) continue;
        if (bi < 0 || i - j > bi - bj || (i - j == bi - bj && i > bi)) {
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    m.add({bj - 1, bi});
    for (int k = bj; k <= bi; ++k)
      for (int l = bj; l <= k; ++l)
        if (--r.at(k, l) < 0) return std::nullopt;
  }
  std::vector<int> cov = m.coverage();
  for (int v = 0; v <= n; ++v) {
    if (cov[v] > t.m(v)) return std::nullopt;
    m.add({v, v}, t.m(v) - cov[v]);
  }
  return m;
}

Multisegment multisegment_from_triangle(const RankTriangle& t) {
  auto m = try_multisegment_from_triangle(t);
  if (!m) throw precondition("NegativeRank", "triangle does not decompose into segments");
  return *m;
}

bool is_valid(const RankTriangle& t) {
  const int n = t.n();
  if (n < 0) return false;
  for (int v : t.mults())
    if (v < 0) return false;
  for (int i = 1; i <= n; ++i) {
    if (t.r(i, i) < 0 || t.r(i, i) > std::min(t.m(i - 1), t.m(i))) return false;
    for (int j = 1; j < i; ++j) {
      if (t.r(i, j) < 0) return false;
      if (t.r(i, j) > std::min(t.r(i, j + 1), t.r(i - 1, j))) return false;
    }
  }
  // Interval supermodularity: r(A) + r(B) <= r(A u B) + r(A n B) for overlapping A = [j,i], B = [k,l].
  for (int i = 1; i <= n; ++i)
    for (int l = 1; l < i; ++l)
      for (int j = 1; j <= l; ++j)
        for (int k = 1; k < j; ++k)
          if (t.r(i, j) + t.r(l, k) > t.r(i, k) + t.r(l, j)) return false;
  return true;
}

namespace {

void enumerate_rec(const std::vector<int>& mults, int v, Multisegment& cur, std::vector<Multisegment>& out) {
  const int n = static_cast<int>(mults.size()) - 1;
  if (v > n) {
    out.push_back(cur);
    return;
  }
  int active = 0;
  for (const auto& [s, c] : cur.segments())
    if (s.p < v && s.q >= v) active += c;
  int fresh = mults[v] - active;
  if (fresh < 0) return;
  // Distribute `fresh` new segments starting at v over end points q = v..n.
  std::vector<int> parts(n - v + 1, 0);
  std::function<void(int, int)> place = [&](int idx, int left) {
    if (idx == static_cast<int>(parts.size()) - 1) {
      parts[idx] = left;
      for (int k = 0; k < static_cast<int>(parts.size()); ++k) cur.add({v, v + k}, parts[k]);
      enumerate_rec(mults, v + 1, cur, out);
      for (int k = 0; k < static_cast<int>(parts.size()); ++k)
        if (parts[k]) cur.remove({v, v + k}, parts[k]);
      return;
    }
    for (int c = left; c >= 0; --c) {
      parts[idx] = c;
      place(idx + 1, left - c);
    }
  };
  place(0, fresh);
}

}  // namespace

std::vector<Multisegment> enumerate_multisegments(const std::vector<int>& mults) {
  std::vector<Multisegment> out;
  if (mults.empty()) return out;
  Multisegment cur(static_cast<int>(mults.size()) - 1);
  enumerate_rec(mults, 0, cur, out);
  return out;
}

std::vector<RankTriangle> enumerate_orbits(const std::vector<int>& mults) {
  std::vector<RankTriangle> out;
  for (const auto& m : enumerate_multisegments(mults)) out.push_back(triangle_from_multisegment(m));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool closure_leq(const RankTriangle& a, const RankTriangle& b) {
  if (a.mults() != b.mults()) throw precondition("MultsMismatch", "triangles have different mults");
  for (std::size_t k = 0; k < a.flat().size(); ++k)
    if (a.flat()[k] > b.flat()[k]) return false;
  return true;
}

bool closure_lt(const RankTriangle& a, const RankTriangle& b) { return closure_leq(a, b) && !(a == b); }

std::vector<RankTriangle> orbits_between(const std::vector<RankTriangle>& orbits,
                                         const std::function<bool(const RankTriangle&)>& pred) {
  std::vector<RankTriangle> out;
  std::copy_if(orbits.begin(), orbits.end(), std::back_inserter(out), pred);
  return out;
}

RankTriangle open_orbit(const std::vector<int>& mults) {
  RankTriangle t(mults);
  for (int i = 1; i <= t.n(); ++i)
    for (int j = 1; j <= i; ++j) {
      int r = t.m(j - 1);
      for (int v = j; v <= i; ++v) r = std::min(r, t.m(v));
      t.set(i, j, r);
    }
  return t;
}

RankTriangle zero_orbit(const std::vector<int>& mults) { return RankTriangle(mults); }

namespace {

bool arthur_rec(Multisegment& m, int center2, std::vector<ArthurBlock>& blocks) {
  if (m.empty()) return true;
  Segment first = m.segments().begin()->first;
  int a = first.q - first.p;
  int b = center2 - 2 * first.p - a;
  if (b < 0) return false;
  for (int k = 0; k <= b; ++k)
    if (m.count({first.p + k, first.q + k}) < 1) return false;
  for (int k = 0; k <= b; ++k) m.remove({first.p + k, first.q + k});
  blocks.push_back({a, b, first.p});
  if (arthur_rec(m, center2, blocks)) return true;
  blocks.pop_back();
  for (int k = 0; k <= b; ++k) m.add({first.p + k, first.q + k});
  return false;
}

}  // namespace

std::optional<std::vector<ArthurBlock>> arthur_decomposition(const Multisegment& m, int center2) {
  Multisegment work = m;
  std::vector<ArthurBlock> blocks;
  if (!arthur_rec(work, center2, blocks)) return std::nullopt;
  return blocks;
}

bool is_arthur_type(const Multisegment& m, int center2) { return arthur_decomposition(m, center2).has_value(); }
bool is_arthur_type(const Multisegment& m) { return is_arthur_type(m, m.n()); }

std::string format_triangle(const RankTriangle& t) {
  std::ostringstream os;
  const int n = t.n();
  for (int v = n; v >= 0; --v) os << t.m(v) << (v ? " " : "");
  for (int d = 0; d < n; ++d) {
    os << " /";
    for (int i = n; i >= d + 1; --i) os << ' ' << t.r(i, i - d);
  }
  return os.str();
}

std::string compact_ranks(const RankTriangle& t) {
  std::string s;
  for (int d = 0; d < t.n(); ++d) {
    if (d) s += '/';
    for (int i = t.n(); i >= d + 1; --i) s += std::to_string(t.r(i, i - d));
  }
  return s;
}

std::string pretty_triangle(const RankTriangle& t) {
  std::ostringstream os;
  const int n = t.n();
  for (int v = n; v >= 0; --v) os << t.m(v) << (v ? "   " : "\n");
  for (int d = 0; d < n; ++d) {
    os << std::string(2 * (d + 1), ' ');
    for (int i = n; i >= d + 1; --i) os << t.r(i, i - d) << (i > d + 1 ? "   " : "\n");
  }
  return os.str();
}

namespace {

std::vector<std::pair<std::size_t, std::string>> split_rows(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> rows;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= text.size(); ++k)
    if (k == text.size() || text[k] == '/') {
      rows.emplace_back(start, std::string(text.substr(start, k - start)));
      start = k + 1;
    }
  return rows;
}

std::vector<int> parse_ints(const std::string& row, std::size_t offset) {
  std::vector<int> v;
  std::size_t k = 0;
  while (k < row.size()) {
    if (std::isspace(static_cast<unsigned char>(row[k])) || row[k] == ',') {
      ++k;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(row[k])))
      throw ParseError("expected a nonnegative integer", offset + k);
    std::size_t s = k;
    while (k < row.size() && std::isdigit(static_cast<unsigned char>(row[k]))) ++k;
    v.push_back(std::stoi(row.substr(s, k - s)));
  }
  return v;
}

}  // namespace

RankTriangle parse_triangle(std::string_view text) {
  auto rows = split_rows(text);
  auto top = parse_ints(rows[0].second, rows[0].first);
  if (top.empty()) throw ParseError("empty multiplicity row", 0);
  const int n = static_cast<int>(top.size()) - 1;
  if (static_cast<int>(rows.size()) != n + 1)
    throw ParseError("expected " + std::to_string(n + 1) + " rows, found " + std::to_string(rows.size()),
                     rows.back().first);
  std::vector<int> mults(top.rbegin(), top.rend());
  RankTriangle t(mults);
  for (int d = 0; d < n; ++d) {
    auto vals = parse_ints(rows[d + 1].second, rows[d + 1].first);
    if (static_cast<int>(vals.size()) != n - d)
      throw ParseError("row " + std::to_string(d + 1) + " must have " + std::to_string(n - d) + " entries",
                       rows[d + 1].first);
    for (int k = 0; k < n - d; ++k) t.set(n - k, n - k - d, vals[k]);
  }
  return t;
}

RankTriangle parse_compact(std::string_view ranks, const std::vector<int>& mults) {
  RankTriangle t(mults);
  const int n = t.n();
  auto rows = split_rows(ranks);
  if (static_cast<int>(rows.size()) != n) throw ParseError("expected " + std::to_string(n) + " rank rows", 0);
  for (int d = 0; d < n; ++d) {
    const auto& [off, row] = rows[d];
    std::string digits;
    for (char c : row)
      if (!std::isspace(static_cast<unsigned char>(c))) digits += c;
    if (static_cast<int>(digits.size()) != n - d) throw ParseError("bad compact row length", off);
    for (int k = 0; k < n - d; ++k) {
      if (!std::isdigit(static_cast<unsigned char>(digits[k]))) throw ParseError("expected digit", off + k);
      t.set(n - k, n - k - d, digits[k] - '0');
    }
  }
  return t;
}

std::string to_json(const RankTriangle& t) {
  json ranks = json::array();
  for (int d = 0; d < t.n(); ++d) {
    json row = json::array();
    for (int j = 1; j + d <= t.n(); ++j) row.push_back(t.r(j + d, j));
    ranks.push_back(row);
  }
  return json{{"mults", t.mults()}, {"ranks", ranks}}.dump();
}

RankTriangle triangle_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  try {
    RankTriangle t(j.at("mults").get<std::vector<int>>());
    const auto& ranks = j.at("ranks");
    if (static_cast<int>(ranks.size()) != t.n()) throw ParseError("ranks must have n rows", 0);
    for (int d = 0; d < t.n(); ++d) {
      if (static_cast<int>(ranks[d].size()) != t.n() - d) throw ParseError("bad ranks row length", 0);
      for (int jj = 1; jj + d <= t.n(); ++jj) t.set(jj + d, jj, ranks[d][jj - 1].get<int>());
    }
    return t;
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0);
  }
}

std::string format_multisegment(const Multisegment& m) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : m.segments()) {
    if (!first) os << ' ';
    first = false;
    if (c != 1) os << c;
    os << '[' << s.p << ',' << s.q << ']';
  }
  return os.str();
}

Multisegment parse_multisegment(std::string_view text, int n) {
  struct Item {
    int mult;
    Segment s;
  };
  std::vector<Item> items;
  std::size_t k = 0;
  auto skip = [&] {
    while (k < text.size() && (std::isspace(static_cast<unsigned char>(text[k])) || text[k] == ',' ||
                               text[k] == '{' || text[k] == '}'))
      ++k;
  };
  auto number = [&]() {
    std::size_t s = k;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
    if (s == k) throw ParseError("expected integer", k);
    return std::stoi(std::string(text.substr(s, k - s)));
  };
  auto expect = [&](char c) {
    while (k < text.size() && text[k] == ' ') ++k;
    if (k >= text.size() || text[k] != c) throw ParseError(std::string("expected '") + c + "'", k);
    ++k;
  };
  skip();
  while (k < text.size()) {
    int mult = 1;
    if (std::isdigit(static_cast<unsigned char>(text[k]))) mult = number();
    expect('[');
    int p = number();
    expect(',');
    while (k < text.size() && text[k] == ' ') ++k;
    int q = number();
    expect(']');
    if (q < p) throw ParseError("segment end before start", k);
    items.push_back({mult, {p, q}});
    skip();
  }
  int maxq = 0;
  for (const auto& it : items) maxq = std::max(maxq, it.s.q);
  Multisegment m(n < 0 ? maxq : n);
  for (const auto& it : items) {
    if (it.s.q > m.n()) throw ParseError("segment exceeds vertex range", 0);
    m.add(it.s, it.mult);
  }
  return m;
}

std::string to_json(const Multisegment& m) {
  json segs = json::array();
  for (const auto& [s, c] : m.segments()) segs.push_back({{"p", s.p}, {"q", s.q}, {"mult", c}});
  return json{{"n", m.n()}, {"segments", segs}}.dump();
}

Multisegment multisegment_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    Multisegment m(j.at("n").get<int>());
    for (const auto& s : j.at("segments")) m.add({s.at("p").get<int>(), s.at("q").get<int>()}, s.value("mult", 1));
    return m;
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0);
  }
}

std::vector<int> parse_mults(std::string_view text) {
  std::vector<int> v;
  std::size_t k = 0;
  while (k < text.size()) {
    if (text[k] == ',' || std::isspace(static_cast<unsigned char>(text[k]))) {
      ++k;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) throw ParseError("bad multiplicity list", k);
    std::size_t s = k;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
    v.push_back(std::stoi(std::string(text.substr(s, k - s))));
  }
  if (v.empty()) throw ParseError("empty multiplicity list", 0);
  return v;
}

}  // namespace voganish::multiseg
