#include "voganish/cover/cover.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace voganish::cover {

using nlohmann::json;

namespace {

Error inconsistent(const std::string& what) { return precondition("InconsistentChart", what); }

std::string letter_name(std::size_t idx) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + idx % 26));
    idx /= 26;
  } while (idx-- > 0);
  return s;
}

std::string source_name(const CoverSpec& spec, const Condition& c) {
  if (c.src == spec.base.m(c.map - 1)) return "FULL";
  return subspace_name({c.map - 1, c.src});
}

Matrix<QPoly> identity_poly(int n) { return Matrix<QPoly>::identity(static_cast<std::size_t>(n)); }

// Generators of col span(a) contained in span(b) where b has identity rows on p.
void containment_gens(const Matrix<QPoly>& a, const Matrix<QPoly>& b, const std::vector<int>& p,
                      std::vector<QPoly>& out) {
  std::vector<std::size_t> rows(p.begin(), p.end());
  std::vector<std::size_t> cols(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) cols[j] = j;
  Matrix<QPoly> d = a - b * a.submatrix(rows, cols);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (!d(i, j).is_zero()) out.push_back(d(i, j));
}

template <class MapOf>
std::vector<QPoly> ideal_with(const CoverSpec& spec, const Chart& chart, VarRegistry& reg, MapOf&& map_of) {
  validate_chart(spec, chart);
  ChartCoords cc = chart_coordinates(spec, chart, reg);
  std::vector<QPoly> gens;
  for (const auto& [a, b] : spec.chains) containment_gens(cc.basis.at(a), cc.basis.at(b), chart.pivots.at(b), gens);
  for (const auto& c : spec.conditions) {
    SubspaceId s{c.map - 1, c.src};
    Matrix<QPoly> ms = spec.is_full(s) ? identity_poly(s.k) : cc.basis.at(s);
    Matrix<QPoly> img = map_of(c.map) * ms;
    if (c.tgt == 0) {
      for (std::size_t i = 0; i < img.rows(); ++i)
        for (std::size_t j = 0; j < img.cols(); ++j)
          if (!img(i, j).is_zero()) gens.push_back(img(i, j));
    } else {
      SubspaceId t{c.map, c.tgt};
      containment_gens(img, cc.basis.at(t), chart.pivots.at(t), gens);
    }
  }
  return gens;
}

SubspaceId parse_subspace(const std::string& s) {
  auto l = s.find('l');
  if (s.size() < 4 || s[0] != 'E' || l == std::string::npos) throw ParseError("bad subspace name '" + s + "'", 0);
  return {std::stoi(s.substr(l + 1)), std::stoi(s.substr(1, l - 1))};
}

}  // namespace

bool CoverSpec::retained(SubspaceId s) const { return std::binary_search(subspaces.begin(), subspaces.end(), s); }

std::vector<int> CoverSpec::dims_at(int v) const {
  std::vector<int> d;
  for (auto s : subspaces)
    if (s.v == v) d.push_back(s.k);
  return d;
}

std::string subspace_name(SubspaceId s) { return "E" + std::to_string(s.k) + "l" + std::to_string(s.v); }

CoverSpec cover_from_triangle(const RankTriangle& t) {
  if (!multiseg::is_valid(t)) throw precondition("InvalidTriangle", "rank triangle is not realizable");
  CoverSpec spec;
  spec.base = t;
  const int n = t.n();
  std::set<SubspaceId> kept;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) {
      int tgt = t.r(i, j);
      int src = i - 1 >= j ? t.r(i - 1, j) : t.m(i - 1);
      if (tgt == t.m(i) || src == 0) continue;
      Condition c{i, src, tgt};
      if (std::find(spec.conditions.begin(), spec.conditions.end(), c) != spec.conditions.end()) continue;
      spec.conditions.push_back(c);
      if (src < t.m(i - 1)) kept.insert({i - 1, src});
      if (tgt > 0) kept.insert({i, tgt});
    }
  spec.subspaces.assign(kept.begin(), kept.end());
  for (std::size_t a = 0; a + 1 < spec.subspaces.size(); ++a)
    if (spec.subspaces[a].v == spec.subspaces[a + 1].v) spec.chains.emplace_back(spec.subspaces[a], spec.subspaces[a + 1]);
  return spec;
}

std::string describe(const Condition& c, const CoverSpec& spec) {
  std::string lhs = "x" + std::to_string(c.map) + "(" + source_name(spec, c) + ")";
  if (c.tgt == 0) return lhs + " = 0";
  return lhs + " <= " + subspace_name({c.map, c.tgt});
}

std::string to_json(const CoverSpec& spec) {
  json j;
  j["base"] = json::parse(multiseg::to_json(spec.base));
  json subs = json::array();
  for (auto s : spec.subspaces) subs.push_back({{"name", subspace_name(s)}, {"vertex", s.v}, {"dim", s.k}});
  j["subspaces"] = subs;
  json conds = json::array();
  for (const auto& c : spec.conditions)
    conds.push_back({{"map", c.map},
                     {"source", source_name(spec, c)},
                     {"target", c.tgt == 0 ? std::string("ZERO") : subspace_name({c.map, c.tgt})},
                     {"text", describe(c, spec)}});
  j["conditions"] = conds;
  json chains = json::array();
  for (const auto& [a, b] : spec.chains) chains.push_back({subspace_name(a), subspace_name(b)});
  j["chains"] = chains;
  return j.dump();
}

Chart default_chart(const CoverSpec& spec) {
  Chart c;
  c.id = "1";
  c.label = "default";
  for (auto s : spec.subspaces) {
    std::vector<int> p(s.k);
    for (int i = 0; i < s.k; ++i) p[i] = i;
    c.pivots[s] = p;
  }
  return c;
}

void validate_chart(const CoverSpec& spec, const Chart& chart) {
  for (auto s : spec.subspaces) {
    auto it = chart.pivots.find(s);
    if (it == chart.pivots.end()) throw inconsistent("no pivots for " + subspace_name(s));
    const auto& p = it->second;
    if (static_cast<int>(p.size()) != s.k) throw inconsistent("pivot count differs from dim of " + subspace_name(s));
    std::set<int> seen(p.begin(), p.end());
    if (seen.size() != p.size()) throw inconsistent("repeated pivot in " + subspace_name(s));
    for (int r : p)
      if (r < 0 || r >= spec.base.m(s.v)) throw inconsistent("pivot out of range in " + subspace_name(s));
  }
  for (const auto& [s, p] : chart.pivots)
    if (!spec.retained(s)) throw inconsistent(subspace_name(s) + " is not a retained subspace");
  for (const auto& [a, b] : spec.chains) {
    const auto& pa = chart.pivots.at(a);
    const auto& pb = chart.pivots.at(b);
    for (int r : pa)
      if (std::find(pb.begin(), pb.end(), r) == pb.end())
        throw inconsistent("pivots of " + subspace_name(a) + " not inside those of " + subspace_name(b));
  }
}

ChartCoords chart_coordinates(const CoverSpec& spec, const Chart& chart, VarRegistry& reg) {
  ChartCoords cc;
  for (std::size_t idx = 0; idx < spec.subspaces.size(); ++idx) {
    SubspaceId s = spec.subspaces[idx];
    const int m = spec.base.m(s.v);
    const auto& piv = chart.pivots.at(s);
    Matrix<QPoly> b(m, s.k);
    for (int c = 0; c < s.k; ++c) b(piv[c], c) = QPoly(1);
    const int nfree = (m - s.k) * s.k;
    auto lt = chart.letters.find(s);
    const std::string prefix = subspace_name(s) + "." + (lt != chart.letters.end() ? lt->second : letter_name(idx));
    int counter = 0;
    for (int r = 0; r < m; ++r) {
      if (std::find(piv.begin(), piv.end(), r) != piv.end()) continue;
      for (int c = 0; c < s.k; ++c) {
        ++counter;
        std::string name = nfree == 1 ? prefix : prefix + std::to_string(counter);
        VarId v = reg.intern(name);
        cc.vars.push_back(v);
        b(r, c) = QPoly::variable(v);
      }
    }
    cc.basis.emplace(s, std::move(b));
  }
  return cc;
}

std::vector<QPoly> chart_ideal(const CoverSpec& spec, const Chart& chart, VarRegistry& reg) {
  auto x = vogan::symbolic_point(spec.mults(), reg);
  if (spec.conditions.empty()) return {};
  return ideal_with(spec, chart, reg, [&](int i) { return x.x(i); });
}

std::vector<QPoly> chart_ideal_at(const CoverSpec& spec, const Chart& chart, const QuiverPoint& x, VarRegistry& reg) {
  if (x.mults != spec.mults()) throw precondition("MultsMismatch", "point and cover have different mults");
  return ideal_with(spec, chart, reg, [&](int i) { return x.x(i).map<QPoly>([](const Rat& r) { return QPoly(r); }); });
}

std::string to_json(const Chart& chart) {
  json j;
  j["id"] = chart.id;
  j["label"] = chart.label;
  json p = json::object();
  for (const auto& [s, rows] : chart.pivots) p[subspace_name(s)] = rows;
  j["pivots"] = p;
  if (!chart.letters.empty()) {
    json l = json::object();
    for (const auto& [s, name] : chart.letters) l[subspace_name(s)] = name;
    j["letters"] = l;
  }
  if (!chart.expected_free.empty()) j["fibre_free"] = chart.expected_free;
  return j.dump();
}

std::string data_dir() {
  if (const char* env = std::getenv("VOGANISH_DATA")) return env;
#ifdef VOGANISH_DATA_DIR
  return VOGANISH_DATA_DIR;
#else
  return "data";
#endif
}

std::vector<std::string> shipped_chart_names() { return {"Cr", "Cm", "CR", "Cpsi"}; }

ChartSet load_chart_set(const std::string& name) {
  std::filesystem::path path = std::filesystem::path(data_dir()) / "charts" / (name + ".json");
  std::ifstream in(path);
  if (!in) throw precondition("MissingData", "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  ChartSet set;
  set.name = j.at("name").get<std::string>();
  set.triangle = multiseg::parse_compact(j.at("ranks").get<std::string>(), j.at("mults").get<std::vector<int>>());
  for (const auto& c : j.at("charts")) {
    Chart ch;
    ch.id = c.at("id").get<std::string>();
    ch.label = c.value("label", "");
    for (const auto& [k, v] : c.at("pivots").items()) ch.pivots[parse_subspace(k)] = v.get<std::vector<int>>();
    if (j.contains("letters"))
      for (const auto& [k, v] : j.at("letters").items()) ch.letters[parse_subspace(k)] = v.get<std::string>();
    if (c.contains("fibre_free")) ch.expected_free = c.at("fibre_free").get<std::vector<std::string>>();
    set.charts.push_back(std::move(ch));
  }
  return set;
}

std::optional<ChartSet> shipped_charts_for(const RankTriangle& t) {
  for (const auto& name : shipped_chart_names()) {
    ChartSet s = load_chart_set(name);
    if (s.triangle == t) return s;
  }
  return std::nullopt;
}

}  // namespace voganish::cover
