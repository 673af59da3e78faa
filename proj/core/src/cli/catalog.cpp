#include "voganish/cli/cli.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace voganish::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

const std::vector<int>& ks_mults() {
  static const std::vector<int> m{2, 4, 4, 4, 2};
  return m;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& named() {
  static const std::vector<std::pair<std::string, std::string>> n{
      {"KS", "2222/020/00/0"}, {"psi", "2332/121/11/0"}, {"L", "2422/220/00/0"}, {"R", "2242/022/00/0"},
      {"r", "2232/021/00/0"},  {"m", "2332/121/00/0"},   {"l", "2322/120/00/0"}};
  return n;
}

}  // namespace

std::optional<RankTriangle> named_orbit(std::string_view name) {
  for (const auto& [k, v] : named())
    if (k == name) return multiseg::parse_compact(v, ks_mults());
  return std::nullopt;
}

std::vector<std::string> orbit_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : named()) out.push_back(k);
  return out;
}

RankTriangle read_triangle(std::string_view text, const std::vector<int>& mults) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  if (mults == ks_mults())
    if (auto t = named_orbit(text)) return *t;
  if (!text.empty() && text.front() == '{') return multiseg::triangle_from_json(text);
  // Compact ranks have one row per map length; the full form adds the multiplicity row.
  const auto rows = std::count(text.begin(), text.end(), '/');
  if (rows == static_cast<long>(mults.size()) - 2 && text.find(' ') == std::string_view::npos)
    return multiseg::parse_compact(text, mults);
  RankTriangle t = multiseg::parse_triangle(text);
  if (t.mults() != mults && !mults.empty())
    throw precondition("MultsMismatch", "triangle does not match --mults");
  return t;
}

RankTriangle cover_base(std::string_view name) {
  if (name == "Cr") return *named_orbit("r");
  if (name == "Cm") return *named_orbit("m");
  if (name == "CR") return *named_orbit("R");
  if (name == "Cpsi") return *named_orbit("psi");
  throw precondition("UnknownCover", "no cover named " + std::string(name) + " (expected Cr, Cm, CR or Cpsi)");
}

std::optional<std::size_t> OrbitCatalog::index_of(const RankTriangle& t) const {
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].triangle == t) return i;
  return std::nullopt;
}

OrbitCatalog catalog_build(const std::vector<int>& mults, std::uint64_t seed, unsigned workers) {
  OrbitCatalog cat;
  cat.mults = mults;
  cat.seed = seed;
  auto orbits = multiseg::enumerate_orbits(mults);
  std::vector<std::function<std::pair<int, RankTriangle>()>> tasks;
  for (const auto& t : orbits)
    tasks.emplace_back([t, seed] { return std::make_pair(vogan::orbit_dim(t), vogan::compute_dual(t, seed)); });
  if (!workers) workers = std::max(1u, std::thread::hardware_concurrency());
  auto res = evs::run_pool(tasks, workers);
  std::unordered_map<RankTriangle, std::size_t, multiseg::RankTriangleHash> index;
  for (std::size_t i = 0; i < orbits.size(); ++i) index.emplace(orbits[i], i);
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    CatalogEntry e;
    e.triangle = orbits[i];
    e.dim = res[i].first;
    auto it = index.find(res[i].second);
    if (it == index.end()) throw Error(ErrorKind::Check, "DualOutsideCatalog", multiseg::format_triangle(res[i].second));
    e.dual = it->second;
    e.multisegment = multiseg::format_multisegment(multiseg::multisegment_from_triangle(orbits[i]));
    cat.entries.push_back(std::move(e));
  }
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  cat.created = buf;
  return cat;
}

std::string to_json(const OrbitCatalog& c) {
  json j;
  j["version"] = c.version;
  j["mults"] = c.mults;
  j["seed"] = c.seed;
  j["created"] = c.created;
  json orbits = json::array();
  for (const auto& e : c.entries)
    orbits.push_back({{"triangle", multiseg::format_triangle(e.triangle)},
                      {"dim", e.dim},
                      {"dual", e.dual},
                      {"multisegment", e.multisegment}});
  j["orbits"] = orbits;
  return j.dump();
}

OrbitCatalog catalog_from_json(std::string_view text) {
  auto corrupt = [](const std::string& why) { return Error(ErrorKind::Check, "CacheCorrupt", why); };
  OrbitCatalog c;
  try {
    json j = json::parse(text);
    c.version = j.at("version").get<std::string>();
    c.mults = j.at("mults").get<std::vector<int>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.created = j.at("created").get<std::string>();
    for (const auto& o : j.at("orbits")) {
      CatalogEntry e;
      e.triangle = multiseg::parse_triangle(o.at("triangle").get<std::string>());
      e.dim = o.at("dim").get<int>();
      e.dual = o.at("dual").get<std::size_t>();
      e.multisegment = o.at("multisegment").get<std::string>();
      c.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw corrupt(e.what());
  } catch (const Error& e) {
    throw corrupt(e.what());
  }
  const int dim_v = vogan::VoganSpace{c.mults}.dim_V();
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const auto& e = c.entries[i];
    if (e.triangle.mults() != c.mults) throw corrupt("entry with foreign mults");
    if (e.dim < 0 || e.dim > dim_v) throw corrupt("dimension out of range");
    if (e.dual >= c.entries.size() || c.entries[e.dual].dual != i) throw corrupt("dual column is not an involution");
  }
  return c;
}

std::string cache_dir() {
  if (const char* d = std::getenv("VOGANISH_CACHE"); d && *d) return d;
  if (const char* h = std::getenv("HOME"); h && *h) return std::string(h) + "/.cache/voganish";
  return ".voganish-cache";
}

std::string catalog_path(const std::vector<int>& mults, const std::string& dir) {
  std::string key;
  for (int m : mults) key += (key.empty() ? "" : "-") + std::to_string(m);
  return (fs::path(dir.empty() ? cache_dir() : dir) / ("catalog-" + key + "-v" + kToolVersion + ".json")).string();
}

OrbitCatalog catalog_load(const std::vector<int>& mults, const std::string& dir, std::uint64_t seed) {
  const std::string path = catalog_path(mults, dir);
  if (std::ifstream in(path); in) {
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      OrbitCatalog c = catalog_from_json(ss.str());
      if (c.mults == mults && c.version == kToolVersion) {
        c.from_cache = true;
        return c;
      }
    } catch (const Error&) {
      // rebuilt below
    }
  }
  OrbitCatalog c = catalog_build(mults, seed);
  std::error_code ec;
  fs::create_directories(fs::path(path).parent_path(), ec);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw precondition("CacheUnwritable", "cannot write " + tmp);
    out << to_json(c);
  }
  fs::rename(tmp, path, ec);
  if (ec) throw precondition("CacheUnwritable", ec.message());
  return c;
}

}  // namespace voganish::cli
