#pragma once

#include "voganish/evs/evs.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voganish::cli {

using multiseg::RankTriangle;

inline constexpr const char* kToolVersion = "1.0.0";

const std::vector<int>& ks_mults();

// Short names for the orbits that recur in the Kashiwara-Saito analysis: KS, psi, L, R, r, m, l.
std::optional<RankTriangle> named_orbit(std::string_view name);
std::vector<std::string> orbit_names();
// Accepts a name, compact ranks ("2222/020/00/0") or the full display form.
RankTriangle read_triangle(std::string_view text, const std::vector<int>& mults);

// Cover names with shipped chart data: Cr, Cm, CR, Cpsi.
RankTriangle cover_base(std::string_view name);

// ---- orbit catalog ----

struct CatalogEntry {
  RankTriangle triangle;
  int dim = 0;
  std::size_t dual = 0;
  std::string multisegment;
};

struct OrbitCatalog {
  std::vector<int> mults;
  std::vector<CatalogEntry> entries;
  std::uint64_t seed = 1;
  std::string created;
  std::string version = kToolVersion;
  bool from_cache = false;

  std::optional<std::size_t> index_of(const RankTriangle& t) const;
};

OrbitCatalog catalog_build(const std::vector<int>& mults, std::uint64_t seed = 1, unsigned workers = 0);
// Cache file keyed by mults and tool version; corrupt files are rebuilt.
OrbitCatalog catalog_load(const std::vector<int>& mults, const std::string& dir = "", std::uint64_t seed = 1);
std::string cache_dir();  // $VOGANISH_CACHE, else $HOME/.cache/voganish
std::string catalog_path(const std::vector<int>& mults, const std::string& dir);
std::string to_json(const OrbitCatalog& c);
OrbitCatalog catalog_from_json(std::string_view text);  // throws CacheCorrupt

// ---- per-chart analysis ----

struct HessianSummary {
  std::size_t rank = 0;
  int expected = 0;
  std::size_t implicit = 0;
  std::size_t local = 0;
  std::size_t isotropic_dim = 0;
  std::string verdict;
  std::string det_offblock;
};

struct ChartAnalysis {
  std::string cover;
  std::string chart;
  std::size_t nvars = 0;
  std::size_t expected_rank = 0;
  std::size_t sampled_rank = 0;
  std::vector<std::string> free_vars;
  std::size_t psnf_identity = 0;
  std::vector<std::string> rankdrop_system;
  std::vector<std::string> solutions;
  std::vector<std::string> flags;  // canonical flag of each solution, for cross-chart comparison
  std::vector<HessianSummary> hessians;
  std::string error;  // ChartMissesFibre and similar
  std::uint64_t seed = 1;
};

ChartAnalysis analyze_chart(const std::string& cover, const cover::Chart& chart, std::uint64_t seed = 1,
                            bool with_hessian = false, bool check_rank = true);
HessianSummary summarize(const evs::EvsSystem& sys, const evs::HessianReport& rep);
HessianSummary ks_self_hessian(std::uint64_t seed = 1);
std::string to_json(const ChartAnalysis& a);

// Canonical column spans of every chart subspace at a slice solution.
std::string solution_flag(const evs::EvsSystem& sys, const evs::SliceRestriction& r, const evs::Solution& s);

// ---- verification report ----

struct Check {
  int criterion = 0;
  std::string name;
  std::string expected;
  std::string computed;
  std::string source;  // where the reference value comes from
  bool passed = false;
  double seconds = 0;
};

struct VerifyReport {
  std::uint64_t seed = 1;
  std::vector<Check> checks;
  std::vector<ChartAnalysis> analyses;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned workers = 0;       // 0: hardware concurrency
  std::vector<int> criteria;  // empty: all
};

int criterion_count();
Check run_criterion(int id, std::uint64_t seed, std::vector<ChartAnalysis>* analyses = nullptr);
VerifyReport ks_verify(const VerifyOptions& opt);
// Timings are left out unless asked for, so equal seeds give identical reports.
std::string to_json(const VerifyReport& r, bool with_timing = false);

}  // namespace voganish::cli
