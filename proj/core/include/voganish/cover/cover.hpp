#pragma once

#include "voganish/exactcore/linalg.hpp"
#include "voganish/multiseg/multiseg.hpp"
#include "voganish/vogan/vogan.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace voganish::cover {

using exactcore::Int;
using exactcore::Matrix;
using exactcore::QMatrix;
using exactcore::QPoly;
using exactcore::Rat;
using exactcore::VarId;
using exactcore::VarRegistry;
using multiseg::RankTriangle;
using vogan::QuiverPoint;

// E_v^k.  k == 0 stands for ZERO and k == m_v for FULL.
struct SubspaceId {
  int v = 0;
  int k = 0;
  auto operator<=>(const SubspaceId&) const = default;
};

// x_map(E_{map-1}^src) is contained in E_map^tgt.
struct Condition {
  int map = 0;
  int src = 0;
  int tgt = 0;
  auto operator<=>(const Condition&) const = default;
};

struct CoverSpec {
  RankTriangle base;
  std::vector<SubspaceId> subspaces;  // retained, sorted by (v, k)
  std::vector<Condition> conditions;  // generation order
  // Consecutive retained subspaces at one vertex: first is contained in second.
  std::vector<std::pair<SubspaceId, SubspaceId>> chains;

  const std::vector<int>& mults() const { return base.mults(); }
  bool is_full(SubspaceId s) const { return s.k == base.m(s.v); }
  bool retained(SubspaceId s) const;
  // Retained dims at vertex v, increasing.
  std::vector<int> dims_at(int v) const;
};

CoverSpec cover_from_triangle(const RankTriangle& t);
std::string subspace_name(SubspaceId s);  // E<k>l<v>
std::string describe(const Condition& c, const CoverSpec& spec);
std::string to_json(const CoverSpec& spec);

// Pivot rows for every retained subspace.
struct Chart {
  std::string id;
  std::string label;
  std::map<SubspaceId, std::vector<int>> pivots;
  std::map<SubspaceId, std::string> letters;  // overrides of the default letter
  std::vector<std::string> expected_free;  // fibre coordinates named in shipped data, if any
};

Chart default_chart(const CoverSpec& spec);
void validate_chart(const CoverSpec& spec, const Chart& chart);  // throws InconsistentChart

// Chart variables are named E<k>l<v>.<letter><index>: one letter per retained subspace, indexed
// row-major over non-pivot rows; a subspace with a single free entry drops the index.
struct ChartCoords {
  std::map<SubspaceId, Matrix<QPoly>> basis;  // m_v x k with identity on pivot rows
  std::vector<VarId> vars;
};
ChartCoords chart_coordinates(const CoverSpec& spec, const Chart& chart, VarRegistry& reg);

// Generators in x-variables (registered first) and chart variables.
std::vector<QPoly> chart_ideal(const CoverSpec& spec, const Chart& chart, VarRegistry& reg);
// Same relations with x fixed to a rational point.
std::vector<QPoly> chart_ideal_at(const CoverSpec& spec, const Chart& chart, const QuiverPoint& x, VarRegistry& reg);

std::string to_json(const Chart& chart);

// Shipped chart lists (data/charts/<name>.json).
struct ChartSet {
  std::string name;
  RankTriangle triangle;
  std::vector<Chart> charts;
};
std::string data_dir();
ChartSet load_chart_set(const std::string& name);
std::optional<ChartSet> shipped_charts_for(const RankTriangle& t);
std::vector<std::string> shipped_chart_names();

// ---- fibres ----

enum class PieceKind { Determined, Free, Dependent };

struct FibrePiece {
  SubspaceId id;
  PieceKind kind = PieceKind::Determined;
  Matrix<QPoly> basis;         // m_v x k, entries in fibre coordinates
  std::vector<VarId> coords;   // Free only: columns x complement, row-major
  int columns = 0;             // Free only: generic columns added to the forced part
  int complement = 0;          // Free only: dimension of the space the generic columns live in
};

using CountPoly = std::vector<Int>;  // coefficients in q, low degree first

struct FibreDescription {
  std::shared_ptr<VarRegistry> reg;
  std::vector<FibrePiece> pieces;
  std::vector<QPoly> relations;
  int dimension = 0;
  CountPoly count;
  std::string summary() const;
};

FibreDescription fibre_over(const CoverSpec& spec, const QuiverPoint& x);

// ---- point counts ----

struct FibreCount {
  CountPoly poly;
  int dimension = -1;  // -1 for the empty fibre
  Int leading = 0;
};

// Exact count polynomial of the fibre over a point of the stratum.
FibreCount fibre_count(const CoverSpec& spec, const RankTriangle& stratum);
int fibre_dim_via_counts(const CoverSpec& spec, const RankTriangle& stratum);
Int evaluate_count(const CountPoly& p, long q);
std::string format_count(const CountPoly& p);

// Exhaustive count over F_q of flags over representative(stratum); q a prime power <= 32.
Int point_count_fibre(const CoverSpec& spec, const RankTriangle& stratum, int q,
                      std::uint64_t budget = 50'000'000);
// Same for an explicit point (entries must reduce mod the characteristic).
Int point_count_at(const CoverSpec& spec, const QuiverPoint& x, int q, std::uint64_t budget = 50'000'000);

// ---- semismallness ----

struct StratumReport {
  RankTriangle stratum;
  int orbit_dim = 0;
  int fibre_dim = 0;
  Int top_components = 0;
  bool relevant = false;
  bool violation = false;
};

struct SemismallReport {
  int cover_dim = 0;
  std::vector<StratumReport> strata;  // every orbit <= base
  bool semismall = true;
  bool small = true;  // no relevant stratum other than the base
  std::vector<RankTriangle> relevant() const;
};

SemismallReport semismall_report(const CoverSpec& spec, const RankTriangle& base);

// Charts meeting the fibre over x: shipped data when the cover matches, otherwise dehomogenizations.
std::vector<Chart> charts_covering_fibre(const CoverSpec& spec, const QuiverPoint& x);
std::vector<Chart> generic_charts(const CoverSpec& spec, const FibreDescription& fibre);

}  // namespace voganish::cover
