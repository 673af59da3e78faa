#pragma once

#include "voganish/cover/cover.hpp"
#include "voganish/exactcore/psnf.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace voganish::evs {

using exactcore::GenericRank;
using exactcore::PolyMatrix;
using exactcore::QPoly;
using exactcore::Rat;
using exactcore::RatFunc;
using exactcore::RegistryPtr;
using exactcore::RMatrix;
using exactcore::RPoly;
using exactcore::RPolyMatrix;
using exactcore::VarId;
using multiseg::RankTriangle;

// Variety generators (chart or closure ideal on V, closure ideal on V*) followed by f = <x, y>.
struct EvsSystem {
  RegistryPtr reg;
  std::size_t nvars = 0;  // variables of the system; later registrations (t1, t2) are parameters
  std::vector<QPoly> generators;
  std::size_t n_source = 0;  // generators constraining x (and chart variables)
  std::size_t n_target = 0;  // generators constraining y
  RankTriangle base;
  RankTriangle target;
  std::string label;
  std::optional<cover::CoverSpec> spec;
  std::optional<cover::Chart> chart;

  const QPoly& f() const { return generators.back(); }
  std::vector<QPoly> variety() const { return {generators.begin(), generators.end() - 1}; }
  std::vector<VarId> variables() const;
  int base_dim = 0;    // dim of the source variety (cover or orbit closure)
  int target_dim = 0;  // dim of the dual orbit
};

EvsSystem assemble_system(const cover::CoverSpec& spec, const cover::Chart& chart, const RankTriangle& target);
// closure(C_base) x closure(C*_target) with f; the trivial-cover analogue.
EvsSystem assemble_closure_system(const RankTriangle& base, const RankTriangle& target);

vogan::DualPoint dual_representative(const RankTriangle& t);
int dual_orbit_dim(const RankTriangle& t);

std::size_t expected_generic_rank(const EvsSystem& sys);

PolyMatrix jacobian(const std::vector<QPoly>& gens, const std::vector<VarId>& vars);

struct RankCheck {
  std::size_t expected = 0;
  GenericRank sampled;
};
// Jacobian rank at random points of the variety; throws RankDisagreement.
RankCheck check_generic_rank(const EvsSystem& sys, std::uint64_t seed = 1, int samples = 3);
// A random rational point of the system's variety (values indexed by VarId).
std::vector<Rat> sample_point(const EvsSystem& sys, std::mt19937_64& rng);

// ---- slice ----

struct Admissible {
  VarId t1 = 0, t2 = 0;
  // Products of t1, t2, t1 - t2, 1 + t1, 1 + t2 (times a constant) never vanish on the slice.
  bool is_unit(const QPoly& p) const;
  bool is_unit(const RatFunc& r) const { return is_unit(r.num()) && is_unit(r.den()); }
  QPoly strip(const QPoly& p) const;  // divides out every admissible factor
  std::vector<QPoly> factors() const;
};

struct SliceRestriction {
  RegistryPtr reg;
  Admissible slice;
  std::vector<VarId> free_vars;
  std::map<VarId, QPoly> fibre_param;  // chart variable -> polynomial in free_vars
  RPolyMatrix matrix;                  // generators x system variables
  std::size_t expected_rank = 0;
  std::string label;
};

SliceRestriction restrict_to_slice(const EvsSystem& sys);

struct Solution {
  std::map<VarId, RatFunc> values;
  std::vector<VarId> free;          // unknowns left undetermined
  std::vector<QPoly> nonvanishing;  // case-split assumptions
};

// Triangular elimination with case splits; unknowns are solved, the rest are parameters.
// Variables in keep are eliminated only when nothing else is available.
// Throws NonTriangular when a parameter-only condition outside the admissible units appears.
std::vector<Solution> solve_triangular(std::vector<QPoly> eqs, const std::vector<VarId>& unknowns,
                                       const Admissible* slice, const exactcore::VarRegistry* reg = nullptr,
                                       const std::vector<VarId>& keep = {});

struct SingularLocus {
  std::size_t identity_size = 0;
  RPolyMatrix residual;
  std::vector<QPoly> system;  // rank-drop conditions in the free fibre variables
  std::vector<Solution> solutions;
};

SingularLocus singular_locus(const SliceRestriction& r);
std::string format_solution(const Solution& s, const exactcore::VarRegistry& reg);

// Full point (x_KS, y_KS(t1, t2), chart coordinates) for a chart solution; entries over Q(t1, t2).
std::vector<RatFunc> slice_point(const EvsSystem& sys, const SliceRestriction& r, const Solution& s);

// ---- Hessian ----

struct Split {
  std::vector<std::size_t> rows;  // generators of the invertible minor
  std::vector<VarId> implicit;
  std::vector<VarId> local;
};

// expected_rank = 0 skips the smoothness check.
Split local_coordinates(const std::vector<QPoly>& gens, const std::vector<VarId>& vars,
                        const std::vector<RatFunc>& point, std::size_t expected_rank = 0);

struct ImplicitDerivatives {
  RMatrix first;                // implicit x local: d w / d u
  std::vector<RMatrix> second;  // per implicit variable, local x local
};

ImplicitDerivatives implicit_derivatives(const std::vector<QPoly>& gens, const Split& split,
                                         const std::vector<RatFunc>& point, int order = 1);

enum class Verdict { Square, Unknown };

struct HessianReport {
  Split split;
  RMatrix hessian;  // local x local
  std::size_t rank = 0;
  std::vector<std::size_t> minor;      // indices into split.local
  std::vector<std::size_t> isotropic;  // indices into split.local
  Verdict verdict = Verdict::Unknown;
  RatFunc det_offblock;                // det of the off-diagonal block when Square
};

HessianReport hessian(const QPoly& f, const std::vector<QPoly>& gens, const Split& split,
                      const std::vector<RatFunc>& point);
void square_certificate(HessianReport& report, std::uint64_t seed = 1);

// Expected rank dim C_base - (dim V - dim C*_target).
int expected_hessian_rank(const EvsSystem& sys);

// Runs tasks on at most `workers` threads; results in task order.
template <class R>
std::vector<R> run_pool(const std::vector<std::function<R()>>& tasks, unsigned workers) {
  std::vector<std::optional<R>> out(tasks.size());
  std::vector<std::exception_ptr> errs(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::max(1u, workers) && w < tasks.size(); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  std::vector<R> res;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (errs[i]) std::rethrow_exception(errs[i]);
    res.push_back(std::move(*out[i]));
  }
  return res;
}

}  // namespace voganish::evs
