#include "voganish/cli/cli.hpp"

#include <json.hpp>

namespace voganish::cli {

using json = nlohmann::json;
using exactcore::RatFunc;
using exactcore::RMatrix;

std::string solution_flag(const evs::EvsSystem& sys, const evs::SliceRestriction& r, const evs::Solution& s) {
  auto pt = evs::slice_point(sys, r, s);
  auto coords = cover::chart_coordinates(*sys.spec, *sys.chart, *sys.reg);
  std::string out;
  for (const auto& id : sys.spec->subspaces) {
    const auto& b = coords.basis.at(id);
    RMatrix m(b.cols(), b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        m(j, i) = b(i, j).evaluate<RatFunc>([&](exactcore::VarId v) { return pt[v]; });
    auto red = exactcore::rref(m).m;
    out += cover::subspace_name(id) + "=[";
    for (std::size_t i = 0; i < red.rows(); ++i) {
      out += i ? ";" : "";
      for (std::size_t j = 0; j < red.cols(); ++j) out += (j ? "," : "") + red(i, j).to_string(*sys.reg);
    }
    out += "] ";
  }
  return out;
}

HessianSummary summarize(const evs::EvsSystem& sys, const evs::HessianReport& rep) {
  HessianSummary h;
  h.rank = rep.rank;
  h.expected = evs::expected_hessian_rank(sys);
  h.implicit = rep.split.implicit.size();
  h.local = rep.split.local.size();
  h.isotropic_dim = rep.isotropic.size();
  h.verdict = rep.verdict == evs::Verdict::Square ? "SQUARE" : "UNKNOWN";
  if (rep.verdict == evs::Verdict::Square) h.det_offblock = rep.det_offblock.to_string(*sys.reg);
  return h;
}

namespace {

HessianSummary hessian_at(const evs::EvsSystem& sys, const std::vector<RatFunc>& pt, std::uint64_t seed) {
  auto gens = sys.variety();
  const std::size_t codim = sys.nvars - static_cast<std::size_t>(sys.base_dim + sys.target_dim);
  auto split = evs::local_coordinates(gens, sys.variables(), pt, codim);
  auto rep = evs::hessian(sys.f(), gens, split, pt);
  evs::square_certificate(rep, seed);
  return summarize(sys, rep);
}

}  // namespace

HessianSummary ks_self_hessian(std::uint64_t seed) {
  auto ks = *named_orbit("KS");
  auto sys = evs::assemble_closure_system(ks, ks);
  auto r = evs::restrict_to_slice(sys);
  return hessian_at(sys, evs::slice_point(sys, r, evs::Solution{}), seed);
}

ChartAnalysis analyze_chart(const std::string& cover_name, const cover::Chart& chart, std::uint64_t seed,
                            bool with_hessian, bool check_rank) {
  ChartAnalysis a;
  a.cover = cover_name;
  a.chart = chart.id;
  a.seed = seed;
  auto spec = cover::cover_from_triangle(cover_base(cover_name));
  auto sys = evs::assemble_system(spec, chart, *named_orbit("KS"));
  a.nvars = sys.nvars;
  a.expected_rank = evs::expected_generic_rank(sys);
  if (check_rank) a.sampled_rank = evs::check_generic_rank(sys, seed).sampled.rank;
  evs::SliceRestriction r;
  try {
    r = evs::restrict_to_slice(sys);
  } catch (const Error& e) {
    if (e.name() != "ChartMissesFibre") throw;
    a.error = e.name();
    return a;
  }
  for (auto v : r.free_vars) a.free_vars.push_back(sys.reg->name(v));
  auto sl = evs::singular_locus(r);
  a.psnf_identity = sl.identity_size;
  for (const auto& e : sl.system) a.rankdrop_system.push_back(e.pretty(*sys.reg));
  for (const auto& s : sl.solutions) {
    a.solutions.push_back(evs::format_solution(s, *sys.reg));
    a.flags.push_back(solution_flag(sys, r, s));
    if (with_hessian) a.hessians.push_back(hessian_at(sys, evs::slice_point(sys, r, s), seed));
  }
  return a;
}

std::string to_json(const ChartAnalysis& a) {
  json j;
  j["cover"] = a.cover;
  j["chart"] = a.chart;
  j["nvars"] = a.nvars;
  j["expected_rank"] = a.expected_rank;
  if (a.sampled_rank) j["sampled_rank"] = a.sampled_rank;
  if (!a.error.empty()) j["error"] = a.error;
  j["free_vars"] = a.free_vars;
  j["psnf_identity"] = a.psnf_identity;
  j["residual_rankdrop_system"] = a.rankdrop_system;
  j["solutions"] = a.solutions;
  json hs = json::array();
  for (const auto& h : a.hessians)
    hs.push_back({{"rank", h.rank},
                  {"expected_rank", h.expected},
                  {"implicit", h.implicit},
                  {"local", h.local},
                  {"isotropic_dim", h.isotropic_dim},
                  {"verdict", h.verdict},
                  {"det_offblock", h.det_offblock}});
  if (hs.size() == 1)
    j["hessian"] = hs[0];
  else if (!hs.empty())
    j["hessian"] = hs;
  j["seed"] = a.seed;
  return j.dump();
}

}  // namespace voganish::cli
