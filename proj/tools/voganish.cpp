#include "voganish/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

using namespace voganish;
using json = nlohmann::json;
using multiseg::RankTriangle;

namespace {

struct Globals {
  bool pretty = false;
  std::string mults_text = "2,4,4,4,2";
  double max_seconds = 0;
  std::size_t max_terms = 0;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::vector<int> mults() const { return multiseg::parse_mults(mults_text); }
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return 1;
    case ErrorKind::Precondition: return 2;
    case ErrorKind::Check: return 3;
    case ErrorKind::Budget: return 4;
  }
  return 3;
}

void fail(const Error& e) {
  json j{{"error", e.name()}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
  std::exit(exit_code(e.kind()));
}

// "-" reads stdin, "@path" reads a file, anything else is the value itself.
std::string slurp(const std::string& arg) {
  std::stringstream ss;
  if (arg == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw precondition("MissingInput", "cannot open " + arg.substr(1));
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

RankTriangle triangle_arg(const std::string& arg, const Globals& g) { return cli::read_triangle(slurp(arg), g.mults()); }

json triangle_json(const RankTriangle& t) {
  json j = json::parse(multiseg::to_json(t));
  j["compact"] = multiseg::compact_ranks(t);
  if (auto m = multiseg::try_multisegment_from_triangle(t)) j["multisegment"] = multiseg::format_multisegment(*m);
  return j;
}

void emit(const json& j, const Globals& g, const std::vector<RankTriangle>& pretty = {}) {
  if (g.pretty && !pretty.empty()) {
    for (std::size_t i = 0; i < pretty.size(); ++i) std::cout << (i ? "\n" : "") << multiseg::pretty_triangle(pretty[i]) << "\n";
    return;
  }
  std::cout << (g.pretty ? j.dump(2) : j.dump()) << "\n";
}

// Runs work under the --max-seconds budget; an exceeded budget is reported, never truncated.
void budgeted(const Globals& g, const std::function<void()>& work) {
  if (g.max_seconds <= 0) {
    work();
    return;
  }
  auto task = std::make_shared<std::packaged_task<void()>>(work);
  auto fut = task->get_future();
  std::thread([task] { (*task)(); }).detach();
  if (fut.wait_for(std::chrono::duration<double>(g.max_seconds)) == std::future_status::timeout) {
    std::cout.flush();
    json j{{"error", "BudgetExceeded"}, {"message", "exceeded --max-seconds " + std::to_string(g.max_seconds)}};
    std::cerr << j.dump() << "\n";
    std::_Exit(4);
  }
  fut.get();
}

void check_terms(const cli::ChartAnalysis& a, const Globals& g) {
  if (!g.max_terms) return;
  for (const auto& e : a.rankdrop_system) {
    const auto terms = 1 + std::count(e.begin(), e.end(), '+') + std::count(e.begin(), e.end(), '-');
    if (static_cast<std::size_t>(terms) > g.max_terms)
      throw Error(ErrorKind::Budget, "BudgetExceeded", "rank-drop equation exceeds --max-terms");
  }
}

std::vector<cover::Chart> select_charts(const std::string& cover_name, const std::string& chart) {
  auto set = cover::load_chart_set(cover_name);
  if (chart.empty() || chart == "all") return set.charts;
  for (const auto& c : set.charts)
    if (c.id == chart) return {c};
  throw precondition("UnknownChart", "no chart " + chart + " in " + cover_name);
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"Orbit, cover and characteristic-cycle computations for type A quiver representations"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);
  auto common = [&](CLI::App* s) {
    s->add_flag("--pretty", g.pretty, "human-readable output (triangles in the row layout)");
    s->add_option("--mults", g.mults_text, "dimension vector, comma separated")->capture_default_str();
    s->add_option("--seed", g.seed, "random seed")->capture_default_str();
    s->add_option("--workers", g.workers, "worker threads (0: all cores)");
    s->add_option("--max-seconds", g.max_seconds, "wall-clock budget, exit code 4 when exceeded");
    s->add_option("--max-terms", g.max_terms, "term budget for rank-drop equations");
  };

  bool count_only = false;
  auto* orbits = app.add_subcommand("orbits", "enumerate the H-orbits in V");
  orbits->add_flag("--count", count_only, "print only the number of orbits");

  std::string tri, tri_a, tri_b, cover_name, chart_id, over, case_name, output, criteria;
  auto* dual = app.add_subcommand("dual", "Zelevinsky dual of an orbit");
  dual->add_option("--triangle", tri, "orbit (name, compact ranks, full form, JSON, @file or -)")->required();
  auto* dim = app.add_subcommand("dim", "dimension of an orbit");
  dim->add_option("--triangle", tri)->required();
  auto* leq = app.add_subcommand("leq", "closure order test a <= b");
  leq->add_option("--a", tri_a)->required();
  leq->add_option("--b", tri_b)->required();
  auto* between = app.add_subcommand("between", "orbits c with a <= c <= b");
  between->add_option("--a", tri_a)->required();
  between->add_option("--b", tri_b)->required();
  auto* partition = app.add_subcommand("partition", "Jordan type of the orbit representative");
  partition->add_option("--triangle", tri)->required();
  bool dual_side = false;
  auto* equations = app.add_subcommand("equations", "rank-minor equations of an orbit closure");
  equations->add_option("--triangle", tri)->required();
  equations->add_flag("--dual", dual_side, "equations on the dual space");
  auto* cover_cmd = app.add_subcommand("cover", "relation table of the flag cover of an orbit closure");
  cover_cmd->add_option("--triangle", tri)->required();
  auto* fibre = app.add_subcommand("fibre", "fibre of a cover over a stratum representative");
  fibre->add_option("--cover", tri, "base orbit of the cover")->required();
  fibre->add_option("--over", over, "stratum")->required();
  auto* semi = app.add_subcommand("semismall", "semismallness report of a cover");
  semi->add_option("--cover", tri)->required();
  auto* rank = app.add_subcommand("evs-rank", "generic Jacobian rank of the cover system over C_KS");
  rank->add_option("--cover", cover_name, "Cr, Cm, CR or Cpsi")->required();
  rank->add_option("--chart", chart_id, "chart id (default: all)");
  auto* sing = app.add_subcommand("singular", "rank-drop locus on the two-parameter slice");
  sing->add_option("--cover", cover_name)->required();
  sing->add_option("--chart", chart_id);
  auto* hess = app.add_subcommand("hessian", "Hessian certificate at the singular points");
  hess->add_option("--case", case_name, "ks for the self case, or a cover name")->required();
  hess->add_option("--chart", chart_id);
  bool timing = false;
  auto* verify = app.add_subcommand("ks-verify", "run every check and write the verification report");
  verify->add_option("--output", output, "write the report here instead of stdout");
  verify->add_option("--criteria", criteria, "comma-separated criterion numbers");
  verify->add_flag("--timing", timing, "include per-check timings (breaks byte-identical reruns)");
  for (auto* s : app.get_subcommands([](const CLI::App*) { return true; })) common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc ? 1 : 0;
  }

  try {
    budgeted(g, [&] {
      const auto mults = g.mults();
      if (orbits->parsed()) {
        if (count_only) {
          std::cout << multiseg::enumerate_orbits(mults).size() << "\n";
          return;
        }
        auto cat = cli::catalog_load(mults, "", g.seed);
        json arr = json::array();
        std::vector<RankTriangle> ts;
        for (const auto& e : cat.entries) {
          json j = triangle_json(e.triangle);
          j["dim"] = e.dim;
          j["dual"] = multiseg::compact_ranks(cat.entries[e.dual].triangle);
          arr.push_back(j);
          ts.push_back(e.triangle);
        }
        emit(arr, g, ts);
      } else if (dual->parsed()) {
        auto d = vogan::compute_dual(triangle_arg(tri, g), g.seed);
        emit(triangle_json(d), g, {d});
      } else if (dim->parsed()) {
        auto t = triangle_arg(tri, g);
        emit(json{{"triangle", multiseg::compact_ranks(t)}, {"dim", vogan::orbit_dim(t)}}, g);
      } else if (leq->parsed()) {
        emit(json(multiseg::closure_leq(triangle_arg(tri_a, g), triangle_arg(tri_b, g))), g);
      } else if (between->parsed()) {
        auto a = triangle_arg(tri_a, g), b = triangle_arg(tri_b, g);
        auto res = multiseg::orbits_between(multiseg::enumerate_orbits(mults), [&](const RankTriangle& c) {
          return multiseg::closure_leq(a, c) && multiseg::closure_leq(c, b);
        });
        json arr = json::array();
        for (const auto& t : res) arr.push_back(triangle_json(t));
        emit(arr, g, res);
      } else if (partition->parsed()) {
        auto t = triangle_arg(tri, g);
        emit(json{{"triangle", multiseg::compact_ranks(t)}, {"partition", vogan::jordan_partition(vogan::representative(t))}}, g);
      } else if (equations->parsed()) {
        exactcore::VarRegistry reg;
        auto eqs = vogan::closure_ideal(triangle_arg(tri, g), dual_side ? vogan::Side::VDual : vogan::Side::V, reg);
        json arr = json::array();
        for (const auto& e : eqs) arr.push_back(e.pretty(reg));
        emit(json{{"count", eqs.size()}, {"equations", arr}}, g);
      } else if (cover_cmd->parsed()) {
        auto spec = cover::cover_from_triangle(triangle_arg(tri, g));
        json j = json::parse(cover::to_json(spec));
        json conds = json::array();
        for (const auto& c : spec.conditions) conds.push_back(cover::describe(c, spec));
        j["described"] = conds;
        emit(j, g);
      } else if (fibre->parsed()) {
        auto spec = cover::cover_from_triangle(triangle_arg(tri, g));
        auto s = triangle_arg(over, g);
        auto fd = cover::fibre_over(spec, vogan::representative(s));
        json rel = json::array();
        for (const auto& r : fd.relations) rel.push_back(r.pretty(*fd.reg));
        emit(json{{"over", multiseg::compact_ranks(s)},
                  {"dimension", fd.dimension},
                  {"count", cover::format_count(fd.count)},
                  {"relations", rel},
                  {"summary", fd.summary()}},
             g);
      } else if (semi->parsed()) {
        auto base = triangle_arg(tri, g);
        auto rep = cover::semismall_report(cover::cover_from_triangle(base), base);
        json strata = json::array();
        for (const auto& s : rep.strata)
          strata.push_back({{"stratum", multiseg::compact_ranks(s.stratum)},
                            {"orbit_dim", s.orbit_dim},
                            {"fibre_dim", s.fibre_dim},
                            {"top_components", s.top_components.get_str()},
                            {"relevant", s.relevant},
                            {"violation", s.violation}});
        json rel = json::array();
        for (const auto& t : rep.relevant()) rel.push_back(multiseg::compact_ranks(t));
        emit(json{{"cover_dim", rep.cover_dim},
                  {"semismall", rep.semismall},
                  {"small", rep.small},
                  {"relevant", rel},
                  {"strata", strata}},
             g);
      } else if (rank->parsed() || sing->parsed()) {
        json arr = json::array();
        for (const auto& ch : select_charts(cover_name, chart_id)) {
          auto a = cli::analyze_chart(cover_name, ch, g.seed, false, rank->parsed());
          check_terms(a, g);
          json j = json::parse(cli::to_json(a));
          if (rank->parsed()) {
            for (const char* k : {"residual_rankdrop_system", "solutions", "psnf_identity"}) j.erase(k);
          }
          arr.push_back(j);
        }
        emit(arr, g);
      } else if (hess->parsed()) {
        if (case_name == "ks" || case_name == "KS") {
          auto h = cli::ks_self_hessian(g.seed);
          emit(json{{"case", "KS"},
                    {"rank", h.rank},
                    {"expected_rank", h.expected},
                    {"implicit", h.implicit},
                    {"local", h.local},
                    {"isotropic_dim", h.isotropic_dim},
                    {"verdict", h.verdict},
                    {"det_offblock", h.det_offblock}},
               g);
        } else {
          json arr = json::array();
          for (const auto& ch : select_charts(case_name, chart_id.empty() ? cover::load_chart_set(case_name).charts[0].id : chart_id)) {
            auto a = cli::analyze_chart(case_name, ch, g.seed, true, false);
            check_terms(a, g);
            arr.push_back(json::parse(cli::to_json(a)));
          }
          emit(arr, g);
        }
      } else if (verify->parsed()) {
        cli::VerifyOptions opt;
        opt.seed = g.seed;
        opt.workers = g.workers;
        std::stringstream ss(criteria);
        for (std::string item; std::getline(ss, item, ',');)
          if (!item.empty()) {
            try {
              opt.criteria.push_back(std::stoi(item));
            } catch (const std::exception&) {
              throw ParseError("bad criterion '" + item + "'", 0);
            }
          }
        auto rep = cli::ks_verify(opt);
        const std::string text = cli::to_json(rep, timing) + "\n";
        if (output.empty()) {
          std::cout << text;
        } else {
          std::ofstream out(output);
          if (!out) throw precondition("CannotWrite", output);
          out << text;
        }
        for (const auto& c : rep.checks)
          std::cerr << (c.passed ? "PASS " : "FAIL ") << c.criterion << " " << c.name << "\n";
        if (!rep.passed()) {
          std::cout.flush();
          std::exit(3);
        }
      }
    });
  } catch (const Error& e) {
    fail(e);
  } catch (const std::exception& e) {
    fail(Error(ErrorKind::Check, "InternalError", e.what()));
  }
  return 0;
}
