#include "voganish/evs/evs.hpp"

#include <algorithm>
#include <set>

namespace voganish::evs {

using exactcore::divide_exact;
using exactcore::make_monic;
using exactcore::Monomial;

std::vector<QPoly> Admissible::factors() const {
  QPoly a = QPoly::variable(t1), b = QPoly::variable(t2);
  return {a, b, a - b, a + QPoly(1), b + QPoly(1)};
}

QPoly Admissible::strip(const QPoly& p) const {
  if (p.is_zero()) return p;
  QPoly r = p;
  for (const auto& f : factors())
    while (auto q = divide_exact(r, f)) r = *q;
  return r;
}

bool Admissible::is_unit(const QPoly& p) const { return !p.is_zero() && strip(p).is_constant(); }

namespace {

// Sorted unknown variables occurring in p.
std::vector<VarId> unknowns_in(const QPoly& p, const std::set<VarId>& unknowns) {
  std::vector<VarId> out;
  for (VarId v : p.variables())
    if (unknowns.count(v)) out.push_back(v);
  return out;
}

// c^k * p(v = -d / c), k = deg_v p.
QPoly substitute_ratio(const QPoly& p, VarId v, const QPoly& d, const QPoly& c) {
  const auto k = p.degree_in(v);
  if (!k) return p;
  auto coef = p.coefficients_in(v);
  QPoly out;
  QPoly nd = -d;
  std::vector<QPoly> np{QPoly(1)}, cp{QPoly(1)};
  for (std::uint32_t j = 1; j <= k; ++j) {
    np.push_back(np.back() * nd);
    cp.push_back(cp.back() * c);
  }
  for (std::uint32_t j = 0; j <= k; ++j)
    if (!coef[j].is_zero()) out += coef[j] * np[j] * cp[k - j];
  return out;
}

std::string poly_key(const QPoly& p) {
  std::string k;
  for (const auto& t : p.terms()) {
    k += exactcore::to_string(t.coeff);
    for (const auto& f : t.mono.factors()) k += "*" + std::to_string(f.var) + "^" + std::to_string(f.exp);
    k += "|";
  }
  return k;
}

struct Step {
  VarId var;
  QPoly num;
  QPoly den;
};

struct State {
  std::vector<QPoly> eqs;
  std::vector<Step> steps;
  std::vector<QPoly> nonzero;
};

class Solver {
 public:
  Solver(const std::vector<VarId>& unknowns, const Admissible* slice, const std::vector<VarId>& keep)
      : unknowns_(unknowns.begin(), unknowns.end()), order_(unknowns), keep_(keep.begin(), keep.end()), slice_(slice) {}

  std::vector<Solution> run(State st) {
    std::vector<Solution> out;
    go(std::move(st), out, 0);
    std::vector<Solution> uniq;
    std::set<std::string> seen;
    for (auto& s : out) {
      std::string key;
      for (const auto& [v, val] : s.values) key += std::to_string(v) + "=" + poly_key(val.num()) + "/" + poly_key(val.den()) + ";";
      if (seen.insert(key).second) uniq.push_back(std::move(s));
    }
    return uniq;
  }

 private:
  bool param_unit(const QPoly& c) const {
    if (!unknowns_in(c, unknowns_).empty() || c.is_zero()) return false;
    return slice_ ? slice_->is_unit(c) : c.is_constant();
  }

  // Returns false when the branch is inconsistent.
  bool clean(State& st) const {
    std::vector<QPoly> out;
    std::set<std::string> seen;
    for (QPoly p : st.eqs) {
      if (p.is_zero()) continue;
      if (slice_) p = slice_->strip(p);
      for (const auto& nz : st.nonzero)
        if (!nz.is_constant())
          while (auto q = divide_exact(p, nz)) p = *q;
      p = make_monic(p);
      if (p.is_constant()) return false;
      if (unknowns_in(p, unknowns_).empty()) {
        if (!slice_) return false;
        throw Error(ErrorKind::Check, "NonTriangular",
                    "condition on the slice parameters only: " + show(p));
      }
      if (seen.insert(poly_key(p)).second) out.push_back(std::move(p));
    }
    st.eqs = std::move(out);
    return true;
  }

  void eliminate(State& st, std::size_t idx, VarId v) const {
    auto coef = st.eqs[idx].coefficients_in(v);
    QPoly c = coef[1], d = coef[0];
    std::vector<QPoly> rest;
    for (std::size_t k = 0; k < st.eqs.size(); ++k)
      if (k != idx) rest.push_back(substitute_ratio(st.eqs[k], v, d, c));
    for (auto& nz : st.nonzero) nz = substitute_ratio(nz, v, d, c);
    st.eqs = std::move(rest);
    st.steps.push_back({v, -d, c});
    if (!c.is_constant()) st.nonzero.push_back(make_monic(c));
  }

  void go(State st, std::vector<Solution>& out, int depth) {
    if (depth > 200) throw Error(ErrorKind::Budget, "NonTriangular", "case split too deep");
    if (!clean(st)) return;
    if (st.eqs.empty()) {
      finish(st, out);
      return;
    }
    // Unit-linear candidates: single-unknown equations first, then the latest variable.
    std::optional<std::tuple<int, int, long, std::size_t, std::size_t, VarId>> best;
    for (std::size_t k = 0; k < st.eqs.size(); ++k) {
      auto vars = unknowns_in(st.eqs[k], unknowns_);
      for (VarId v : vars) {
        if (st.eqs[k].degree_in(v) != 1) continue;
        QPoly c = st.eqs[k].coefficients_in(v)[1];
        if (!param_unit(c)) continue;
        auto key = std::make_tuple(vars.size() == 1 ? 0 : 1, static_cast<int>(keep_.count(v)), -static_cast<long>(rank_of(v)),
                                   st.eqs[k].nterms(), k, v);
        if (!best || key < *best) best = key;
      }
    }
    if (best) {
      eliminate(st, std::get<4>(*best), std::get<5>(*best));
      go(std::move(st), out, depth + 1);
      return;
    }
    // Split on a common factor or on the leading coefficient of a linear variable.
    std::optional<std::tuple<std::size_t, long, std::size_t, VarId>> lin;
    for (std::size_t k = 0; k < st.eqs.size(); ++k)
      for (VarId v : unknowns_in(st.eqs[k], unknowns_))
        if (st.eqs[k].degree_in(v) == 1) {
          auto key = std::make_tuple(st.eqs[k].nterms(), -static_cast<long>(rank_of(v)), k, v);
          if (!lin || key < *lin) lin = key;
        }
    if (lin) {
      const std::size_t k = std::get<2>(*lin);
      const VarId v = std::get<3>(*lin);
      auto coef = st.eqs[k].coefficients_in(v);
      QPoly g = exactcore::gcd(coef[1], coef[0]);
      if (!unknowns_in(g, unknowns_).empty()) {
        State a = st, b = st;
        a.eqs[k] = g;
        b.eqs[k] = *divide_exact(st.eqs[k], g);
        go(std::move(a), out, depth + 1);
        go(std::move(b), out, depth + 1);
        return;
      }
      if (unknowns_in(coef[1], unknowns_).empty()) {
        // Parameter-only coefficient outside the unit set: generic in the parameters.
        eliminate(st, k, v);
        go(std::move(st), out, depth + 1);
        return;
      }
      State a = st;
      a.eqs.erase(a.eqs.begin() + static_cast<long>(k));
      a.eqs.push_back(coef[1]);
      a.eqs.push_back(coef[0]);
      go(std::move(a), out, depth + 1);
      eliminate(st, k, v);
      go(std::move(st), out, depth + 1);
      return;
    }
    for (std::size_t k = 0; k < st.eqs.size(); ++k) {
      Monomial m = st.eqs[k].monomial_content();
      if (m.is_one()) continue;
      State rest = st;
      rest.eqs[k] = st.eqs[k].divided_by_monomial(m);
      for (const auto& f : m.factors()) {
        if (!unknowns_.count(f.var)) continue;
        State a = st;
        a.eqs[k] = QPoly::variable(f.var);
        go(std::move(a), out, depth + 1);
      }
      go(std::move(rest), out, depth + 1);
      return;
    }
    for (std::size_t k = 0; k < st.eqs.size(); ++k) {
      auto vars = unknowns_in(st.eqs[k], unknowns_);
      if (vars.size() != 1) continue;
      if (auto lf = linear_factor(st.eqs[k], vars[0])) {
        State a = st, b = st;
        a.eqs[k] = *lf;
        b.eqs[k] = *divide_exact(st.eqs[k], *lf);
        go(std::move(a), out, depth + 1);
        go(std::move(b), out, depth + 1);
        return;
      }
    }
    std::string eqs;
    for (const auto& e : st.eqs) eqs += show(e) + "; ";
    throw Error(ErrorKind::Check, "NonTriangular", "no linear variable in remaining system: " + eqs);
  }

  // Admissible factors of p with multiplicity, and the remaining cofactor.
  std::vector<QPoly> unit_factors(QPoly p) const {
    std::vector<QPoly> out;
    for (const auto& f : slice_->factors())
      while (auto q = divide_exact(p, f)) {
        out.push_back(f);
        p = *q;
      }
    return out;
  }

  static std::vector<QPoly> subproducts(const std::vector<QPoly>& fs) {
    std::vector<QPoly> out{QPoly(1)};
    std::set<std::string> seen{poly_key(QPoly(1))};
    for (const auto& f : fs) {
      const std::size_t n = out.size();
      for (std::size_t i = 0; i < n; ++i) {
        QPoly g = out[i] * f;
        if (seen.insert(poly_key(g)).second) out.push_back(std::move(g));
      }
    }
    return out;
  }

  // A factor q*v - s*c*p of an equation in the single unknown v, with p and q admissible products.
  std::optional<QPoly> linear_factor(const QPoly& e, VarId v) const {
    if (!slice_ || e.degree_in(v) < 2) return std::nullopt;
    auto coef = e.coefficients_in(v);
    const QPoly& c0 = coef.front();
    const QPoly& lead = coef.back();
    if (c0.is_zero()) return std::nullopt;
    std::vector<exactcore::Rat> scales{exactcore::Rat(1)};
    QPoly r0 = slice_->strip(c0), rl = slice_->strip(lead);
    if (r0.is_constant() && rl.is_constant()) scales.push_back(r0.constant_term() / rl.constant_term());
    auto ps = subproducts(unit_factors(c0)), qs = subproducts(unit_factors(lead));
    const QPoly x = QPoly::variable(v);
    for (const auto& q : qs)
      for (const auto& p : ps)
        for (const auto& sc : scales)
          for (int s : {1, -1}) {
            QPoly f = q * x - p * QPoly(sc * exactcore::Rat(s));
            if (divide_exact(e, f)) return make_monic(f);
          }
    return std::nullopt;
  }

  void finish(const State& st, std::vector<Solution>& out) const {
    Solution s;
    std::map<VarId, RatFunc> val;
    auto lookup = [&](VarId v) {
      auto it = val.find(v);
      return it != val.end() ? it->second : RatFunc(QPoly::variable(v));
    };
    for (auto it = st.steps.rbegin(); it != st.steps.rend(); ++it) {
      RatFunc num = it->num.evaluate<RatFunc>(lookup), den = it->den.evaluate<RatFunc>(lookup);
      if (den.is_zero()) return;
      val[it->var] = num / den;
    }
    for (const auto& nz : st.nonzero) {
      // Assumptions are stated in the variables alive when they were made.
      RatFunc r = nz.evaluate<RatFunc>(lookup);
      if (r.is_zero()) return;
      s.nonvanishing.push_back(nz);
    }
    for (VarId v : order_)
      if (!val.count(v)) s.free.push_back(v);
    s.values = std::move(val);
    out.push_back(std::move(s));
  }

  std::size_t rank_of(VarId v) const { return v; }
  std::string show(const QPoly& p) const { return reg_ ? p.pretty(*reg_) : poly_key(p); }

  std::set<VarId> unknowns_;
  std::vector<VarId> order_;
  std::set<VarId> keep_;
  const Admissible* slice_;
  const exactcore::VarRegistry* reg_ = nullptr;

 public:
  void set_registry(const exactcore::VarRegistry* r) { reg_ = r; }
};

}  // namespace

std::vector<Solution> solve_triangular(std::vector<QPoly> eqs, const std::vector<VarId>& unknowns,
                                       const Admissible* slice, const exactcore::VarRegistry* reg,
                                       const std::vector<VarId>& keep) {
  Solver s(unknowns, slice, keep);
  s.set_registry(reg);
  State st;
  st.eqs = std::move(eqs);
  return s.run(std::move(st));
}

namespace {

RPoly to_rpoly(const QPoly& p, const std::set<VarId>& params) {
  std::unordered_map<Monomial, QPoly, exactcore::MonomialHash> acc;
  for (const auto& t : p.terms()) {
    std::vector<exactcore::VarPow> keep, par;
    for (const auto& f : t.mono.factors()) (params.count(f.var) ? par : keep).push_back(f);
    acc[Monomial::from_factors(keep)] += QPoly::monomial(Monomial::from_factors(par), t.coeff);
  }
  std::vector<RPoly::Term> terms;
  for (auto& [m, c] : acc)
    if (!c.is_zero()) terms.push_back({m, RatFunc(c)});
  return RPoly::from_terms(std::move(terms));
}

// Multiplies out coefficient denominators.
QPoly clear_rpoly(const RPoly& p) {
  QPoly l(1);
  for (const auto& t : p.terms()) {
    const QPoly& d = t.coeff.den();
    l = *divide_exact(l * d, exactcore::gcd(l, d));
  }
  QPoly out;
  for (const auto& t : p.terms()) {
    QPoly s = *divide_exact(l, t.coeff.den());
    out += (t.coeff.num() * s).times_monomial(t.mono);
  }
  return out;
}

std::unordered_map<VarId, QPoly> base_substitution(const EvsSystem& sys, VarId t1, VarId t2) {
  const auto& reg = *sys.reg;
  std::unordered_map<VarId, QPoly> sub;
  auto x = vogan::x_ks();
  if (x.mults != sys.base.mults()) throw precondition("NotKsSpace", "slice analysis needs mults (2,4,4,4,2)");
  for (int i = 1; i <= x.n(); ++i)
    for (std::size_t r = 0; r < x.x(i).rows(); ++r)
      for (std::size_t c = 0; c < x.x(i).cols(); ++c) sub[reg.at(vogan::x_var_name(i, r, c))] = QPoly(x.x(i)(r, c));
  auto y = vogan::y_ks_slice<QPoly>(QPoly::variable(t1), QPoly::variable(t2));
  for (int i = 1; i <= y.n(); ++i)
    for (std::size_t r = 0; r < y.y(i).rows(); ++r)
      for (std::size_t c = 0; c < y.y(i).cols(); ++c) sub[reg.at(vogan::y_var_name(i, r, c))] = y.y(i)(r, c);
  return sub;
}

}  // namespace

SliceRestriction restrict_to_slice(const EvsSystem& sys) {
  SliceRestriction res;
  res.reg = sys.reg;
  res.slice.t1 = sys.reg->intern("t1");
  res.slice.t2 = sys.reg->intern("t2");
  res.expected_rank = expected_generic_rank(sys);
  res.label = sys.label;
  auto sub = base_substitution(sys, res.slice.t1, res.slice.t2);

  if (sys.spec) {
    auto eqs = cover::chart_ideal_at(*sys.spec, *sys.chart, vogan::x_ks(), *sys.reg);
    auto coords = cover::chart_coordinates(*sys.spec, *sys.chart, *sys.reg);
    // Declared fibre coordinates stay free whenever the elimination allows it.
    std::vector<VarId> keep;
    for (VarId v : coords.vars) {
      const auto& name = sys.reg->name(v);
      auto short_name = name.substr(name.find('.') + 1);
      if (std::find(sys.chart->expected_free.begin(), sys.chart->expected_free.end(), short_name) !=
          sys.chart->expected_free.end())
        keep.push_back(v);
    }
    auto sols = solve_triangular(eqs, coords.vars, nullptr, sys.reg.get(), keep);
    if (sols.empty()) throw Error(ErrorKind::Precondition, "ChartMissesFibre", "chart " + sys.chart->id + " misses the fibre over x_KS");
    if (sols.size() > 1) throw Error(ErrorKind::Check, "NonTriangular", "fibre parametrization splits into branches");
    const auto& s = sols[0];
    res.free_vars = s.free;
    for (const auto& [v, val] : s.values) {
      if (!val.den().is_constant()) throw Error(ErrorKind::Check, "NonTriangular", "fibre parametrization is not polynomial");
      QPoly p = val.num().scaled(Rat(1) / val.den().constant_term());
      res.fibre_param[v] = p;
      sub[v] = p;
    }
  }

  const PolyMatrix j = jacobian(sys.generators, sys.variables());
  std::set<VarId> params{res.slice.t1, res.slice.t2};
  res.matrix = RPolyMatrix(j.rows(), j.cols());
  for (std::size_t r = 0; r < j.rows(); ++r)
    for (std::size_t c = 0; c < j.cols(); ++c)
      if (!j(r, c).is_zero()) res.matrix(r, c) = to_rpoly(j(r, c).substitute(sub), params);
  return res;
}

SingularLocus singular_locus(const SliceRestriction& r) {
  SingularLocus out;
  const Admissible& slice = r.slice;
  exactcore::UnitRank<RatFunc> unit = [&](const RatFunc& c) {
    if (c.is_constant()) return 0;
    return slice.is_unit(c) ? 1 : -1;
  };
  auto ps = exactcore::psnf<RatFunc>(r.matrix, unit);
  out.identity_size = ps.identity_size;
  out.residual = ps.residual;
  if (ps.identity_size > r.expected_rank)
    throw Error(ErrorKind::Check, "RankDisagreement", "unit pivots exceed the generic rank");
  const std::size_t need = r.expected_rank - ps.identity_size;
  if (need == 0) return out;
  std::vector<QPoly> sys;
  if (need == 1) {
    for (std::size_t i = 0; i < ps.residual.rows(); ++i)
      for (std::size_t j = 0; j < ps.residual.cols(); ++j)
        if (!ps.residual(i, j).is_zero()) sys.push_back(clear_rpoly(ps.residual(i, j)));
  } else {
    PolyMatrix b(ps.residual.rows(), ps.residual.cols());
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!ps.residual(i, j).is_zero()) b(i, j) = clear_rpoly(ps.residual(i, j));
    for (auto& m : exactcore::minors(b, need))
      if (!m.is_zero()) sys.push_back(std::move(m));
  }
  std::set<std::string> seen;
  for (auto& p : sys) {
    p = make_monic(slice.strip(p));
    if (seen.insert(p.to_string(*r.reg)).second) out.system.push_back(p);
  }
  out.solutions = solve_triangular(out.system, r.free_vars, &slice, r.reg.get());
  return out;
}

std::string format_solution(const Solution& s, const exactcore::VarRegistry& reg) {
  std::string out;
  for (const auto& [v, val] : s.values) {
    if (!out.empty()) out += ", ";
    out += reg.name(v) + "=" + val.to_string(reg);
  }
  for (VarId v : s.free) {
    if (!out.empty()) out += ", ";
    out += reg.name(v) + " free";
  }
  return out.empty() ? "(all free)" : out;
}

std::vector<RatFunc> slice_point(const EvsSystem& sys, const SliceRestriction& r, const Solution& s) {
  const auto& reg = *sys.reg;
  std::vector<RatFunc> pt(reg.size());
  for (VarId v = 0; v < reg.size(); ++v) pt[v] = RatFunc(QPoly::variable(v));
  auto sub = base_substitution(sys, r.slice.t1, r.slice.t2);
  for (const auto& [v, p] : sub) pt[v] = RatFunc(p);
  auto free_val = [&](VarId v) {
    auto it = s.values.find(v);
    return it != s.values.end() ? it->second : RatFunc(QPoly::variable(v));
  };
  for (VarId v : r.free_vars) pt[v] = free_val(v);
  for (const auto& [v, p] : r.fibre_param) pt[v] = p.evaluate<RatFunc>(free_val);
  return pt;
}

}  // namespace voganish::evs
