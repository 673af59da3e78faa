#include "voganish/evs/evs.hpp"

#include <set>

namespace voganish::evs {

using exactcore::QMatrix;
using vogan::DualPoint;
using vogan::HElement;
using vogan::QuiverPoint;

std::vector<VarId> EvsSystem::variables() const {
  std::vector<VarId> v(nvars);
  for (std::size_t i = 0; i < nvars; ++i) v[i] = static_cast<VarId>(i);
  return v;
}

DualPoint dual_representative(const RankTriangle& t) {
  QuiverPoint x = vogan::representative(t);
  DualPoint y = vogan::zero_dual<Rat>(t.mults());
  for (int i = 1; i <= t.n(); ++i) y.y(i) = x.x(i).transpose();
  return y;
}

int dual_orbit_dim(const RankTriangle& t) {
  return static_cast<int>(exactcore::rank(vogan::tangent_map(dual_representative(t))));
}

namespace {

QPoly pairing_poly(const std::vector<int>& mults, exactcore::VarRegistry& reg) {
  auto x = vogan::symbolic_point(mults, reg);
  auto y = vogan::symbolic_dual(mults, reg);
  return vogan::pairing(x, y);
}

}  // namespace

EvsSystem assemble_system(const cover::CoverSpec& spec, const cover::Chart& chart, const RankTriangle& target) {
  if (target.mults() != spec.mults()) throw precondition("MultsMismatch", "target and cover live on different spaces");
  EvsSystem sys;
  sys.reg = exactcore::make_registry();
  sys.generators = cover::chart_ideal(spec, chart, *sys.reg);
  sys.n_source = sys.generators.size();
  vogan::symbolic_dual(spec.mults(), *sys.reg);
  auto dual = vogan::closure_ideal(target, vogan::Side::VDual, *sys.reg);
  sys.n_target = dual.size();
  sys.generators.insert(sys.generators.end(), dual.begin(), dual.end());
  sys.generators.push_back(pairing_poly(spec.mults(), *sys.reg));
  sys.nvars = sys.reg->size();
  sys.base = spec.base;
  sys.target = target;
  sys.spec = spec;
  sys.chart = chart;
  sys.label = chart.label.empty() ? chart.id : chart.label;
  sys.base_dim = vogan::orbit_dim(spec.base);
  sys.target_dim = dual_orbit_dim(target);
  return sys;
}

EvsSystem assemble_closure_system(const RankTriangle& base, const RankTriangle& target) {
  if (target.mults() != base.mults()) throw precondition("MultsMismatch", "base and target live on different spaces");
  EvsSystem sys;
  sys.reg = exactcore::make_registry();
  vogan::symbolic_point(base.mults(), *sys.reg);
  vogan::symbolic_dual(base.mults(), *sys.reg);
  const auto open = multiseg::open_orbit(base.mults());
  if (!(base == open)) sys.generators = vogan::closure_ideal(base, vogan::Side::V, *sys.reg);
  sys.n_source = sys.generators.size();
  auto dual = vogan::closure_ideal(target, vogan::Side::VDual, *sys.reg);
  sys.n_target = dual.size();
  sys.generators.insert(sys.generators.end(), dual.begin(), dual.end());
  sys.generators.push_back(pairing_poly(base.mults(), *sys.reg));
  sys.nvars = sys.reg->size();
  sys.base = base;
  sys.target = target;
  sys.label = "closure";
  sys.base_dim = vogan::orbit_dim(base);
  sys.target_dim = dual_orbit_dim(target);
  return sys;
}

std::size_t expected_generic_rank(const EvsSystem& sys) {
  const long dim = static_cast<long>(sys.base_dim) + sys.target_dim - 1;
  if (dim < 0 || static_cast<long>(sys.nvars) < dim) throw precondition("BadDimension", "variety larger than ambient space");
  return sys.nvars - static_cast<std::size_t>(dim);
}

PolyMatrix jacobian(const std::vector<QPoly>& gens, const std::vector<VarId>& vars) {
  PolyMatrix j(gens.size(), vars.size());
  std::unordered_map<VarId, std::size_t> col;
  for (std::size_t c = 0; c < vars.size(); ++c) col[vars[c]] = c;
  for (std::size_t r = 0; r < gens.size(); ++r)
    for (VarId v : gens[r].variables()) {
      auto it = col.find(v);
      if (it != col.end()) j(r, it->second) = gens[r].derivative(v);
    }
  return j;
}

namespace {

Rat rnd(std::mt19937_64& rng, int range = 9) {
  std::uniform_int_distribution<int> d(-range, range);
  return Rat(d(rng));
}

Rat rnd_nonzero(std::mt19937_64& rng) {
  for (;;) {
    Rat r = rnd(rng);
    if (sgn(r)) return r;
  }
}

HElement random_group_element(const std::vector<int>& mults, std::mt19937_64& rng) {
  HElement h{mults, {}};
  for (int m : mults) {
    for (;;) {
      QMatrix a(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = rnd(rng);
      if (exactcore::rank(a) == static_cast<std::size_t>(m)) {
        h.h.push_back(std::move(a));
        break;
      }
    }
  }
  return h;
}

void put_dual(const DualPoint& y, const exactcore::VarRegistry& reg, std::vector<Rat>& out) {
  for (int i = 1; i <= y.n(); ++i)
    for (std::size_t r = 0; r < y.y(i).rows(); ++r)
      for (std::size_t c = 0; c < y.y(i).cols(); ++c) out[reg.at(vogan::y_var_name(i, r, c))] = y.y(i)(r, c);
}

void put_point(const QuiverPoint& x, const exactcore::VarRegistry& reg, std::vector<Rat>& out) {
  for (int i = 1; i <= x.n(); ++i)
    for (std::size_t r = 0; r < x.x(i).rows(); ++r)
      for (std::size_t c = 0; c < x.x(i).cols(); ++c) out[reg.at(vogan::x_var_name(i, r, c))] = x.x(i)(r, c);
}

// Chart coordinates of a random flag compatible with every chain containment.
void random_flag(const EvsSystem& sys, std::mt19937_64& rng, std::vector<Rat>& out) {
  const auto& spec = *sys.spec;
  auto coords = cover::chart_coordinates(spec, *sys.chart, *sys.reg);
  std::map<cover::SubspaceId, QMatrix> value;
  auto numeric = [&](const exactcore::Matrix<QPoly>& b) {
    QMatrix m(b.rows(), b.cols());
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) {
        const auto& p = b(r, c);
        m(r, c) = p.is_constant() ? p.constant_term() : out[p.lead().mono.factors()[0].var];
      }
    return m;
  };
  std::map<cover::SubspaceId, cover::SubspaceId> above;
  for (const auto& [a, b] : spec.chains) above[a] = b;
  std::vector<cover::SubspaceId> order(spec.subspaces.rbegin(), spec.subspaces.rend());
  for (const auto& s : order) {
    const auto& basis = coords.basis.at(s);
    auto up = above.find(s);
    std::set<int> pb;
    if (up != above.end())
      for (int p : sys.chart->pivots.at(up->second)) pb.insert(p);
    for (std::size_t r = 0; r < basis.rows(); ++r)
      for (std::size_t c = 0; c < basis.cols(); ++c) {
        const auto& p = basis(r, c);
        if (!p.is_constant() && (up == above.end() || pb.count(static_cast<int>(r))))
          out[p.lead().mono.factors()[0].var] = rnd(rng);
      }
    if (up != above.end()) {
      QMatrix partial = numeric(basis);
      std::vector<std::size_t> rows(pb.begin(), pb.end());
      QMatrix full = value.at(up->second) * partial.submatrix(rows, [&] {
        std::vector<std::size_t> cs(basis.cols());
        for (std::size_t c = 0; c < cs.size(); ++c) cs[c] = c;
        return cs;
      }());
      for (std::size_t r = 0; r < basis.rows(); ++r)
        for (std::size_t c = 0; c < basis.cols(); ++c)
          if (!basis(r, c).is_constant()) out[basis(r, c).lead().mono.factors()[0].var] = full(r, c);
    }
    value[s] = numeric(basis);
  }
}

}  // namespace

std::vector<Rat> sample_point(const EvsSystem& sys, std::mt19937_64& rng) {
  const auto& reg = *sys.reg;
  const auto& mults = sys.base.mults();
  const int n = sys.base.n();
  std::vector<Rat> out(reg.size(), Rat(0));
  DualPoint y = vogan::act(random_group_element(mults, rng), dual_representative(sys.target));
  put_dual(y, reg, out);

  if (sys.spec) {
    random_flag(sys, rng, out);
    // Remaining conditions are linear in x once the flag and y are fixed.
    std::vector<VarId> xv;
    for (int i = 1; i <= n; ++i)
      for (int r = 0; r < mults[i]; ++r)
        for (int c = 0; c < mults[i - 1]; ++c) xv.push_back(reg.at(vogan::x_var_name(i, r, c)));
    std::unordered_map<VarId, std::size_t> col;
    for (std::size_t k = 0; k < xv.size(); ++k) col[xv[k]] = k;
    QMatrix lin(0, xv.size());
    auto add_linear = [&](const QPoly& g) {
      std::vector<Rat> row(xv.size(), Rat(0));
      Rat constant = 0;
      bool any = false;
      for (const auto& t : g.terms()) {
        Rat c = t.coeff;
        VarId xvar = 0;
        bool have_x = false;
        for (const auto& f : t.mono.factors()) {
          auto it = col.find(f.var);
          if (it != col.end()) {
            if (have_x || f.exp != 1) throw Error(ErrorKind::Check, "NonLinear", "generator not linear in x");
            xvar = f.var;
            have_x = true;
          } else {
            for (std::uint32_t e = 0; e < f.exp; ++e) c *= out[f.var];
          }
        }
        if (!have_x) {
          constant += c;
          continue;
        }
        row[col[xvar]] += c;
        any = true;
      }
      if (sgn(constant)) throw Error(ErrorKind::Check, "BadSample", "flag violates a chain containment");
      if (any) lin.append_row(row);
    };
    for (std::size_t k = 0; k < sys.n_source; ++k) add_linear(sys.generators[k]);
    add_linear(sys.f());
    auto ker = exactcore::kernel_basis(lin);
    std::vector<Rat> xs(xv.size(), Rat(0));
    for (const auto& v : ker) {
      Rat c = rnd(rng);
      for (std::size_t k = 0; k < xs.size(); ++k) xs[k] += c * v[k];
    }
    for (std::size_t k = 0; k < xv.size(); ++k) out[xv[k]] = xs[k];
    return out;
  }

  // Torus scaling x_i -> mu_i x_i stays in the orbit and makes <x, y> linear in mu.
  QuiverPoint x = vogan::act(random_group_element(mults, rng), vogan::representative(sys.base));
  std::vector<Rat> c(n + 1, Rat(0)), mu(n + 1, Rat(1));
  for (int i = 1; i <= n; ++i) {
    auto xi = vogan::zero_point<Rat>(mults);
    xi.x(i) = x.x(i);
    c[i] = vogan::pairing(xi, y);
  }
  int pivot = 0;
  for (int i = 1; i <= n; ++i)
    if (sgn(c[i])) pivot = i;
  if (pivot) {
    for (;;) {
      Rat acc = 0;
      for (int i = 1; i <= n; ++i)
        if (i != pivot) {
          mu[i] = rnd_nonzero(rng);
          acc += mu[i] * c[i];
        }
      mu[pivot] = -acc / c[pivot];
      if (sgn(mu[pivot])) break;
    }
  }
  for (int i = 1; i <= n; ++i) x.x(i) = x.x(i).scaled(mu[i]);
  put_point(x, reg, out);
  return out;
}

RankCheck check_generic_rank(const EvsSystem& sys, std::uint64_t seed, int samples) {
  RankCheck res;
  res.expected = expected_generic_rank(sys);
  const PolyMatrix j = jacobian(sys.generators, sys.variables());
  std::mt19937_64 rng(seed);
  res.sampled.seed = seed;
  for (int s = 0; s < samples; ++s) {
    auto pt = sample_point(sys, rng);
    for (const auto& g : sys.generators)
      if (sgn(g.evaluate<Rat>([&](VarId v) { return pt[v]; })))
        throw Error(ErrorKind::Check, "BadSample", "sampled point is off the variety");
    std::size_t r = exactcore::rank(exactcore::evaluate(j, pt));
    res.sampled.sample_ranks.push_back(r);
    res.sampled.rank = std::max(res.sampled.rank, r);
  }
  for (auto r : res.sampled.sample_ranks)
    if (r != res.sampled.rank) res.sampled.disagreement = true;
  if (res.sampled.rank != res.expected)
    throw Error(ErrorKind::Check, "RankDisagreement",
                "expected generic rank " + std::to_string(res.expected) + ", sampled " +
                    std::to_string(res.sampled.rank));
  return res;
}

int expected_hessian_rank(const EvsSystem& sys) {
  vogan::VoganSpace space{sys.base.mults()};
  return sys.base_dim - (space.dim_V() - sys.target_dim);
}

}  // namespace voganish::evs
