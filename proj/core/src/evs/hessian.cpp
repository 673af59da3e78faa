#include "voganish/evs/evs.hpp"

#include <functional>

namespace voganish::evs {

namespace {

RatFunc at(const QPoly& p, const std::vector<RatFunc>& point) {
  return p.evaluate<RatFunc>([&](VarId v) -> RatFunc {
    if (v >= point.size()) throw precondition("BadPoint", "point misses variable " + std::to_string(v));
    return point[v];
  });
}

RMatrix jacobian_at(const std::vector<QPoly>& gens, const std::vector<std::size_t>& rows,
                    const std::vector<VarId>& vars, const std::vector<RatFunc>& point) {
  RMatrix j(rows.size(), vars.size());
  std::unordered_map<VarId, std::size_t> col;
  for (std::size_t c = 0; c < vars.size(); ++c) col[vars[c]] = c;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (VarId v : gens[rows[r]].variables()) {
      auto it = col.find(v);
      if (it != col.end()) j(r, it->second) = at(gens[rows[r]].derivative(v), point);
    }
  return j;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Second derivatives of p over vars at the point.
RMatrix hessian_at(const QPoly& p, const std::vector<VarId>& vars, const std::vector<RatFunc>& point) {
  RMatrix h(vars.size(), vars.size());
  std::unordered_map<VarId, std::size_t> pos;
  for (std::size_t c = 0; c < vars.size(); ++c) pos[vars[c]] = c;
  auto occ = p.variables();
  for (std::size_t a = 0; a < occ.size(); ++a) {
    auto ia = pos.find(occ[a]);
    if (ia == pos.end()) continue;
    QPoly da = p.derivative(occ[a]);
    for (std::size_t b = a; b < occ.size(); ++b) {
      auto ib = pos.find(occ[b]);
      if (ib == pos.end()) continue;
      RatFunc v = at(da.derivative(occ[b]), point);
      h(ia->second, ib->second) = v;
      h(ib->second, ia->second) = v;
    }
  }
  return h;
}

struct Pieces {
  std::vector<VarId> all;  // implicit then local
  RMatrix gw, gu;
};

Pieces pieces(const std::vector<QPoly>& gens, const Split& split, const std::vector<RatFunc>& point) {
  Pieces p;
  p.all = split.implicit;
  p.all.insert(p.all.end(), split.local.begin(), split.local.end());
  p.gw = jacobian_at(gens, split.rows, split.implicit, point);
  p.gu = jacobian_at(gens, split.rows, split.local, point);
  return p;
}

// Z = [w_u; I] with rows in the order implicit then local.
RMatrix tangent_frame(const RMatrix& wu, std::size_t nlocal) {
  RMatrix z(wu.rows() + nlocal, nlocal);
  z.set_block(0, 0, wu);
  for (std::size_t i = 0; i < nlocal; ++i) z(wu.rows() + i, i) = RatFunc(1);
  return z;
}

}  // namespace

Split local_coordinates(const std::vector<QPoly>& gens, const std::vector<VarId>& vars,
                        const std::vector<RatFunc>& point, std::size_t expected_rank) {
  RMatrix j = jacobian_at(gens, iota(gens.size()), vars, point);
  auto cols = exactcore::rref(j).pivots;
  if (expected_rank && cols.size() != expected_rank)
    throw Error(ErrorKind::Check, "NotSmoothPoint",
                "Jacobian rank " + std::to_string(cols.size()) + " at the point, expected " + std::to_string(expected_rank));
  Split s;
  std::vector<bool> imp(vars.size(), false);
  for (auto c : cols) imp[c] = true;
  for (std::size_t c = 0; c < vars.size(); ++c) (imp[c] ? s.implicit : s.local).push_back(vars[c]);
  auto rows = exactcore::rref(j.submatrix(iota(j.rows()), cols).transpose()).pivots;
  s.rows = rows;
  return s;
}

ImplicitDerivatives implicit_derivatives(const std::vector<QPoly>& gens, const Split& split,
                                         const std::vector<RatFunc>& point, int order) {
  auto p = pieces(gens, split, point);
  auto inv = exactcore::inverse(p.gw);
  if (!inv) throw Error(ErrorKind::Check, "SingularSystem", "implicit block is not invertible at the point");
  ImplicitDerivatives out;
  out.first = (*inv * p.gu).scaled(RatFunc(-1));
  if (order < 2) return out;
  const std::size_t nl = split.local.size();
  RMatrix z = tangent_frame(out.first, nl);
  RMatrix zt = z.transpose();
  std::vector<RMatrix> q;
  for (std::size_t k = 0; k < split.rows.size(); ++k) q.push_back(zt * hessian_at(gens[split.rows[k]], p.all, point) * z);
  for (std::size_t i = 0; i < split.implicit.size(); ++i) {
    RMatrix acc(nl, nl);
    for (std::size_t k = 0; k < q.size(); ++k)
      if (!(*inv)(i, k).is_zero()) acc = acc - q[k].scaled((*inv)(i, k));
    out.second.push_back(std::move(acc));
  }
  return out;
}

HessianReport hessian(const QPoly& f, const std::vector<QPoly>& gens, const Split& split,
                      const std::vector<RatFunc>& point) {
  HessianReport rep;
  rep.split = split;
  auto p = pieces(gens, split, point);
  const std::size_t nw = split.implicit.size(), nl = split.local.size();
  RMatrix wu(nw, nl), lambda(nw, 1);
  RMatrix fw = jacobian_at({f}, {0}, split.implicit, point), fu = jacobian_at({f}, {0}, split.local, point);
  if (nw) {
    auto inv = exactcore::inverse(p.gw);
    if (!inv) throw Error(ErrorKind::Check, "SingularSystem", "implicit block is not invertible at the point");
    wu = (*inv * p.gu).scaled(RatFunc(-1));
    lambda = inv->transpose() * fw.transpose();
  }
  // Restricted gradient f_u + f_w w_u.
  RMatrix grad = fu + (nw ? fw * wu : RMatrix(1, nl));
  if (!grad.is_zero()) throw Error(ErrorKind::Check, "NotCritical", "f restricted to the variety has nonzero gradient");
  // Lagrangian form: the second-order implicit terms sum to -lambda . (Z^T g'' Z).
  RMatrix l = hessian_at(f, p.all, point);
  for (std::size_t k = 0; k < nw; ++k)
    if (!lambda(k, 0).is_zero()) l = l - hessian_at(gens[split.rows[k]], p.all, point).scaled(lambda(k, 0));
  RMatrix z = tangent_frame(wu, nl);
  rep.hessian = z.transpose() * l * z;
  if (!(rep.hessian == rep.hessian.transpose())) throw Error(ErrorKind::Check, "AsymmetricHessian", "Hessian is not symmetric");
  rep.rank = exactcore::rank(rep.hessian);
  return rep;
}

void square_certificate(HessianReport& rep, std::uint64_t seed) {
  const RMatrix& h = rep.hessian;
  const std::size_t n = h.rows();
  rep.verdict = Verdict::Unknown;
  rep.minor.clear();
  rep.isotropic.clear();
  if (rep.rank % 2) return;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-97, 97);
  // Numeric specialization of the parameters; retry on poles.
  exactcore::QMatrix hn;
  std::unordered_map<VarId, Rat> vals;
  auto value = [&](VarId v) {
    auto it = vals.find(v);
    if (it == vals.end()) it = vals.emplace(v, Rat(dist(rng))).first;
    return it->second;
  };
  for (int attempt = 0;; ++attempt) {
    if (attempt > 20) return;
    vals.clear();
    try {
      hn = exactcore::QMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!h(i, j).is_zero()) hn(i, j) = h(i, j).evaluate(value);
    } catch (const std::domain_error&) {
      continue;
    }
    if (exactcore::rank(hn) == rep.rank) break;
  }
  // Independent columns of a symmetric matrix give a nonsingular principal minor.
  auto s = exactcore::rref(hn).pivots;
  rep.minor = s;
  const std::size_t k = rep.rank / 2;
  std::vector<std::size_t> cand;
  for (auto i : s)
    if (h(i, i).is_zero()) cand.push_back(i);
  std::vector<std::size_t> pick;
  std::function<bool(std::size_t)> grow = [&](std::size_t from) {
    if (pick.size() == k) return true;
    for (std::size_t a = from; a < cand.size(); ++a) {
      if (cand.size() - a < k - pick.size()) return false;
      bool ok = true;
      for (auto b : pick)
        if (!h(cand[a], b).is_zero()) {
          ok = false;
          break;
        }
      if (!ok) continue;
      pick.push_back(cand[a]);
      if (grow(a + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (!grow(0)) return;
  std::vector<std::size_t> rest;
  for (auto i : s)
    if (std::find(pick.begin(), pick.end(), i) == pick.end()) rest.push_back(i);
  RMatrix b = h.submatrix(pick, rest);
  rep.det_offblock = exactcore::determinant(b);
  // det H[S,S] = (-1)^k det(B)^2 at the numeric point.
  Rat dfull = exactcore::determinant(hn.submatrix(s, s));
  Rat db = exactcore::determinant(hn.submatrix(pick, rest));
  Rat want = db * db;
  if (k % 2) want = -want;
  if (dfull != want || rep.det_offblock.is_zero()) return;
  rep.isotropic = pick;
  rep.verdict = Verdict::Square;
}

}  // namespace voganish::evs
