#include "ffield.hpp"
#include "voganish/cover/cover.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>

namespace voganish::cover {

using detail::Lattice;
using detail::Vec;

namespace {

std::recursive_mutex& count_mutex() {
  static std::recursive_mutex mu;
  return mu;
}

const std::vector<int>& sample_qs() {
  static const std::vector<int> qs = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32};
  return qs;
}

CountPoly trim(CountPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

CountPoly add(const CountPoly& a, const CountPoly& b) {
  CountPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return trim(r);
}

CountPoly mul(const CountPoly& a, const CountPoly& b) {
  if (a.empty() || b.empty()) return {};
  CountPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return trim(r);
}

// Newton interpolation through (xs[i], ys[i]); throws unless the result has integer coefficients.
CountPoly interpolate(const std::vector<int>& xs, const std::vector<Int>& ys) {
  const std::size_t n = xs.size();
  std::vector<Rat> dd(ys.begin(), ys.end());
  for (std::size_t lvl = 1; lvl < n; ++lvl)
    for (std::size_t i = n - 1; i >= lvl; --i) dd[i] = (dd[i] - dd[i - 1]) / Rat(xs[i] - xs[i - lvl]);
  std::vector<Rat> poly{dd[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    // poly = poly * (q - xs[k]) + dd[k]
    std::vector<Rat> next(poly.size() + 1, Rat(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * xs[k];
    }
    next[0] += dd[k];
    poly = std::move(next);
  }
  CountPoly out;
  for (auto& c : poly) {
    c.canonicalize();
    if (c.get_den() != 1) throw Error(ErrorKind::Check, "CountNotPolynomial", "non-integral interpolated coefficient");
    out.push_back(c.get_num());
  }
  return trim(out);
}

// Coordinate representative of a chain of images relative to the kernel chain:
// K_k = span(e_0 .. e_{kappa_k - 1}); image a spans the coordinates of level <= a.
std::vector<std::uint32_t> image_masks(int m, const std::vector<int>& kappa, const std::vector<int>& itype, int nimg) {
  const int ell = static_cast<int>(kappa.size());
  auto d = [&](int a, int k) -> int {  // a in 0..nimg, k in 0..ell+1
    if (a == 0 || k == 0) return 0;
    if (a == nimg + 1) return k == ell + 1 ? m : kappa[k - 1];
    const int* row = &itype[(a - 1) * (ell + 1)];
    return k == ell + 1 ? row[0] : row[k];
  };
  std::vector<std::uint32_t> masks(nimg, 0);
  int coord = 0;
  for (int k = 1; k <= ell + 1; ++k)
    for (int a = 1; a <= nimg + 1; ++a) {
      int cnt = d(a, k) - d(a - 1, k) - d(a, k - 1) + d(a - 1, k - 1);
      if (cnt < 0) throw Error(ErrorKind::Check, "BadType", "inconsistent image type");
      for (int c = 0; c < cnt; ++c, ++coord)
        for (int b = a; b <= nimg; ++b) masks[b - 1] |= 1u << coord;
    }
  return masks;
}

using TypeCounts = std::map<std::vector<int>, CountPoly>;

// Flags T_1 < ... < T_s of dims t with T_b containing T_{b-1} + R_b, classified by dims of T_b cap K_k.
std::map<std::vector<int>, Int> classify_flags(int q, int m, const std::vector<int>& kappa, const std::vector<int>& t,
                                               const std::vector<std::uint32_t>& req) {
  Lattice& lat = detail::lattice(q, m);
  std::map<int, std::map<std::vector<int>, Int>> level{{lat.zero(), {{std::vector<int>{}, Int(1)}}}};
  for (std::size_t b = 0; b < t.size(); ++b) {
    int rid = lat.coordinate(req[b]);
    std::map<int, std::map<std::vector<int>, Int>> next;
    for (const auto& [id, prefixes] : level) {
      int base = lat.sum(id, rid);
      for (int w : lat.supersets(base, t[b])) {
        std::vector<int> ty;
        for (int kv : kappa) ty.push_back(lat.meet_initial(w, kv));
        auto& dst = next[w];
        for (const auto& [pre, c] : prefixes) {
          std::vector<int> full = pre;
          full.insert(full.end(), ty.begin(), ty.end());
          dst[full] += c;
        }
      }
    }
    level = std::move(next);
  }
  std::map<std::vector<int>, Int> out;
  for (const auto& [id, prefixes] : level)
    for (const auto& [pre, c] : prefixes) out[pre] += c;
  return out;
}

const TypeCounts& transition(int m, const std::vector<int>& kappa, const std::vector<int>& t,
                             const std::vector<std::uint32_t>& req) {
  static std::map<std::string, TypeCounts> cache;
  std::ostringstream key;
  key << m << '|';
  for (int k : kappa) key << k << ',';
  key << '|';
  for (int d : t) key << d << ',';
  key << '|';
  for (auto r : req) key << r << ',';
  auto it = cache.find(key.str());
  if (it != cache.end()) return it->second;

  int degree = 0;
  for (std::size_t b = 0; b < t.size(); ++b) degree += (t[b] - (b ? t[b - 1] : 0)) * (m - t[b]);
  const std::size_t npts = static_cast<std::size_t>(degree) + 2;
  if (npts > sample_qs().size()) throw Error(ErrorKind::Budget, "CountOverflowBudget", "flag variety too large");
  std::vector<int> xs(sample_qs().begin(), sample_qs().begin() + npts);
  std::vector<std::map<std::vector<int>, Int>> samples;
  for (int q : xs) samples.push_back(classify_flags(q, m, kappa, t, req));
  std::set<std::vector<int>> types;
  for (const auto& s : samples)
    for (const auto& [ty, c] : s) types.insert(ty);
  TypeCounts out;
  for (const auto& ty : types) {
    std::vector<Int> ys;
    for (const auto& s : samples) {
      auto f = s.find(ty);
      ys.push_back(f == s.end() ? Int(0) : f->second);
    }
    std::vector<int> fit_x(xs.begin(), xs.end() - 1);
    std::vector<Int> fit_y(ys.begin(), ys.end() - 1);
    CountPoly p = interpolate(fit_x, fit_y);
    if (evaluate_count(p, xs.back()) != ys.back())
      throw Error(ErrorKind::Check, "CountNotPolynomial", "flag count fails the verification point");
    if (!p.empty()) out.emplace(ty, std::move(p));
  }
  return cache.emplace(key.str(), std::move(out)).first->second;
}

// Source dims feeding map v (vertex v-1 to v), ascending; FULL is m_{v-1}.
std::vector<int> sources_of(const CoverSpec& spec, int v) {
  std::set<int> s;
  for (const auto& c : spec.conditions)
    if (c.map == v) s.insert(c.src);
  return {s.begin(), s.end()};
}

bool zero_target(const CoverSpec& spec, int v, int src) {
  for (const auto& c : spec.conditions)
    if (c.map == v && c.src == src && c.tgt == 0) return true;
  return false;
}

}  // namespace

Int evaluate_count(const CountPoly& p, long q) {
  Int acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * q + p[i];
  return acc;
}

std::string format_count(const CountPoly& p) {
  if (p.empty()) return "0";
  std::string s;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] == 0) continue;
    Int c = p[i];
    bool neg = c < 0;
    if (neg) c = -c;
    if (!s.empty()) s += neg ? " - " : " + ";
    else if (neg) s += "-";
    std::string mono = i == 0 ? "" : (i == 1 ? "q" : "q^" + std::to_string(i));
    if (mono.empty()) s += c.get_str();
    else s += (c == 1 ? "" : c.get_str() + "*") + mono;
  }
  return s;
}

FibreCount fibre_count(const CoverSpec& spec, const RankTriangle& S) {
  std::lock_guard<std::recursive_mutex> lock(count_mutex());
  if (S.mults() != spec.mults()) throw precondition("MultsMismatch", "stratum and cover have different mults");
  FibreCount out;
  if (!multiseg::closure_leq(S, spec.base)) return out;
  const int n = spec.base.n();

  std::map<std::vector<int>, CountPoly> states{{{}, CountPoly{1}}};
  for (int v = 0; v <= n; ++v) {
    const int m = S.m(v);
    const int ell = n - v;
    std::vector<int> kappa;
    for (int k = 1; k <= ell; ++k) kappa.push_back(m - S.r(v + k, v + 1));
    const std::vector<int> dims = spec.dims_at(v);
    const std::vector<int> srcs = v >= 1 ? sources_of(spec, v) : std::vector<int>{};
    // Largest source forced into each retained subspace.
    std::vector<int> req_src(dims.size(), -1);
    for (const auto& c : spec.conditions)
      if (c.map == v && c.tgt > 0) {
        auto b = std::find(dims.begin(), dims.end(), c.tgt) - dims.begin();
        int a = static_cast<int>(std::find(srcs.begin(), srcs.end(), c.src) - srcs.begin());
        req_src[b] = std::max(req_src[b], a);
      }
    const std::vector<int> next_srcs = v < n ? sources_of(spec, v + 1) : std::vector<int>{};

    std::map<std::vector<int>, CountPoly> next;
    for (const auto& [itype, poly] : states) {
      auto masks = image_masks(m, kappa, itype, static_cast<int>(srcs.size()));
      std::vector<std::uint32_t> req(dims.size(), 0);
      for (std::size_t b = 0; b < dims.size(); ++b)
        if (req_src[b] >= 0) req[b] = masks[req_src[b]];
      const TypeCounts& trans = transition(m, kappa, dims, req);
      for (const auto& [ttype, c] : trans) {
        std::vector<int> nt;
        bool ok = true;
        for (int s : next_srcs) {
          int D;
          std::vector<int> dk;
          if (s == m) {
            D = S.r(v + 1, v + 1);
            for (int k = 1; k < ell; ++k) dk.push_back(D - S.r(v + 1 + k, v + 1));
          } else {
            auto b = std::find(dims.begin(), dims.end(), s) - dims.begin();
            const int* row = &ttype[b * ell];
            D = s - row[0];
            for (int k = 1; k < ell; ++k) dk.push_back(row[k] - row[0]);
          }
          if (D > 0 && zero_target(spec, v + 1, s)) {
            ok = false;
            break;
          }
          nt.push_back(D);
          nt.insert(nt.end(), dk.begin(), dk.end());
        }
        if (!ok) continue;
        auto& dst = next[nt];
        dst = add(dst, mul(poly, c));
      }
    }
    states = std::move(next);
  }
  CountPoly total;
  for (const auto& [t, p] : states) total = add(total, p);
  out.poly = total;
  out.dimension = total.empty() ? -1 : static_cast<int>(total.size()) - 1;
  out.leading = total.empty() ? Int(0) : total.back();
  return out;
}

int fibre_dim_via_counts(const CoverSpec& spec, const RankTriangle& stratum) {
  return fibre_count(spec, stratum).dimension;
}

namespace {

std::vector<Vec> reduce_matrix(const QMatrix& a, const detail::Field& f) {
  std::vector<Vec> rows(a.rows(), Vec(a.cols(), 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Rat& r = a(i, j);
      Int den = r.get_den();
      if (den % f.p() == 0) throw precondition("BadReduction", "entry does not reduce mod " + std::to_string(f.p()));
      Int num = r.get_num() % f.p();
      Int dr = den % f.p();
      detail::Elem n = f.from_int(num.get_si()), d = f.from_int(dr.get_si());
      rows[i][j] = f.mul(n, f.inv(d));
    }
  return rows;
}

}  // namespace

Int point_count_at(const CoverSpec& spec, const QuiverPoint& x, int q, std::uint64_t budget) {
  std::lock_guard<std::recursive_mutex> lock(count_mutex());
  if (x.mults != spec.mults()) throw precondition("MultsMismatch", "point and cover have different mults");
  if (!detail::is_prime_power(q) || q > 32) throw precondition("BadField", "q must be a prime power <= 32");
  auto fld = detail::field(q);
  const int n = spec.base.n();
  std::vector<std::vector<Vec>> maps;
  for (int i = 1; i <= n; ++i) maps.push_back(reduce_matrix(x.x(i), *fld));

  std::uint64_t work = 0;
  std::map<std::vector<int>, Int> states{{{}, Int(1)}};
  for (int v = 0; v <= n; ++v) {
    const int m = spec.base.m(v);
    Lattice& lat = detail::lattice(q, m);
    const std::vector<int> dims = spec.dims_at(v);
    const std::vector<int> srcs = v >= 1 ? sources_of(spec, v) : std::vector<int>{};
    const std::vector<int> next_srcs = v < n ? sources_of(spec, v + 1) : std::vector<int>{};
    Lattice* tgt = v < n ? &detail::lattice(q, spec.base.m(v + 1)) : nullptr;
    std::map<std::vector<int>, Int> next;
    for (const auto& [images, cnt] : states) {
      std::vector<int> lower(dims.size(), lat.zero());
      for (const auto& c : spec.conditions)
        if (c.map == v && c.tgt > 0) {
          auto b = std::find(dims.begin(), dims.end(), c.tgt) - dims.begin();
          int a = static_cast<int>(std::find(srcs.begin(), srcs.end(), c.src) - srcs.begin());
          lower[b] = lat.sum(lower[b], images[a]);
        }
      std::vector<int> flag(dims.size());
      std::function<void(std::size_t, int)> rec = [&](std::size_t b, int prev) {
        if (b == dims.size()) {
          if (++work > budget) throw Error(ErrorKind::Budget, "CountOverflowBudget", "flag enumeration budget exceeded");
          std::vector<int> img;
          for (int s : next_srcs) {
            int src = s == m ? lat.full() : flag[std::find(dims.begin(), dims.end(), s) - dims.begin()];
            int id = lat.image(src, maps[v], *tgt);
            if (tgt->dim(id) > 0 && zero_target(spec, v + 1, s)) return;
            img.push_back(id);
          }
          next[img] += cnt;
          return;
        }
        for (int w : lat.supersets(lat.sum(prev, lower[b]), dims[b])) {
          flag[b] = w;
          rec(b + 1, w);
        }
      };
      rec(0, lat.zero());
    }
    states = std::move(next);
  }
  Int total = 0;
  for (const auto& [k, c] : states) total += c;
  return total;
}

Int point_count_fibre(const CoverSpec& spec, const RankTriangle& stratum, int q, std::uint64_t budget) {
  return point_count_at(spec, vogan::representative(stratum), q, budget);
}

std::vector<RankTriangle> SemismallReport::relevant() const {
  std::vector<RankTriangle> r;
  for (const auto& s : strata)
    if (s.relevant) r.push_back(s.stratum);
  return r;
}

SemismallReport semismall_report(const CoverSpec& spec, const RankTriangle& base) {
  SemismallReport rep;
  rep.cover_dim = vogan::orbit_dim(base);
  for (const auto& t : multiseg::enumerate_orbits(spec.mults())) {
    if (!multiseg::closure_leq(t, base)) continue;
    StratumReport s;
    s.stratum = t;
    s.orbit_dim = vogan::orbit_dim(t);
    FibreCount fc = fibre_count(spec, t);
    s.fibre_dim = fc.dimension;
    s.top_components = fc.leading;
    int lhs = 2 * s.fibre_dim + s.orbit_dim;
    s.relevant = fc.dimension >= 0 && lhs == rep.cover_dim;
    s.violation = lhs > rep.cover_dim;
    if (s.violation) rep.semismall = false;
    if (s.relevant && !(t == base)) rep.small = false;
    rep.strata.push_back(std::move(s));
  }
  return rep;
}

}  // namespace voganish::cover
