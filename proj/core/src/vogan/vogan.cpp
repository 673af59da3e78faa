#include "voganish/vogan/vogan.hpp"

#include <algorithm>
#include <random>

namespace voganish::vogan {

using exactcore::VarRegistry;

int VoganSpace::dim_V() const {
  int d = 0;
  for (int i = 1; i <= n(); ++i) d += mults[i] * mults[i - 1];
  return d;
}

int VoganSpace::dim_H() const {
  int d = 0;
  for (int m : mults) d += m * m;
  return d;
}

int VoganSpace::total() const {
  int d = 0;
  for (int m : mults) d += m;
  return d;
}

QuiverPoint point_from_coords(const std::vector<int>& mults, const std::vector<Rat>& v) {
  QuiverPoint x = zero_point<Rat>(mults);
  std::size_t k = 0;
  for (auto& m : x.maps)
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = v.at(k++);
  return x;
}

DualPoint dual_from_coords(const std::vector<int>& mults, const std::vector<Rat>& v) {
  DualPoint y = zero_dual<Rat>(mults);
  std::size_t k = 0;
  for (auto& m : y.maps)
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = v.at(k++);
  return y;
}

std::string x_var_name(int i, int r, int c) {
  return "x[" + std::to_string(i) + "]." + std::to_string(r) + "." + std::to_string(c);
}
std::string y_var_name(int i, int r, int c) {
  return "y[" + std::to_string(i) + "]." + std::to_string(r) + "." + std::to_string(c);
}

QuiverPointT<QPoly> symbolic_point(const std::vector<int>& mults, VarRegistry& reg) {
  auto x = zero_point<QPoly>(mults);
  for (int i = 1; i <= x.n(); ++i)
    for (std::size_t r = 0; r < x.x(i).rows(); ++r)
      for (std::size_t c = 0; c < x.x(i).cols(); ++c)
        x.x(i)(r, c) = QPoly::variable(reg.intern(x_var_name(i, static_cast<int>(r), static_cast<int>(c))));
  return x;
}

DualPointT<QPoly> symbolic_dual(const std::vector<int>& mults, VarRegistry& reg) {
  auto y = zero_dual<QPoly>(mults);
  for (int i = 1; i <= y.n(); ++i)
    for (std::size_t r = 0; r < y.y(i).rows(); ++r)
      for (std::size_t c = 0; c < y.y(i).cols(); ++c)
        y.y(i)(r, c) = QPoly::variable(reg.intern(y_var_name(i, static_cast<int>(r), static_cast<int>(c))));
  return y;
}

QuiverPoint representative(const RankTriangle& t) {
  auto m = multiseg::multisegment_from_triangle(t);
  QuiverPoint x = zero_point<Rat>(t.mults());
  std::vector<int> next(t.mults().size(), 0);
  for (const auto& [s, c] : m.segments())
    for (int k = 0; k < c; ++k) {
      std::vector<int> idx(t.mults().size(), -1);
      for (int v = s.p; v <= s.q; ++v) idx[v] = next[v]++;
      for (int i = s.p + 1; i <= s.q; ++i) x.x(i)(idx[i], idx[i - 1]) = 1;
    }
  return x;
}

RankTriangle rank_triangle_of(const QuiverPoint& x) {
  RankTriangle t(x.mults);
  for (int j = 1; j <= x.n(); ++j) {
    QMatrix p = x.x(j);
    t.set(j, j, static_cast<int>(exactcore::rank(p)));
    for (int i = j + 1; i <= x.n(); ++i) {
      p = x.x(i) * p;
      t.set(i, j, static_cast<int>(exactcore::rank(p)));
    }
  }
  return t;
}

RankTriangle rank_triangle_of(const DualPoint& y) {
  RankTriangle t(y.mults);
  for (int i = 1; i <= y.n(); ++i) {
    QMatrix p = y.y(i);
    t.set(i, i, static_cast<int>(exactcore::rank(p)));
    for (int j = i - 1; j >= 1; --j) {
      p = y.y(j) * p;
      t.set(i, j, static_cast<int>(exactcore::rank(p)));
    }
  }
  return t;
}

namespace {

std::vector<std::size_t> h_offsets(const std::vector<int>& mults) {
  std::vector<std::size_t> off(mults.size() + 1, 0);
  for (std::size_t v = 0; v < mults.size(); ++v) off[v + 1] = off[v] + mults[v] * mults[v];
  return off;
}

std::vector<std::size_t> map_offsets(const std::vector<int>& mults) {
  std::vector<std::size_t> off(mults.size(), 0);
  for (std::size_t i = 1; i < mults.size(); ++i) off[i] = off[i - 1] + mults[i] * mults[i - 1];
  return off;
}

}  // namespace

QMatrix tangent_map(const QuiverPoint& x) {
  VoganSpace sp{x.mults};
  auto hoff = h_offsets(x.mults);
  auto moff = map_offsets(x.mults);
  QMatrix t(sp.dim_V(), sp.dim_H());
  for (int i = 1; i <= x.n(); ++i) {
    const auto& xi = x.x(i);
    const std::size_t R = xi.rows(), C = xi.cols();
    auto row = [&](std::size_t r, std::size_t c) { return moff[i - 1] + r * C + c; };
    // h_i x_i: basis E_ab at vertex i sends row b of x_i to row a.
    for (std::size_t a = 0; a < R; ++a)
      for (std::size_t b = 0; b < R; ++b)
        for (std::size_t c = 0; c < C; ++c)
          if (!exactcore::is_zero(xi(b, c))) t(row(a, c), hoff[i] + a * R + b) += xi(b, c);
    // -x_i h_{i-1}: basis E_ab at vertex i-1 sends column a of x_i to column b.
    for (std::size_t a = 0; a < C; ++a)
      for (std::size_t b = 0; b < C; ++b)
        for (std::size_t r = 0; r < R; ++r)
          if (!exactcore::is_zero(xi(r, a))) t(row(r, b), hoff[i - 1] + a * C + b) -= xi(r, a);
  }
  return t;
}

QMatrix tangent_map(const DualPoint& y) {
  VoganSpace sp{y.mults};
  auto hoff = h_offsets(y.mults);
  auto moff = map_offsets(y.mults);
  QMatrix t(sp.dim_V(), sp.dim_H());
  for (int i = 1; i <= y.n(); ++i) {
    const auto& yi = y.y(i);
    const std::size_t R = yi.rows(), C = yi.cols();
    auto row = [&](std::size_t r, std::size_t c) { return moff[i - 1] + r * C + c; };
    // h_{i-1} y_i
    for (std::size_t a = 0; a < R; ++a)
      for (std::size_t b = 0; b < R; ++b)
        for (std::size_t c = 0; c < C; ++c)
          if (!exactcore::is_zero(yi(b, c))) t(row(a, c), hoff[i - 1] + a * R + b) += yi(b, c);
    // -y_i h_i
    for (std::size_t a = 0; a < C; ++a)
      for (std::size_t b = 0; b < C; ++b)
        for (std::size_t r = 0; r < R; ++r)
          if (!exactcore::is_zero(yi(r, a))) t(row(r, b), hoff[i] + a * C + b) -= yi(r, a);
  }
  return t;
}

namespace {

QMatrix bracket_matrix(const QuiverPoint& x) {
  VoganSpace sp{x.mults};
  const int dv = sp.dim_V();
  QMatrix m(sp.dim_H(), dv);
  std::vector<Rat> unit(dv, 0);
  for (int k = 0; k < dv; ++k) {
    unit[k] = 1;
    auto h = bracket(x, dual_from_coords(x.mults, unit));
    unit[k] = 0;
    std::size_t r = 0;
    for (const auto& blk : h.h)
      for (std::size_t a = 0; a < blk.rows(); ++a)
        for (std::size_t b = 0; b < blk.cols(); ++b) m(r++, k) = blk(a, b);
  }
  return m;
}

}  // namespace

std::vector<DualPoint> conormal_fiber(const QuiverPoint& x) {
  std::vector<DualPoint> out;
  for (const auto& v : exactcore::kernel_basis(bracket_matrix(x))) out.push_back(dual_from_coords(x.mults, v));
  return out;
}

std::size_t conormal_dim(const QuiverPoint& x) {
  VoganSpace sp{x.mults};
  return sp.dim_V() - exactcore::rank(bracket_matrix(x));
}

int stabilizer_dim(const QuiverPoint& x) {
  VoganSpace sp{x.mults};
  return sp.dim_H() - static_cast<int>(exactcore::rank(tangent_map(x)));
}

int pair_stabilizer_dim(const QuiverPoint& x, const DualPoint& y) {
  VoganSpace sp{x.mults};
  QMatrix a = tangent_map(x), b = tangent_map(y);
  QMatrix s(a.rows() + b.rows(), a.cols());
  s.set_block(0, 0, a);
  s.set_block(a.rows(), 0, b);
  return sp.dim_H() - static_cast<int>(exactcore::rank(s));
}

int orbit_dim(const RankTriangle& t) {
  VoganSpace sp{t.mults()};
  return sp.dim_H() - stabilizer_dim(representative(t));
}

DualResult compute_dual_detailed(const RankTriangle& t, std::uint64_t seed, int samples, int range) {
  auto basis = conormal_fiber(representative(t));
  std::mt19937_64 rng(seed);
  const VoganSpace sp{t.mults()};
  for (int attempt = 0; attempt < 6; ++attempt, range *= 4) {
    DualResult res{RankTriangle(t.mults()), {}, seed, range};
    std::uniform_int_distribution<int> dist(-range, range);
    for (int s = 0; s < samples; ++s) {
      std::vector<Rat> coords(sp.dim_V(), 0);
      for (const auto& b : basis) {
        Rat c = dist(rng);
        auto bv = flatten(b);
        for (std::size_t k = 0; k < coords.size(); ++k)
          if (!exactcore::is_zero(bv[k])) coords[k] += c * bv[k];
      }
      res.samples.push_back(rank_triangle_of(dual_from_coords(t.mults(), coords)));
    }
    RankTriangle mx = res.samples.front();
    for (const auto& s : res.samples)
      for (int i = 1; i <= mx.n(); ++i)
        for (int j = 1; j <= i; ++j) mx.set(i, j, std::max(mx.r(i, j), s.r(i, j)));
    if (std::find(res.samples.begin(), res.samples.end(), mx) != res.samples.end()) {
      res.dual = mx;
      return res;
    }
  }
  throw Error(ErrorKind::Check, "GenericityFailure", "conormal samples never attained a common maximum");
}

RankTriangle compute_dual(const RankTriangle& t, std::uint64_t seed) { return compute_dual_detailed(t, seed).dual; }

namespace {

template <class P>
void active_products(const RankTriangle& bound, const P& pt, const std::function<void(int, int, const Matrix<QPoly>&)>& f) {
  const auto open = multiseg::open_orbit(bound.mults());
  for (int i = 1; i <= bound.n(); ++i)
    for (int j = 1; j <= i; ++j) {
      int r = bound.r(i, j);
      if (r >= open.r(i, j)) continue;
      f(i, j, product(pt, i, j));
    }
}

}  // namespace

std::vector<QPoly> closure_ideal(const RankTriangle& bound, Side side, VarRegistry& reg) {
  std::vector<QPoly> gens;
  auto emit = [&](int i, int j, const Matrix<QPoly>& p) {
    std::size_t k = static_cast<std::size_t>(bound.r(i, j)) + 1;
    exactcore::for_each_minor(p, k, [&](const auto&, const auto&, const QPoly& d) {
      if (!d.is_zero()) gens.push_back(d);
    });
  };
  if (side == Side::V)
    active_products(bound, symbolic_point(bound.mults(), reg), emit);
  else
    active_products(bound, symbolic_dual(bound.mults(), reg), emit);
  return gens;
}

std::size_t closure_ideal_size(const RankTriangle& bound) {
  auto binom = [](int n, int k) {
    if (k < 0 || k > n) return std::size_t{0};
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  const auto open = multiseg::open_orbit(bound.mults());
  std::size_t total = 0;
  for (int i = 1; i <= bound.n(); ++i)
    for (int j = 1; j <= i; ++j)
      if (bound.r(i, j) < open.r(i, j))
        total += binom(bound.m(i), bound.r(i, j) + 1) * binom(bound.m(j - 1), bound.r(i, j) + 1);
  return total;
}

std::vector<int> jordan_partition(const QuiverPoint& x) {
  VoganSpace sp{x.mults};
  const int S = sp.total();
  std::vector<int> off(x.mults.size(), 0);
  for (std::size_t v = 1; v < x.mults.size(); ++v) off[v] = off[v - 1] + x.mults[v - 1];
  QMatrix N(S, S);
  for (int i = 1; i <= x.n(); ++i) N.set_block(off[i], off[i - 1], x.x(i));
  std::vector<int> ranks{S};
  QMatrix P = QMatrix::identity(S);
  while (ranks.back() > 0) {
    P = N * P;
    ranks.push_back(static_cast<int>(exactcore::rank(P)));
  }
  // at_least[k] = number of blocks of size >= k.
  std::vector<int> parts;
  for (std::size_t k = 1; k < ranks.size(); ++k) {
    int at_least = ranks[k - 1] - ranks[k];
    int next = k + 1 < ranks.size() ? ranks[k] - ranks[k + 1] : 0;
    for (int c = 0; c < at_least - next; ++c) parts.push_back(static_cast<int>(k));
  }
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

QuiverPoint x_ks() {
  QuiverPoint x = zero_point<Rat>({2, 4, 4, 4, 2});
  QMatrix one = QMatrix::identity(2);
  x.x(4).set_block(0, 2, one);
  x.x(3).set_block(0, 0, one);
  x.x(2).set_block(0, 2, one);
  x.x(1).set_block(0, 0, one);
  return x;
}

HElement stab_element(const QMatrix& h0, const QMatrix& h4, const QMatrix& k1, const QMatrix& k2, const QMatrix& u,
                      const QMatrix& v) {
  HElement h{{2, 4, 4, 4, 2}, {}};
  QMatrix h1(4, 4), h2(4, 4), h3(4, 4);
  h1.set_block(0, 0, h0);
  h1.set_block(0, 2, u);
  h1.set_block(2, 2, k1);
  h2.set_block(0, 0, k1);
  h2.set_block(2, 2, k2);
  h3.set_block(0, 0, k1);
  h3.set_block(0, 2, v);
  h3.set_block(2, 2, h4);
  h.h = {h0, h1, h2, h3, h4};
  return h;
}

namespace {

QMatrix inv(const QMatrix& m) {
  auto r = exactcore::inverse(m);
  if (!r) throw precondition("SingularBlock", "group element has a singular block");
  return *r;
}

}  // namespace

QuiverPoint act(const HElement& h, const QuiverPoint& x) {
  QuiverPoint out = x;
  for (int i = 1; i <= x.n(); ++i) out.x(i) = h.h[i] * x.x(i) * inv(h.h[i - 1]);
  return out;
}

DualPoint act(const HElement& h, const DualPoint& y) {
  DualPoint out = y;
  for (int i = 1; i <= y.n(); ++i) out.y(i) = h.h[i - 1] * y.y(i) * inv(h.h[i]);
  return out;
}

std::pair<Rat, Rat> q_invariant(const DualPoint& y) {
  if (y.mults != std::vector<int>{2, 4, 4, 4, 2}) throw precondition("NotSliceForm", "expects mults (2,4,4,4,2)");
  QMatrix a = y.y(1).block(0, 2, 2, 2), b = y.y(2).block(0, 2, 2, 2);
  QMatrix c = y.y(3).block(0, 2, 2, 2), d = y.y(3).block(2, 2, 2, 2);
  if (!(y_ks(a, b, c, d).maps == y.maps)) throw precondition("NotSliceForm", "point is not of the form y_KS(a,b,c,d)");
  auto ac = exactcore::inverse(QMatrix(a * c));
  if (!ac || exactcore::rank(c) < 2) throw precondition("SingularBlock", "a or c is not invertible");
  QMatrix q = *ac * (b * d);
  return {q(0, 0) + q(1, 1), exactcore::determinant(q)};
}

}  // namespace voganish::vogan
