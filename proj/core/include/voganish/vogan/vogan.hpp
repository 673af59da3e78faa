#pragma once

#include "voganish/exactcore/linalg.hpp"
#include "voganish/multiseg/multiseg.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace voganish::vogan {

using exactcore::Matrix;
using exactcore::QMatrix;
using exactcore::QPoly;
using exactcore::Rat;
using multiseg::RankTriangle;

struct VoganSpace {
  std::vector<int> mults;

  int n() const { return static_cast<int>(mults.size()) - 1; }
  int dim_V() const;
  int dim_H() const;
  int total() const;  // sum of multiplicities
};

// x_i : E_{i-1} -> E_i is an m_i x m_{i-1} matrix, stored at maps[i-1].
template <class E>
struct QuiverPointT {
  std::vector<int> mults;
  std::vector<Matrix<E>> maps;

  int n() const { return static_cast<int>(mults.size()) - 1; }
  const Matrix<E>& x(int i) const { return maps.at(i - 1); }
  Matrix<E>& x(int i) { return maps.at(i - 1); }
};

// y_i : E_i -> E_{i-1} is an m_{i-1} x m_i matrix, stored at maps[i-1].
template <class E>
struct DualPointT {
  std::vector<int> mults;
  std::vector<Matrix<E>> maps;

  int n() const { return static_cast<int>(mults.size()) - 1; }
  const Matrix<E>& y(int i) const { return maps.at(i - 1); }
  Matrix<E>& y(int i) { return maps.at(i - 1); }
};

// One square block per vertex, h[v] of size m_v.
template <class E>
struct HElementT {
  std::vector<int> mults;
  std::vector<Matrix<E>> h;
};

using QuiverPoint = QuiverPointT<Rat>;
using DualPoint = DualPointT<Rat>;
using HElement = HElementT<Rat>;

template <class E>
QuiverPointT<E> zero_point(const std::vector<int>& mults) {
  QuiverPointT<E> x{mults, {}};
  for (int i = 1; i < static_cast<int>(mults.size()); ++i) x.maps.emplace_back(mults[i], mults[i - 1]);
  return x;
}

template <class E>
DualPointT<E> zero_dual(const std::vector<int>& mults) {
  DualPointT<E> y{mults, {}};
  for (int i = 1; i < static_cast<int>(mults.size()); ++i) y.maps.emplace_back(mults[i - 1], mults[i]);
  return y;
}

// Components x_v y_v - y_{v+1} x_{v+1} at each vertex v (missing terms are zero).
template <class E>
HElementT<E> bracket(const QuiverPointT<E>& x, const DualPointT<E>& y) {
  const int n = x.n();
  HElementT<E> out{x.mults, {}};
  for (int v = 0; v <= n; ++v) {
    Matrix<E> c(x.mults[v], x.mults[v]);
    if (v >= 1) c = c + x.x(v) * y.y(v);
    if (v + 1 <= n) c = c - y.y(v + 1) * x.x(v + 1);
    out.h.push_back(std::move(c));
  }
  return out;
}

// Trace form sum_i tr(x_i y_i).
template <class E>
E pairing(const QuiverPointT<E>& x, const DualPointT<E>& y) {
  E acc(0);
  for (int i = 1; i <= x.n(); ++i) {
    const auto& a = x.x(i);
    const auto& b = y.y(i);
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t k = 0; k < a.cols(); ++k)
        if (!exactcore::coeff_is_zero(a(r, k)) && !exactcore::coeff_is_zero(b(k, r))) acc = acc + a(r, k) * b(k, r);
  }
  return acc;
}

template <class E>
bool is_zero(const HElementT<E>& h) {
  for (const auto& m : h.h)
    if (!m.is_zero()) return false;
  return true;
}

// Products x_i x_{i-1} ... x_j (i >= j).
template <class E>
Matrix<E> product(const QuiverPointT<E>& x, int i, int j) {
  Matrix<E> p = x.x(j);
  for (int k = j + 1; k <= i; ++k) p = x.x(k) * p;
  return p;
}

// Products y_j y_{j+1} ... y_i (i >= j), a map E_i -> E_{j-1}.
template <class E>
Matrix<E> product(const DualPointT<E>& y, int i, int j) {
  Matrix<E> p = y.y(i);
  for (int k = i - 1; k >= j; --k) p = y.y(k) * p;
  return p;
}

// Coordinates in registry order: maps by index, then row-major.
template <class P>
auto flatten(const P& pt) {
  using E = std::decay_t<decltype(pt.maps[0](0, 0))>;
  std::vector<E> v;
  for (const auto& m : pt.maps)
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  return v;
}
QuiverPoint point_from_coords(const std::vector<int>& mults, const std::vector<Rat>& v);
DualPoint dual_from_coords(const std::vector<int>& mults, const std::vector<Rat>& v);

std::string x_var_name(int i, int r, int c);
std::string y_var_name(int i, int r, int c);
// Registers x[i].r.c (resp. y[i].r.c) and returns the symbolic point.
QuiverPointT<QPoly> symbolic_point(const std::vector<int>& mults, exactcore::VarRegistry& reg);
DualPointT<QPoly> symbolic_dual(const std::vector<int>& mults, exactcore::VarRegistry& reg);

QuiverPoint representative(const RankTriangle& t);
RankTriangle rank_triangle_of(const QuiverPoint& x);
// Triangle of the transposed dual point: r(i, j) = rank(y_j ... y_i).
RankTriangle rank_triangle_of(const DualPoint& y);

// Basis of {y : [x, y] = 0}.
std::vector<DualPoint> conormal_fiber(const QuiverPoint& x);
std::size_t conormal_dim(const QuiverPoint& x);
int stabilizer_dim(const QuiverPoint& x);
int pair_stabilizer_dim(const QuiverPoint& x, const DualPoint& y);
int orbit_dim(const RankTriangle& t);

struct DualResult {
  RankTriangle dual;
  std::vector<RankTriangle> samples;
  std::uint64_t seed = 0;
  int range = 50;
};

// Zelevinsky dual from generic conormal vectors; throws GenericityFailure.
DualResult compute_dual_detailed(const RankTriangle& t, std::uint64_t seed = 1, int samples = 3, int range = 50);
RankTriangle compute_dual(const RankTriangle& t, std::uint64_t seed = 1);

enum class Side { V, VDual };

// Determinantal generators: (r+1)-minors of every product whose rank bound is active.
std::vector<QPoly> closure_ideal(const RankTriangle& bound, Side side, exactcore::VarRegistry& reg);
// Independent recount of the generator total.
std::size_t closure_ideal_size(const RankTriangle& bound);

std::vector<int> jordan_partition(const QuiverPoint& x);

// The Kashiwara-Saito base point in mults (2,4,4,4,2).
QuiverPoint x_ks();
template <class E>
DualPointT<E> y_ks(const Matrix<E>& a, const Matrix<E>& b, const Matrix<E>& c, const Matrix<E>& d) {
  DualPointT<E> y = zero_dual<E>({2, 4, 4, 4, 2});
  y.y(1).set_block(0, 2, a);
  y.y(2).set_block(0, 0, a);
  y.y(2).set_block(0, 2, b);
  y.y(3).set_block(0, 2, c);
  y.y(3).set_block(2, 2, d);
  y.y(4).set_block(0, 0, c);
  return y;
}
// y_KS(1, [[t1, 1], [0, t2]], 1, 1).
template <class E>
DualPointT<E> y_ks_slice(const E& t1, const E& t2) {
  Matrix<E> one = Matrix<E>::identity(2);
  Matrix<E> b(2, 2);
  b(0, 0) = t1;
  b(0, 1) = E(1);
  b(1, 1) = t2;
  return y_ks(one, b, one, one);
}

// Element of Z_H(x_KS) built from its free blocks.
HElement stab_element(const QMatrix& h0, const QMatrix& h4, const QMatrix& k1, const QMatrix& k2, const QMatrix& u,
                      const QMatrix& v);
QuiverPoint act(const HElement& h, const QuiverPoint& x);
DualPoint act(const HElement& h, const DualPoint& y);
// (trace, det) of (ac)^{-1}(bd); throws SingularBlock.
std::pair<Rat, Rat> q_invariant(const DualPoint& y);

// Linear map h -> d/dt (exp(th).x) on Lie H, as a matrix dim V x dim H.
QMatrix tangent_map(const QuiverPoint& x);
QMatrix tangent_map(const DualPoint& y);

}  // namespace voganish::vogan
