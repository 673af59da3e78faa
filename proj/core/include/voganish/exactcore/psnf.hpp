#pragma once

#include "voganish/exactcore/matrix.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

namespace voganish::exactcore {

enum class PsnfOpKind { RowSwap, ColSwap, RowScale, RowAddMul, ColAddMul };

// RowScale: row a *= f.  RowAddMul: row a += f * row b.  ColAddMul: col a += f * col b.
template <class C>
struct PsnfOp {
  PsnfOpKind kind;
  std::size_t a;
  std::size_t b;
  Poly<C> f;
};

template <class C>
struct PsnfResult {
  std::vector<PsnfOp<C>> log;
  std::size_t identity_size = 0;
  Matrix<Poly<C>> residual;
  std::vector<C> pivot_units;
};

// Ranks a unit coefficient for pivoting: smaller is preferred, negative forbids it.
template <class C>
using UnitRank = std::function<int(const C&)>;

inline int default_unit_rank(const Rat&) { return 0; }
inline int default_unit_rank(const RatFunc& c) { return c.is_constant() ? 0 : 1; }

namespace detail {

template <class C>
using SparseRow = std::vector<std::pair<std::size_t, Poly<C>>>;

template <class C>
const Poly<C>* find_entry(const SparseRow<C>& row, std::size_t c) {
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t k) { return e.first < k; });
  return (it != row.end() && it->first == c) ? &it->second : nullptr;
}

// row a += f * row b
template <class C>
SparseRow<C> axpy(const SparseRow<C>& a, const Poly<C>& f, const SparseRow<C>& b) {
  SparseRow<C> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      Poly<C> v = f * b[j].second;
      if (!v.is_zero()) out.emplace_back(b[j].first, std::move(v));
      ++j;
    } else {
      Poly<C> v = a[i].second + f * b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace detail

// Partial Smith normal form: unit-pivot elimination to block-diag(I_s, B).
// Pivot order: best unit rank, then minimal row degree sum, then fewest row terms, then row-major position.
template <class C>
PsnfResult<C> psnf(const Matrix<Poly<C>>& m, UnitRank<C> unit_rank = nullptr) {
  if (!unit_rank) unit_rank = [](const C& c) { return default_unit_rank(c); };
  const std::size_t nr = m.rows(), nc = m.cols();
  std::vector<detail::SparseRow<C>> rows(nr);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      if (!m(i, j).is_zero()) rows[i].emplace_back(j, m(i, j));

  PsnfResult<C> res;
  std::vector<bool> row_done(nr, false), col_done(nc, false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;

  for (;;) {
    using Key = std::tuple<int, std::size_t, std::size_t, std::size_t, std::size_t>;
    Key best{std::numeric_limits<int>::max(), 0, 0, 0, 0};
    bool found = false;
    for (std::size_t i = 0; i < nr; ++i) {
      if (row_done[i]) continue;
      std::size_t deg = 0, terms = 0;
      bool have_unit = false;
      for (const auto& [c, p] : rows[i]) {
        if (col_done[c]) continue;
        deg += p.total_degree();
        terms += p.nterms();
        if (p.is_constant()) have_unit = true;
      }
      if (!have_unit) continue;
      for (const auto& [c, p] : rows[i]) {
        if (col_done[c] || !p.is_constant()) continue;
        int ur = unit_rank(p.constant_term());
        if (ur < 0) continue;
        Key k{ur, deg, terms, i, c};
        if (!found || k < best) {
          best = k;
          found = true;
        }
      }
    }
    if (!found) break;
    const std::size_t p = std::get<3>(best), q = std::get<4>(best);
    C u = detail::find_entry(rows[p], q)->constant_term();
    res.pivot_units.push_back(u);
    if (!(u == C(1))) {
      Poly<C> inv = Poly<C>(C(1) / u);
      for (auto& e : rows[p]) e.second = e.second * inv;
      res.log.push_back({PsnfOpKind::RowScale, p, p, inv});
    }
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == p) continue;
      const Poly<C>* e = detail::find_entry(rows[i], q);
      if (!e) continue;
      Poly<C> f = -*e;
      rows[i] = detail::axpy(rows[i], f, rows[p]);
      res.log.push_back({PsnfOpKind::RowAddMul, i, p, std::move(f)});
    }
    for (const auto& [c, v] : rows[p]) {
      if (c == q) continue;
      res.log.push_back({PsnfOpKind::ColAddMul, c, q, -v});
    }
    rows[p] = {{q, Poly<C>(C(1))}};
    row_done[p] = col_done[q] = true;
    pivots.emplace_back(p, q);
  }

  // Move pivots to the leading diagonal.
  std::vector<std::size_t> row_at(nr), col_at(nc);
  for (std::size_t i = 0; i < nr; ++i) row_at[i] = i;
  for (std::size_t j = 0; j < nc; ++j) col_at[j] = j;
  std::vector<std::size_t> row_where = row_at, col_where = col_at;
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    std::size_t pr = row_where[pivots[k].first];
    if (pr != k) {
      res.log.push_back({PsnfOpKind::RowSwap, k, pr, Poly<C>()});
      std::swap(row_at[k], row_at[pr]);
      row_where[row_at[k]] = k;
      row_where[row_at[pr]] = pr;
    }
    std::size_t pc = col_where[pivots[k].second];
    if (pc != k) {
      res.log.push_back({PsnfOpKind::ColSwap, k, pc, Poly<C>()});
      std::swap(col_at[k], col_at[pc]);
      col_where[col_at[k]] = k;
      col_where[col_at[pc]] = pc;
    }
  }
  const std::size_t s = pivots.size();
  res.identity_size = s;
  res.residual = Matrix<Poly<C>>(nr - s, nc - s);
  for (std::size_t i = s; i < nr; ++i)
    for (const auto& [c, v] : rows[row_at[i]]) {
      std::size_t j = col_where[c];
      if (j >= s) res.residual(i - s, j - s) = v;
    }
  return res;
}

// Applies a logged operation sequence to a dense matrix.
template <class C>
Matrix<Poly<C>> replay(Matrix<Poly<C>> m, const std::vector<PsnfOp<C>>& log) {
  for (const auto& op : log) {
    switch (op.kind) {
      case PsnfOpKind::RowSwap:
        m.swap_rows(op.a, op.b);
        break;
      case PsnfOpKind::ColSwap:
        for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, op.a), m(i, op.b));
        break;
      case PsnfOpKind::RowScale:
        for (std::size_t j = 0; j < m.cols(); ++j) m(op.a, j) = m(op.a, j) * op.f;
        break;
      case PsnfOpKind::RowAddMul:
        for (std::size_t j = 0; j < m.cols(); ++j)
          if (!m(op.b, j).is_zero()) m(op.a, j) = m(op.a, j) + op.f * m(op.b, j);
        break;
      case PsnfOpKind::ColAddMul:
        for (std::size_t i = 0; i < m.rows(); ++i)
          if (!m(i, op.b).is_zero()) m(i, op.a) = m(i, op.a) + op.f * m(i, op.b);
        break;
    }
  }
  return m;
}

// True iff m equals block-diag(I_s, residual).
template <class C>
bool is_psnf_form(const Matrix<Poly<C>>& m, std::size_t s, const Matrix<Poly<C>>& residual) {
  if (m.rows() != s + residual.rows() || m.cols() != s + residual.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Poly<C> want;
      if (i < s || j < s)
        want = (i == j) ? Poly<C>(C(1)) : Poly<C>();
      else
        want = residual(i - s, j - s);
      if (m(i, j) != want) return false;
    }
  return true;
}

}  // namespace voganish::exactcore
