#pragma once

#include "voganish/exactcore/matrix.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

namespace voganish::exactcore {

template <class F>
struct Rref {
  Matrix<F> m;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form over a field (Rat or RatFunc).
template <class F>
Rref<F> rref(Matrix<F> m) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    for (std::size_t i = r; i < m.rows(); ++i)
      if (!coeff_is_zero(m(i, c)) && (best == m.rows() || complexity(m(i, c)) < complexity(m(best, c)))) best = i;
    if (best == m.rows()) continue;
    m.swap_rows(r, best);
    F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!coeff_is_zero(m(r, j))) m(r, j) = m(r, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || coeff_is_zero(m(i, c))) continue;
      F f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!coeff_is_zero(m(r, j))) m(i, j) = m(i, j) - f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(piv)};
}

// Basis of the right kernel {v : M v = 0}, one vector per free column.
template <class F>
std::vector<std::vector<F>> kernel_basis(const Matrix<F>& m) {
  auto [r, piv] = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<F> v(m.cols(), F(0));
    v[f] = F(1);
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -r(k, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves A X = B; nullopt if inconsistent. Free variables are set to zero.
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
  Matrix<F> aug(a.rows(), a.cols() + b.cols());
  aug.set_block(0, 0, a);
  aug.set_block(0, a.cols(), b);
  auto [r, piv] = rref(aug);
  Matrix<F> x(a.cols(), b.cols());
  for (std::size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(piv[k], j) = r(k, a.cols() + j);
  }
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  auto [r, piv] = rref(a);
  if (piv.size() != a.rows()) return std::nullopt;
  return solve(a, Matrix<F>::identity(a.rows()));
}

std::size_t rank(const QMatrix& m);
std::size_t rank(const PolyMatrix& m);
std::size_t rank(const RMatrix& m);

Rat determinant(const QMatrix& m);
QPoly determinant(const PolyMatrix& m);
RatFunc determinant(const RMatrix& m);

// Clears denominators row by row (rank-preserving).
PolyMatrix clear_denominators(const RMatrix& m);

// All k x k minors in lexicographic (row subset, column subset) order.
void for_each_minor(const PolyMatrix& m, std::size_t k,
                    const std::function<void(const std::vector<std::size_t>&, const std::vector<std::size_t>&,
                                             const QPoly&)>& visit);
std::vector<QPoly> minors(const PolyMatrix& m, std::size_t k);

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k);

// Evaluates every entry with values[var] (values must cover all occurring variables).
QMatrix evaluate(const PolyMatrix& m, const std::vector<Rat>& values);
QMatrix evaluate(const RPolyMatrix& m, const std::vector<Rat>& values);
QMatrix evaluate(const RMatrix& m, const std::vector<Rat>& values);

struct GenericRank {
  std::size_t rank = 0;
  std::vector<std::size_t> sample_ranks;
  bool disagreement = false;
  std::uint64_t seed = 0;
};

// Monte Carlo rank over the fraction field: max over k integer points in [-range, range].
GenericRank generic_rank(const PolyMatrix& m, std::size_t nvars, std::uint64_t seed, int k = 3, int range = 100);
GenericRank generic_rank(const RPolyMatrix& m, std::size_t nvars, std::uint64_t seed, int k = 3, int range = 100);

// Deterministic fallback: fraction-free elimination over Q[vars]; limited to 30 x 30.
std::size_t symbolic_rank(const PolyMatrix& m);

std::vector<Rat> random_point(std::size_t nvars, std::mt19937_64& rng, int range);

}  // namespace voganish::exactcore
