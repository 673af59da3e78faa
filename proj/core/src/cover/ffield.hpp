#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace voganish::cover::detail {

using Elem = std::uint8_t;
using Vec = std::vector<Elem>;

// GF(q) by lookup tables, q = p^e <= 64.  Elements of GF(p^e) are base-p digit strings.
class Field {
 public:
  explicit Field(int q);
  int q() const { return q_; }
  int p() const { return p_; }
  Elem add(Elem a, Elem b) const { return add_[a * q_ + b]; }
  Elem mul(Elem a, Elem b) const { return mul_[a * q_ + b]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem from_int(long v) const;

 private:
  int q_, p_;
  std::vector<Elem> add_, mul_, neg_, inv_;
};

bool is_prime_power(int q);
std::shared_ptr<const Field> field(int q);

// Row-reduces in place and drops zero rows; returns pivot columns.
std::vector<int> rref(const Field& f, std::vector<Vec>& rows);

// All subspaces of F_q^m, each stored by its reduced basis.
class Lattice {
 public:
  Lattice(std::shared_ptr<const Field> f, int m);
  int m() const { return m_; }
  const Field& field() const { return *f_; }
  std::size_t size() const { return basis_.size(); }
  int dim(int id) const { return static_cast<int>(basis_[id].size()); }
  const std::vector<Vec>& basis(int id) const { return basis_[id]; }
  int zero() const { return 0; }
  int full() const { return static_cast<int>(basis_.size()) - 1; }
  int id_of(std::vector<Vec> rows) const;
  int coordinate(std::uint32_t mask) const;  // span of e_i, i in mask
  int sum(int a, int b) const;
  // Superspaces of a of dimension w.
  const std::vector<int>& supersets(int a, int w);
  // dim(T cap span(e_0 .. e_{kappa-1})).
  int meet_initial(int id, int kappa);
  // Image under an r x m matrix, as an id of target.
  int image(int id, const std::vector<Vec>& matrix, const Lattice& target) const;

 private:
  std::shared_ptr<const Field> f_;
  int m_;
  std::vector<std::vector<Vec>> basis_;
  std::unordered_map<std::string, int> index_;
  std::map<std::pair<int, int>, std::vector<int>> supersets_;
  std::map<int, std::vector<std::int8_t>> meets_;
};

// Shared lattices keyed by (q, m); not thread-safe.
Lattice& lattice(int q, int m);

}  // namespace voganish::cover::detail
