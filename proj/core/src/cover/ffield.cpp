#include "ffield.hpp"

#include "voganish/exactcore/errors.hpp"

#include <functional>

namespace voganish::cover::detail {

namespace {

std::pair<int, int> prime_power(int q) {
  if (q < 2) return {0, 0};
  int p = 2;
  while (q % p) ++p;
  int e = 0, r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  return r == 1 ? std::make_pair(p, e) : std::make_pair(0, 0);
}

using Digits = std::vector<int>;

Digits digits(int a, int p, int e) {
  Digits d(e);
  for (int i = 0; i < e; ++i, a /= p) d[i] = a % p;
  return d;
}

int value(const Digits& d, int p) {
  int v = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) v = v * p + d[i];
  return v;
}

// Monic irreducible of degree e over F_p, low coefficients first (without the leading 1).
Digits irreducible(int p, int e) {
  int total = 1;
  for (int i = 0; i < e; ++i) total *= p;
  for (int c = 0; c < total; ++c) {
    Digits low = digits(c, p, e);
    if (low[0] == 0) continue;
    // Irreducible iff no monic factor of degree 1..e/2; test by trial division.
    bool ok = true;
    for (int d = 1; d <= e / 2 && ok; ++d) {
      int cnt = 1;
      for (int i = 0; i < d; ++i) cnt *= p;
      for (int g = 0; g < cnt && ok; ++g) {
        Digits div = digits(g, p, d);
        div.push_back(1);
        Digits rem = low;
        rem.push_back(1);
        for (int k = e; k >= d; --k) {
          int coef = rem[k];
          if (!coef) continue;
          for (int j = 0; j <= d; ++j) rem[k - d + j] = ((rem[k - d + j] - coef * div[j]) % p + p) % p;
        }
        bool zero = true;
        for (int j = 0; j < d; ++j)
          if (rem[j]) zero = false;
        if (zero) ok = false;
      }
    }
    if (ok) return low;
  }
  throw precondition("BadField", "no irreducible polynomial found");
}

}  // namespace

bool is_prime_power(int q) { return prime_power(q).first != 0; }

Field::Field(int q) : q_(q) {
  auto [p, e] = prime_power(q);
  if (!p || q > 64) throw precondition("BadField", "q must be a prime power <= 64, got " + std::to_string(q));
  p_ = p;
  add_.resize(q * q);
  mul_.resize(q * q);
  neg_.resize(q);
  inv_.resize(q);
  Digits mod = e > 1 ? irreducible(p, e) : Digits{};
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      Digits da = digits(a, p, e), db = digits(b, p, e), s(e), prod(2 * e, 0);
      for (int i = 0; i < e; ++i) s[i] = (da[i] + db[i]) % p;
      for (int i = 0; i < e; ++i)
        for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      for (int k = 2 * e - 1; k >= e; --k) {
        int c = prod[k];
        if (!c) continue;
        prod[k] = 0;
        for (int j = 0; j < e; ++j) prod[k - e + j] = ((prod[k - e + j] - c * mod[j]) % p + p) % p;
      }
      prod.resize(e);
      add_[a * q + b] = static_cast<Elem>(value(s, p));
      mul_[a * q + b] = static_cast<Elem>(value(prod, p));
    }
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (add_[a * q + b] == 0) neg_[a] = static_cast<Elem>(b);
      if (mul_[a * q + b] == 1) inv_[a] = static_cast<Elem>(b);
    }
}

Elem Field::from_int(long v) const {
  long r = ((v % p_) + p_) % p_;
  return static_cast<Elem>(r);  // F_p sits in GF(q) as the constant digit
}

std::shared_ptr<const Field> field(int q) {
  static std::map<int, std::shared_ptr<const Field>> cache;
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const Field>(q);
  cache.emplace(q, f);
  return f;
}

std::vector<int> rref(const Field& f, std::vector<Vec>& rows) {
  std::vector<int> piv;
  if (rows.empty()) return piv;
  const int m = static_cast<int>(rows[0].size());
  std::size_t r = 0;
  for (int c = 0; c < m && r < rows.size(); ++c) {
    std::size_t best = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i][c]) {
        best = i;
        break;
      }
    if (best == rows.size()) continue;
    std::swap(rows[r], rows[best]);
    Elem inv = f.inv(rows[r][c]);
    for (int j = c; j < m; ++j) rows[r][j] = f.mul(rows[r][j], inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || !rows[i][c]) continue;
      Elem k = f.neg(rows[i][c]);
      for (int j = c; j < m; ++j)
        if (rows[r][j]) rows[i][j] = f.add(rows[i][j], f.mul(k, rows[r][j]));
    }
    piv.push_back(c);
    ++r;
  }
  rows.resize(r);
  return piv;
}

namespace {

std::string key_of(const std::vector<Vec>& rows) {
  std::string k;
  for (const auto& r : rows) {
    k.append(reinterpret_cast<const char*>(r.data()), r.size());
    k.push_back('\xff');
  }
  return k;
}

}  // namespace

Lattice::Lattice(std::shared_ptr<const Field> f, int m) : f_(std::move(f)), m_(m) {
  const int q = f_->q();
  for (int d = 0; d <= m; ++d) {
    // Pivot sets in lexicographic order, then every filling of the free entries.
    std::vector<int> piv(d);
    std::function<void(int, int)> choose = [&](int pos, int start) {
      if (pos == d) {
        std::vector<std::pair<int, int>> free;
        std::vector<bool> is_piv(m, false);
        for (int c : piv) is_piv[c] = true;
        for (int r = 0; r < d; ++r)
          for (int c = piv[r] + 1; c < m; ++c)
            if (!is_piv[c]) free.emplace_back(r, c);
        std::vector<int> val(free.size(), 0);
        while (true) {
          std::vector<Vec> rows(d, Vec(m, 0));
          for (int r = 0; r < d; ++r) rows[r][piv[r]] = 1;
          for (std::size_t i = 0; i < free.size(); ++i) rows[free[i].first][free[i].second] = static_cast<Elem>(val[i]);
          index_.emplace(key_of(rows), static_cast<int>(basis_.size()));
          basis_.push_back(std::move(rows));
          std::size_t i = 0;
          while (i < val.size() && ++val[i] == q) val[i++] = 0;
          if (i == val.size()) break;
        }
        return;
      }
      for (int c = start; c <= m - (d - pos); ++c) {
        piv[pos] = c;
        choose(pos + 1, c + 1);
      }
    };
    choose(0, 0);
  }
}

int Lattice::id_of(std::vector<Vec> rows) const {
  rref(*f_, rows);
  return index_.at(key_of(rows));
}

int Lattice::coordinate(std::uint32_t mask) const {
  std::vector<Vec> rows;
  for (int i = 0; i < m_; ++i)
    if (mask >> i & 1u) {
      Vec v(m_, 0);
      v[i] = 1;
      rows.push_back(std::move(v));
    }
  return id_of(std::move(rows));
}

int Lattice::sum(int a, int b) const {
  std::vector<Vec> rows = basis_[a];
  rows.insert(rows.end(), basis_[b].begin(), basis_[b].end());
  return id_of(std::move(rows));
}

const std::vector<int>& Lattice::supersets(int a, int w) {
  auto key = std::make_pair(a, w);
  auto it = supersets_.find(key);
  if (it != supersets_.end()) return it->second;
  std::vector<int> out;
  const int da = dim(a);
  if (w == da) {
    out.push_back(a);
  } else if (w > da && w <= m_) {
    const auto& ba = basis_[a];
    std::vector<bool> is_piv(m_, false);
    for (const auto& r : ba)
      for (int c = 0; c < m_; ++c)
        if (r[c]) {
          is_piv[c] = true;
          break;
        }
    std::vector<int> comp;
    for (int c = 0; c < m_; ++c)
      if (!is_piv[c]) comp.push_back(c);
    Lattice& quot = lattice(f_->q(), static_cast<int>(comp.size()));
    for (std::size_t id = 0; id < quot.size(); ++id) {
      if (quot.dim(static_cast<int>(id)) != w - da) continue;
      std::vector<Vec> rows = ba;
      for (const auto& r : quot.basis(static_cast<int>(id))) {
        Vec v(m_, 0);
        for (std::size_t j = 0; j < comp.size(); ++j) v[comp[j]] = r[j];
        rows.push_back(std::move(v));
      }
      out.push_back(id_of(std::move(rows)));
    }
  }
  return supersets_.emplace(key, std::move(out)).first->second;
}

int Lattice::meet_initial(int id, int kappa) {
  if (kappa <= 0) return 0;
  if (kappa >= m_) return dim(id);
  auto& tab = meets_[kappa];
  if (tab.empty()) tab.assign(basis_.size(), -1);
  if (tab[id] >= 0) return tab[id];
  std::vector<Vec> tail;
  for (const auto& r : basis_[id]) tail.emplace_back(r.begin() + kappa, r.end());
  int rk = static_cast<int>(rref(*f_, tail).size());
  tab[id] = static_cast<std::int8_t>(dim(id) - rk);
  return tab[id];
}

int Lattice::image(int id, const std::vector<Vec>& matrix, const Lattice& target) const {
  std::vector<Vec> rows;
  for (const auto& b : basis_[id]) {
    Vec v(matrix.size(), 0);
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      Elem acc = 0;
      for (int j = 0; j < m_; ++j)
        if (b[j] && matrix[i][j]) acc = f_->add(acc, f_->mul(matrix[i][j], b[j]));
      v[i] = acc;
    }
    rows.push_back(std::move(v));
  }
  if (rows.empty()) return target.zero();
  return target.id_of(std::move(rows));
}

Lattice& lattice(int q, int m) {
  static std::map<std::pair<int, int>, std::unique_ptr<Lattice>> cache;
  auto key = std::make_pair(q, m);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto l = std::make_unique<Lattice>(field(q), m);
  return *cache.emplace(key, std::move(l)).first->second;
}

}  // namespace voganish::cover::detail
