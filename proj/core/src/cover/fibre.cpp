#include "voganish/cover/cover.hpp"
#include "voganish/exactcore/polyalg.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace voganish::cover {

using exactcore::PolyMatrix;

namespace {

Error outside(const std::string& what) { return precondition("PointOutsideClosure", what); }

QMatrix hcat(const QMatrix& a, const QMatrix& b) {
  QMatrix r(a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

// Column basis of the span of the columns of a, in reduced form.
QMatrix colspace(const QMatrix& a) {
  if (a.cols() == 0) return QMatrix(a.rows(), 0);
  auto [r, piv] = exactcore::rref(a.transpose());
  QMatrix out(a.rows(), piv.size());
  for (std::size_t k = 0; k < piv.size(); ++k)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, k) = r(k, i);
  return out;
}

QMatrix intersect(const QMatrix& a, const QMatrix& b) {
  if (a.cols() == 0 || b.cols() == 0) return QMatrix(a.rows(), 0);
  QMatrix neg = b.scaled(Rat(-1));
  auto ker = exactcore::kernel_basis(hcat(a, neg));
  QMatrix out(a.rows(), ker.size());
  for (std::size_t k = 0; k < ker.size(); ++k) {
    QMatrix coef(a.cols(), 1);
    for (std::size_t i = 0; i < a.cols(); ++i) coef(i, 0) = ker[k][i];
    out.set_block(0, k, a * coef);
  }
  return colspace(out);
}

// {v : x v in span(b)}.
QMatrix preimage(const QMatrix& x, const QMatrix& b) {
  QMatrix neg = b.cols() ? b.scaled(Rat(-1)) : QMatrix(x.rows(), 0);
  auto ker = exactcore::kernel_basis(hcat(x, neg));
  QMatrix out(x.cols(), ker.size());
  for (std::size_t k = 0; k < ker.size(); ++k)
    for (std::size_t i = 0; i < x.cols(); ++i) out(i, k) = ker[k][i];
  return colspace(out);
}

std::size_t qrank(const QMatrix& a) { return a.cols() == 0 ? 0 : exactcore::rank(a); }

bool contained(const QMatrix& a, const QMatrix& b) {
  if (a.cols() == 0) return true;
  return qrank(hcat(b, a)) == qrank(b);
}

PolyMatrix to_poly(const QMatrix& a) { return a.map<QPoly>([](const Rat& r) { return QPoly(r); }); }

PolyMatrix hcat(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix r(a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

PolyMatrix column(const PolyMatrix& a, std::size_t j) {
  PolyMatrix c(a.rows(), 1);
  for (std::size_t i = 0; i < a.rows(); ++i) c(i, 0) = a(i, j);
  return c;
}

bool zero_column(const PolyMatrix& a, std::size_t j) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (!a(i, j).is_zero()) return false;
  return true;
}

// Primitive integer form with positive leading coefficient.
QPoly normalize(const QPoly& p) {
  if (p.is_zero()) return p;
  Int den = 1, num = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
  }
  Rat s(den, num);
  if (p.lead().coeff < 0) s = -s;
  return p.scaled(s);
}

struct Bounds {
  QMatrix lower, upper;
};

struct Pieces {
  std::map<SubspaceId, FibrePiece> by_id;
  std::vector<SubspaceId> order;
};

// Substitution for one dehomogenization choice.
using Choice = std::unordered_map<VarId, QPoly>;

}  // namespace

FibreDescription fibre_over(const CoverSpec& spec, const QuiverPoint& x) {
  if (x.mults != spec.mults()) throw precondition("MultsMismatch", "point and cover have different mults");
  RankTriangle tx = vogan::rank_triangle_of(x);
  if (!multiseg::closure_leq(tx, spec.base)) throw outside("rank bounds of the cover fail at the point");

  std::map<SubspaceId, Bounds> bd;
  for (auto s : spec.subspaces) {
    const int m = spec.base.m(s.v);
    bd[s] = {QMatrix(m, 0), QMatrix::identity(m)};
  }
  auto full_of = [&](int v) { return QMatrix::identity(spec.base.m(v)); };

  bool changed = true;
  while (changed) {
    changed = false;
    auto update = [&](QMatrix& slot, QMatrix value) {
      if (value.cols() != slot.cols()) changed = true;
      slot = std::move(value);
    };
    for (const auto& c : spec.conditions) {
      SubspaceId src{c.map - 1, c.src};
      const bool full = spec.is_full(src);
      const QMatrix& xi = x.x(c.map);
      QMatrix low = full ? full_of(src.v) : bd[src].lower;
      if (c.tgt == 0) {
        if (full) {
          if (!xi.is_zero()) throw outside(describe(c, spec));
        } else {
          auto& u = bd[src].upper;
          update(u, intersect(u, preimage(xi, QMatrix(xi.rows(), 0))));
        }
        continue;
      }
      SubspaceId tgt{c.map, c.tgt};
      auto& l = bd[tgt].lower;
      update(l, colspace(hcat(l, xi * low)));
      if (!full) {
        auto& u = bd[src].upper;
        update(u, intersect(u, preimage(xi, bd[tgt].upper)));
      }
    }
    for (const auto& [a, b] : spec.chains) {
      update(bd[b].lower, colspace(hcat(bd[b].lower, bd[a].lower)));
      update(bd[a].upper, intersect(bd[a].upper, bd[b].upper));
    }
    for (auto s : spec.subspaces) {
      auto& [l, u] = bd[s];
      if (static_cast<int>(l.cols()) > s.k || static_cast<int>(u.cols()) < s.k || !contained(l, u))
        throw outside("no admissible " + subspace_name(s));
      if (static_cast<int>(l.cols()) == s.k && u.cols() != l.cols()) update(u, l);
      if (static_cast<int>(u.cols()) == s.k && l.cols() != u.cols()) update(l, u);
    }
  }

  FibreDescription fd;
  fd.reg = exactcore::make_registry();
  auto& reg = *fd.reg;
  std::mt19937_64 rng(7);
  std::map<SubspaceId, PolyMatrix> basis;

  auto everywhere_full = [&](const PolyMatrix& b) {
    const std::size_t k = b.cols();
    std::vector<QPoly> ms = exactcore::minors(b, k);
    for (const auto& mnr : ms)
      if (!mnr.is_zero() && mnr.is_constant()) return true;
    // Some projective factor whose coordinates all occur as c * z among the minors.
    for (const auto& p : fd.pieces) {
      if (p.kind != PieceKind::Free || p.columns != 1) continue;
      bool all = true;
      for (VarId z : p.coords) {
        bool hit = false;
        for (const auto& mnr : ms)
          if (mnr.nterms() == 1 && mnr.total_degree() == 1 && mnr.contains(z)) hit = true;
        if (!hit) all = false;
      }
      if (all) return true;
    }
    return false;
  };

  for (auto s : spec.subspaces) {
    const int m = spec.base.m(s.v);
    const auto& [low, up] = bd[s];
    FibrePiece piece;
    piece.id = s;
    if (static_cast<int>(low.cols()) == s.k) {
      piece.kind = PieceKind::Determined;
      piece.basis = to_poly(low);
    } else {
      // Symbolic columns forced into s by earlier pieces.
      PolyMatrix forced = to_poly(low);
      for (const auto& c : spec.conditions) {
        if (c.map != s.v || c.tgt != s.k) continue;
        SubspaceId src{c.map - 1, c.src};
        if (spec.is_full(src) || !basis.count(src)) continue;
        forced = hcat(forced, to_poly(x.x(c.map)) * basis.at(src));
      }
      for (const auto& [a, b] : spec.chains)
        if (b == s) forced = hcat(forced, basis.at(a));
      // Greedy independent selection at a random point.
      PolyMatrix chosen(m, 0);
      std::size_t rk = 0;
      std::vector<Rat> pt = exactcore::random_point(reg.size(), rng, 1000);
      for (std::size_t j = 0; j < forced.cols(); ++j) {
        if (zero_column(forced, j)) continue;
        PolyMatrix trial = hcat(chosen, column(forced, j));
        std::size_t r = exactcore::rank(exactcore::evaluate(trial, pt));
        if (r > rk) {
          chosen = trial;
          rk = r;
        }
      }
      if (static_cast<int>(rk) == s.k && everywhere_full(chosen)) {
        piece.kind = PieceKind::Dependent;
        piece.basis = chosen;
      } else {
        // Generic columns in a complement of the lower bound inside the upper bound.
        QMatrix comp(m, 0);
        QMatrix acc = low;
        QMatrix ub = colspace(up);
        for (std::size_t j = 0; j < ub.cols(); ++j) {
          QMatrix v = ub.block(0, j, m, 1);
          QMatrix trial = hcat(acc, v);
          if (qrank(trial) > qrank(acc)) {
            acc = trial;
            comp = hcat(comp, v);
          }
        }
        piece.kind = PieceKind::Free;
        piece.columns = s.k - static_cast<int>(low.cols());
        piece.complement = static_cast<int>(comp.cols());
        PolyMatrix gen(m, piece.columns);
        for (int col = 0; col < piece.columns; ++col)
          for (int i = 0; i < piece.complement; ++i) {
            std::string name = "z[" + subspace_name(s) + "]." +
                               (piece.columns == 1 ? std::to_string(i) : std::to_string(col) + "." + std::to_string(i));
            VarId z = reg.intern(name);
            piece.coords.push_back(z);
            for (int r = 0; r < m; ++r)
              if (!exactcore::is_zero(comp(r, i))) gen(r, col) += QPoly::variable(z).scaled(comp(r, i));
          }
        piece.basis = hcat(to_poly(low), gen);
      }
    }
    basis[s] = piece.basis;
    fd.pieces.push_back(std::move(piece));
  }

  // Relations from containments touching symbolic pieces.
  std::vector<QPoly> rels;
  auto contain = [&](const PolyMatrix& a, const PolyMatrix& b) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (zero_column(a, j)) continue;
      if (b.cols() == 0) {
        for (std::size_t i = 0; i < a.rows(); ++i)
          if (!a(i, j).is_zero()) rels.push_back(a(i, j));
        continue;
      }
      if (b.cols() >= b.rows()) continue;
      for (const auto& mnr : exactcore::minors(hcat(b, column(a, j)), b.cols() + 1))
        if (!mnr.is_zero()) rels.push_back(mnr);
    }
  };
  auto symbolic = [&](SubspaceId s) {
    for (const auto& p : fd.pieces)
      if (p.id == s) return p.kind != PieceKind::Determined;
    return false;
  };
  for (const auto& c : spec.conditions) {
    SubspaceId src{c.map - 1, c.src};
    SubspaceId tgt{c.map, c.tgt};
    bool sym = (!spec.is_full(src) && symbolic(src)) || (c.tgt > 0 && symbolic(tgt));
    if (!sym) continue;
    PolyMatrix a = to_poly(x.x(c.map)) * (spec.is_full(src) ? to_poly(full_of(src.v)) : basis.at(src));
    contain(a, c.tgt == 0 ? PolyMatrix(a.rows(), 0) : basis.at(tgt));
  }
  for (const auto& [a, b] : spec.chains)
    if (symbolic(a) || symbolic(b)) contain(basis.at(a), basis.at(b));

  std::vector<QPoly> uniq;
  for (auto& r : rels) {
    QPoly n = normalize(r);
    if (std::find(uniq.begin(), uniq.end(), n) == uniq.end()) uniq.push_back(n);
  }
  // Drop monomial multiples of other relations.
  for (const auto& r : uniq) {
    bool redundant = false;
    for (const auto& o : uniq) {
      if (&o == &r || o.nterms() != r.nterms() || o.total_degree() >= r.total_degree()) continue;
      auto qt = exactcore::divide_exact(r, o);
      if (qt && qt->nterms() == 1) redundant = true;
    }
    if (!redundant) fd.relations.push_back(r);
  }

  FibreCount fc = fibre_count(spec, tx);
  fd.dimension = fc.dimension;
  fd.count = fc.poly;
  return fd;
}

std::string FibreDescription::summary() const {
  std::ostringstream os;
  std::vector<std::string> factors;
  for (const auto& p : pieces) {
    if (p.kind != PieceKind::Free) continue;
    if (p.columns == 1)
      factors.push_back("P^" + std::to_string(p.complement - 1));
    else
      factors.push_back("Gr(" + std::to_string(p.columns) + "," + std::to_string(p.complement) + ")");
  }
  if (factors.empty()) {
    os << "point";
  } else {
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? " x " : "") << factors[i];
    if (!relations.empty()) os << " cut by " << relations.size() << " relation" << (relations.size() > 1 ? "s" : "");
  }
  os << ", dim " << dimension << ", count " << format_count(count);
  return os.str();
}

std::vector<Chart> generic_charts(const CoverSpec& spec, const FibreDescription& fibre) {
  // Every way of setting one coordinate (or one identity block) of each free piece to 1.
  std::vector<std::vector<std::pair<Choice, std::string>>> options;
  for (const auto& p : fibre.pieces) {
    if (p.kind != PieceKind::Free) continue;
    std::vector<std::pair<Choice, std::string>> opts;
    for (const auto& cols : exactcore::subsets(p.complement, p.columns)) {
      Choice ch;
      std::string label = subspace_name(p.id) + ":";
      for (int col = 0; col < p.columns; ++col) {
        label += std::to_string(cols[col]);
        for (int i = 0; i < p.complement; ++i) {
          VarId z = p.coords[col * p.complement + i];
          auto hit = std::find(cols.begin(), cols.end(), static_cast<std::size_t>(i));
          if (hit != cols.end()) ch[z] = QPoly(hit - cols.begin() == col ? 1 : 0);
        }
      }
      opts.emplace_back(std::move(ch), label);
    }
    options.push_back(std::move(opts));
  }

  std::vector<Chart> out;
  std::set<std::map<SubspaceId, std::vector<int>>> seen;
  std::vector<std::size_t> idx(options.size(), 0);
  while (true) {
    Choice sub;
    std::string label;
    for (std::size_t f = 0; f < options.size(); ++f) {
      const auto& [ch, lab] = options[f][idx[f]];
      sub.insert(ch.begin(), ch.end());
      label += (f ? " " : "") + lab;
    }
    Chart chart;
    bool ok = true;
    for (const auto& p : fibre.pieces) {
      const auto& b = p.basis;
      const int m = static_cast<int>(b.rows());
      std::vector<int> lower_piv;
      for (const auto& [a, c] : spec.chains)
        if (c == p.id) lower_piv = chart.pivots.at(a);
      bool found = false;
      for (const auto& rows : exactcore::subsets(m, p.id.k)) {
        bool superset = true;
        for (int r : lower_piv)
          if (std::find(rows.begin(), rows.end(), static_cast<std::size_t>(r)) == rows.end()) superset = false;
        if (!superset) continue;
        std::vector<std::size_t> cols(p.id.k);
        for (int c = 0; c < p.id.k; ++c) cols[c] = c;
        QPoly mnr = exactcore::determinant(b.submatrix(rows, cols)).substitute(sub);
        if (!mnr.is_zero() && mnr.is_constant()) {
          chart.pivots[p.id] = std::vector<int>(rows.begin(), rows.end());
          found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (ok && seen.insert(chart.pivots).second) {
      chart.id = std::to_string(out.size() + 1);
      chart.label = label.empty() ? "point" : label;
      out.push_back(std::move(chart));
    }
    std::size_t f = 0;
    while (f < idx.size() && ++idx[f] == options[f].size()) idx[f++] = 0;
    if (f == idx.size()) break;
  }
  return out;
}

std::vector<Chart> charts_covering_fibre(const CoverSpec& spec, const QuiverPoint& x) {
  if (auto shipped = shipped_charts_for(spec.base); shipped && x.mults == spec.mults() &&
                                                   vogan::flatten(x) == vogan::flatten(vogan::x_ks()))
    return shipped->charts;
  return generic_charts(spec, fibre_over(spec, x));
}

}  // namespace voganish::cover
