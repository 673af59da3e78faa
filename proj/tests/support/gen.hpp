#pragma once

#include "voganish/exactcore/poly.hpp"
#include "voganish/multiseg/multiseg.hpp"

#include <random>
#include <vector>

namespace gen {

using voganish::exactcore::QPoly;
using voganish::exactcore::Rat;
using voganish::exactcore::VarId;

inline int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Rat rat(std::mt19937_64& rng, int range = 9) {
  int d = uniform(rng, 1, range);
  Rat r(uniform(rng, -range, range), d);
  r.canonicalize();
  return r;
}

// Sparse polynomial in the given variables, total degree <= deg.
inline QPoly poly(std::mt19937_64& rng, const std::vector<VarId>& vars, int terms = 4, int deg = 3) {
  QPoly p;
  for (int k = 0; k < terms; ++k) {
    QPoly m(rat(rng));
    int d = uniform(rng, 0, deg);
    for (int e = 0; e < d; ++e) m *= QPoly::variable(vars[uniform(rng, 0, static_cast<int>(vars.size()) - 1)]);
    p += m;
  }
  return p;
}

inline std::vector<int> mults(std::mt19937_64& rng, int max_len = 4, int max_m = 3) {
  std::vector<int> m(uniform(rng, 1, max_len));
  for (auto& x : m) x = uniform(rng, 1, max_m);
  return m;
}

inline voganish::multiseg::Multisegment multisegment(std::mt19937_64& rng, int n, int count) {
  voganish::multiseg::Multisegment m(n);
  for (int k = 0; k < count; ++k) {
    int p = uniform(rng, 0, n), q = uniform(rng, p, n);
    m.add({p, q});
  }
  return m;
}

}  // namespace gen
