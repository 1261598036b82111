#pragma once

// Brute-force cross-checks, kept deliberately independent of the production
// paths: the weight oracle enumerates an integer coefficient box and keeps
// what an exact hull membership test admits.

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "aff/linprog.hpp"
#include "aff/rootsys.hpp"
#include "aff/weights.hpp"

namespace aff {

// Every weight of the representation is λ* minus a non-negative integer
// combination of simple roots, and lies in Conv(W·λ*). Walk the full box of
// coefficients up to λ* − w₀λ* and test each point against the orbit hull.
inline std::vector<RVec> oracle_weight_set(const RootSystem& rs, const RVec& lambda) {
  validate_highest_weight(rs, lambda);
  std::vector<RVec> orbit;
  {
    std::set<RVec, RVecLess> seen;
    for (const WeylElement& w : weyl_group(rs)) seen.insert(RVec(w.matrix * lambda));
    orbit.assign(seen.begin(), seen.end());
  }

  int r = rs.rank;
  RMat S(rs.ambient_dim, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < rs.ambient_dim; ++i) S(i, j) = rs.simple_roots[j][i];
  RVec depth = lambda - RVec(longest_element(rs).matrix * lambda);
  RVec coeff = S.fullPivLu().solve(depth);
  std::vector<long> box(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    long k = std::lround(to_double(coeff[i]));
    if (!(coeff[i] == Rat(k)) || k < 0)
      throw std::invalid_argument("oracle_weight_set: depth is not a non-negative integer vector");
    box[static_cast<size_t>(i)] = k;
  }

  std::set<RVec, RVecLess> found;
  std::vector<long> idx(static_cast<size_t>(r), 0);
  for (;;) {
    RVec x = lambda;
    for (int i = 0; i < r; ++i) x -= Rat(idx[static_cast<size_t>(i)]) * rs.simple_roots[i];
    if (in_convex_hull(orbit, x)) found.insert(x);
    int c = 0;
    while (c < r) {
      idx[static_cast<size_t>(c)] += 1;
      if (idx[static_cast<size_t>(c)] <= box[static_cast<size_t>(c)]) break;
      idx[static_cast<size_t>(c)] = 0;
      ++c;
    }
    if (c == r) break;
  }
  return {found.begin(), found.end()};
}

}  // namespace aff
