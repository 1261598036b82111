#pragma once

// Exact restricted-weight sets: lattice ∩ convex hull of the Weyl orbit,
// computed by breadth-first lowering from the highest weight.

#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aff/rootsys.hpp"
#include "aff/scalar.hpp"

namespace aff {

struct NotDominant : std::runtime_error {
  int index;
  explicit NotDominant(int i)
      : std::runtime_error("highest weight not dominant: negative against simple root " +
                           std::to_string(i)),
        index(i) {}
};

struct NotIntegral : std::runtime_error {
  int index;
  explicit NotIntegral(int i)
      : std::runtime_error("highest weight not integral: coefficient " + std::to_string(i) +
                           " of a fundamental weight is not a nonnegative integer"),
        index(i) {}
};

struct WeightSet {
  RootSystem rs;
  RVec highest;
  std::vector<RVec> weights;  // sorted by RVecLess
};

// Coefficients of λ on the fundamental weights: nᵢ = λ(Hᵢ).
inline std::vector<Rat> weight_coefficients(const RootSystem& rs, const RVec& lambda) {
  std::vector<Rat> n;
  for (const RVec& h : dual_basis(rs)) n.push_back(dot(lambda, h));
  return n;
}

inline void validate_highest_weight(const RootSystem& rs, const RVec& lambda) {
  for (int i = 0; i < rs.rank; ++i)
    if (dot(rs.simple_roots[i], lambda).sign() < 0) throw NotDominant(i);
  auto n = weight_coefficients(rs, lambda);
  auto fw = fundamental_weights(rs);
  RVec recon = RVec::Constant(rs.ambient_dim, Rat(0));
  for (int i = 0; i < rs.rank; ++i) {
    if (!n[i].is_integer() || n[i].sign() < 0) throw NotIntegral(i);
    recon += n[i] * fw[i];
  }
  for (int i = 0; i < rs.ambient_dim; ++i)
    if (!(recon[i] == lambda[i])) throw NotIntegral(-1);  // not in the weight lattice's span
}

// μ ∈ Conv(W·λ) iff the dominant representative μ⁺ has ϖᵢ(μ⁺) ≤ ϖᵢ(λ) for all i
// (λ dominant). Exact in rationals.
inline bool in_orbit_hull(const RootSystem& rs, const std::vector<RVec>& fw, const RVec& lambda,
                          const RVec& mu) {
  RVec rep = dominant_representative(rs, mu).first;
  for (const RVec& w : fw)
    if (dot(w, RVec(lambda - rep)).sign() < 0) return false;
  return true;
}

inline WeightSet weight_set(const RootSystem& rs, const RVec& lambda) {
  validate_highest_weight(rs, lambda);
  auto fw = fundamental_weights(rs);
  std::set<RVec, RVecLess> seen{lambda};
  std::deque<RVec> frontier{lambda};
  while (!frontier.empty()) {
    RVec mu = frontier.front();
    frontier.pop_front();
    for (const RVec& a : rs.simple_roots) {
      RVec nu = mu - a;
      if (seen.count(nu)) continue;
      if (!in_orbit_hull(rs, fw, lambda, nu)) continue;
      seen.insert(nu);
      frontier.push_back(nu);
    }
  }
  WeightSet ws;
  ws.rs = rs;
  ws.highest = lambda;
  ws.weights.assign(seen.begin(), seen.end());
  return ws;
}

inline bool contains_weight(const WeightSet& ws, const RVec& mu) {
  return std::binary_search(ws.weights.begin(), ws.weights.end(), mu, RVecLess{});
}

// v ∈ ℤ-span(Σ)? The simple roots are a lattice basis of ℤΣ for every label here.
inline bool in_root_lattice(const RootSystem& rs, const RVec& v) {
  if (!in_root_span(rs, v)) return false;
  RMat S(rs.ambient_dim, rs.rank);
  for (int j = 0; j < rs.rank; ++j)
    for (int i = 0; i < rs.ambient_dim; ++i) S(i, j) = rs.simple_roots[j][i];
  Eigen::FullPivLU<RMat> lu(S.transpose() * S);
  RVec c = lu.solve(S.transpose() * v);
  for (int k = 0; k < rs.rank; ++k)
    if (!c[k].is_integer()) return false;
  return true;
}

inline bool has_zero_weight(const WeightSet& ws) {
  return contains_weight(ws, RVec::Constant(ws.rs.ambient_dim, Rat(0)));
}

}  // namespace aff
