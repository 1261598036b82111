#pragma once

// Restricted root systems over exact rationals: construction in e-coordinates,
// Weyl group enumeration, longest element, fundamental weights, dominant
// representatives. Everything here is Layer 1: no floating point.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aff/scalar.hpp"

namespace aff {

struct WeylElement {
  RMat matrix;            // acts on the ambient space, orthogonal for the dot pairing
  std::vector<int> word;  // reduced expression in simple reflections (0-based)
};

struct RootSystem {
  std::string label;  // A,B,C,D,E6,E7,E8,F4,G2,BC
  int rank = 0;
  int ambient_dim = 0;
  std::vector<RVec> simple_roots;
  std::vector<RVec> roots;           // all of Σ
  std::vector<RVec> positive_roots;  // Σ⁺, simple-root coefficients ≥ 0
};

// s_α(x) = x − 2⟨x,α⟩/⟨α,α⟩ α
inline RVec reflect(const RVec& alpha, const RVec& x) {
  Rat c = Rat(2) * dot(x, alpha) / dot(alpha, alpha);
  return x - c * alpha;
}

inline RMat reflection_matrix(const RVec& alpha, int dim) {
  RMat m(dim, dim);
  RVec e = RVec::Constant(dim, Rat(0));
  for (int j = 0; j < dim; ++j) {
    e[j] = Rat(1);
    RVec col = reflect(alpha, e);
    for (int i = 0; i < dim; ++i) m(i, j) = col[i];
    e[j] = Rat(0);
  }
  return m;
}

namespace detail {

inline RVec evec(int dim, int i, Rat c = Rat(1)) {
  RVec v = RVec::Constant(dim, Rat(0));
  v[i] = std::move(c);
  return v;
}

inline std::vector<RVec> simple_roots_for(const std::string& label, int rank, int& ambient) {
  std::vector<RVec> alphas;
  auto chain = [&](int dim, int count) {  // e_i − e_{i+1}
    for (int i = 0; i < count; ++i) {
      RVec a = RVec::Constant(dim, Rat(0));
      a[i] = Rat(1);
      a[i + 1] = Rat(-1);
      alphas.push_back(a);
    }
  };
  if (label == "A") {
    if (rank < 1) throw std::invalid_argument("root system A requires rank >= 1");
    ambient = rank + 1;
    chain(ambient, rank);
  } else if (label == "B" || label == "BC") {
    if (rank < 1) throw std::invalid_argument("root system " + label + " requires rank >= 1");
    ambient = rank;
    chain(ambient, rank - 1);
    alphas.push_back(evec(ambient, rank - 1));
  } else if (label == "C") {
    if (rank < 1) throw std::invalid_argument("root system C requires rank >= 1");
    ambient = rank;
    chain(ambient, rank - 1);
    alphas.push_back(evec(ambient, rank - 1, Rat(2)));
  } else if (label == "D") {
    if (rank < 3) throw std::invalid_argument("root system D requires rank >= 3");
    ambient = rank;
    chain(ambient, rank - 1);
    RVec a = RVec::Constant(ambient, Rat(0));
    a[rank - 2] = Rat(1);
    a[rank - 1] = Rat(1);
    alphas.push_back(a);
  } else if (label == "G2") {
    if (rank != 2) throw std::invalid_argument("G2 has rank 2");
    ambient = 3;
    RVec a1 = RVec::Constant(3, Rat(0)), a2 = RVec::Constant(3, Rat(0));
    a1[0] = Rat(1);
    a1[1] = Rat(-1);
    a2[0] = Rat(-2);
    a2[1] = Rat(1);
    a2[2] = Rat(1);
    alphas = {a1, a2};
  } else if (label == "F4") {
    if (rank != 4) throw std::invalid_argument("F4 has rank 4");
    ambient = 4;
    RVec a1 = RVec::Constant(4, Rat(0)), a2 = RVec::Constant(4, Rat(0)),
         a3 = RVec::Constant(4, Rat(0)), a4 = RVec::Constant(4, Rat(0));
    a1[1] = Rat(1);
    a1[2] = Rat(-1);
    a2[2] = Rat(1);
    a2[3] = Rat(-1);
    a3[3] = Rat(1);
    a4[0] = Rat(1, 2);
    a4[1] = Rat(-1, 2);
    a4[2] = Rat(-1, 2);
    a4[3] = Rat(-1, 2);
    alphas = {a1, a2, a3, a4};
  } else if (label == "E6" || label == "E7" || label == "E8") {
    int need = label == "E6" ? 6 : (label == "E7" ? 7 : 8);
    if (rank != need) throw std::invalid_argument(label + " has rank " + std::to_string(need));
    ambient = 8;
    std::vector<RVec> e8;
    RVec a1 = RVec::Constant(8, Rat(0));
    a1[0] = Rat(1, 2);
    a1[7] = Rat(1, 2);
    for (int i = 1; i <= 6; ++i) a1[i] = Rat(-1, 2);
    e8.push_back(a1);
    RVec a2 = RVec::Constant(8, Rat(0));
    a2[0] = Rat(1);
    a2[1] = Rat(1);
    e8.push_back(a2);
    for (int i = 0; i < 6; ++i) {
      RVec a = RVec::Constant(8, Rat(0));
      a[i] = Rat(-1);
      a[i + 1] = Rat(1);
      e8.push_back(a);
    }
    alphas.assign(e8.begin(), e8.begin() + need);
  } else {
    throw std::invalid_argument("unknown root system label '" + label + "'");
  }
  return alphas;
}

}  // namespace detail

inline RootSystem build_root_system(const std::string& label, int rank) {
  RootSystem rs;
  rs.label = label;
  rs.rank = rank;
  rs.simple_roots = detail::simple_roots_for(label, rank, rs.ambient_dim);

  std::set<RVec, RVecLess> all(rs.simple_roots.begin(), rs.simple_roots.end());
  if (label == "BC")  // non-reduced: doubled short roots are part of Σ
    for (int i = 0; i < rank; ++i) all.insert(Rat(2) * detail::evec(rank, i));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<RVec> cur(all.begin(), all.end());
    for (const RVec& r : cur)
      for (const RVec& a : rs.simple_roots) {
        RVec img = reflect(a, r);
        if (all.insert(img).second) grew = true;
      }
    for (const RVec& r : cur)
      if (all.insert(-r).second) grew = true;
  }
  rs.roots.assign(all.begin(), all.end());

  // positivity = nonnegative coordinates in the simple-root basis
  RMat S(rs.ambient_dim, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < rs.ambient_dim; ++i) S(i, j) = rs.simple_roots[j][i];
  RMat gram = S.transpose() * S;
  Eigen::FullPivLU<RMat> lu(gram);
  for (const RVec& r : rs.roots) {
    RVec c = lu.solve(S.transpose() * r);
    bool nonneg = true, nonpos = true;
    for (int k = 0; k < rank; ++k) {
      if (c[k].sign() < 0) nonneg = false;
      if (c[k].sign() > 0) nonpos = false;
    }
    if (!nonneg && !nonpos)
      throw std::logic_error("root not signed in the simple-root basis");
    if (nonneg) rs.positive_roots.push_back(r);
  }
  return rs;
}

inline bool contains_root(const RootSystem& rs, const RVec& v) {
  return std::binary_search(rs.roots.begin(), rs.roots.end(), v, RVecLess{});
}

// α′ᵢ: the longer of αᵢ, 2αᵢ present in Σ (only BC has doubled simple roots).
inline RVec alpha_prime(const RootSystem& rs, int i) {
  RVec twice = Rat(2) * rs.simple_roots[i];
  return contains_root(rs, twice) ? twice : rs.simple_roots[i];
}

inline std::vector<WeylElement> weyl_group(const RootSystem& rs, int rank_cap = 6) {
  if (rs.rank > rank_cap)
    throw std::invalid_argument("weyl_group: rank " + std::to_string(rs.rank) +
                                " exceeds enumeration cap " + std::to_string(rank_cap));
  int d = rs.ambient_dim;
  std::vector<RMat> gens;
  for (const RVec& a : rs.simple_roots) gens.push_back(reflection_matrix(a, d));

  std::vector<WeylElement> out;
  std::set<RMat, RMatLess> seen;
  RMat id = RMat::Identity(d, d);
  out.push_back({id, {}});
  seen.insert(id);
  for (size_t head = 0; head < out.size(); ++head) {
    WeylElement w = out[head];  // copy: out may reallocate
    for (int i = 0; i < rs.rank; ++i) {
      RMat next = w.matrix * gens[i];
      if (seen.insert(next).second) {
        std::vector<int> word = w.word;
        word.push_back(i);
        out.push_back({std::move(next), std::move(word)});
      }
    }
  }
  return out;
}

inline bool is_dominant(const RootSystem& rs, const RVec& x) {
  for (const RVec& a : rs.simple_roots)
    if (dot(a, x).sign() < 0) return false;
  return true;
}

// Reflects at the lowest-index violated simple root until dominant.
inline std::pair<RVec, WeylElement> dominant_representative(const RootSystem& rs, const RVec& x) {
  RVec y = x;
  WeylElement w{RMat::Identity(rs.ambient_dim, rs.ambient_dim), {}};
  for (;;) {
    int neg = -1;
    for (int i = 0; i < rs.rank; ++i)
      if (dot(rs.simple_roots[i], y).sign() < 0) {
        neg = i;
        break;
      }
    if (neg < 0) break;
    y = reflect(rs.simple_roots[neg], y);
    w.matrix = reflection_matrix(rs.simple_roots[neg], rs.ambient_dim) * w.matrix;
    w.word.push_back(neg);
  }
  return {y, w};
}

inline std::vector<RVec> fundamental_weights(const RootSystem& rs) {
  // Solve 2⟨ϖᵢ, α′ⱼ⟩/‖α′ⱼ‖² = δᵢⱼ with ϖᵢ in the span of the simple roots.
  int r = rs.rank;
  RMat S(rs.ambient_dim, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < rs.ambient_dim; ++i) S(i, j) = rs.simple_roots[j][i];
  RMat sys(r, r);
  for (int j = 0; j < r; ++j) {
    RVec ap = alpha_prime(rs, j);
    Rat n2 = dot(ap, ap);
    for (int k = 0; k < r; ++k) sys(j, k) = Rat(2) * dot(rs.simple_roots[k], ap) / n2;
  }
  Eigen::FullPivLU<RMat> lu(sys);
  if (lu.rank() != r) throw std::logic_error("fundamental_weights: singular system");
  std::vector<RVec> out;
  for (int i = 0; i < r; ++i) {
    RVec rhs = RVec::Constant(r, Rat(0));
    rhs[i] = Rat(1);
    out.push_back(S * lu.solve(rhs));
  }
  return out;
}

// Hᵢ = 2α′ᵢ/‖α′ᵢ‖², the basis of the root span dual to the fundamental weights.
inline std::vector<RVec> dual_basis(const RootSystem& rs) {
  std::vector<RVec> out;
  for (int i = 0; i < rs.rank; ++i) {
    RVec ap = alpha_prime(rs, i);
    out.push_back(Rat(2) / dot(ap, ap) * ap);
  }
  return out;
}

inline WeylElement longest_element(const RootSystem& rs) {
  // w₀ is the element carrying the strictly antidominant vector −ρ to the
  // dominant chamber; computed by the deterministic reflection walk, so no
  // group enumeration is needed.
  RVec rho = RVec::Constant(rs.ambient_dim, Rat(0));
  for (const RVec& w : fundamental_weights(rs)) rho += w;
  auto [y, w] = dominant_representative(rs, RVec(-rho));
  for (const RVec& a : rs.positive_roots)
    if (!contains_root(rs, RVec(-(w.matrix * a))))
      throw std::logic_error("longest_element: w0 does not negate a positive root");
  return w;
}

// Orthogonal projection onto the span of the roots (exact).
inline RVec project_to_root_span(const RootSystem& rs, const RVec& x) {
  int r = rs.rank;
  RMat S(rs.ambient_dim, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < rs.ambient_dim; ++i) S(i, j) = rs.simple_roots[j][i];
  Eigen::FullPivLU<RMat> lu(S.transpose() * S);
  return S * lu.solve(S.transpose() * x);
}

inline bool in_root_span(const RootSystem& rs, const RVec& x) {
  RVec p = project_to_root_span(rs, x);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!(p[i] == x[i])) return false;
  return true;
}

// Highest root: the positive root whose simple-root coefficient sum is maximal.
inline RVec highest_root(const RootSystem& rs) {
  RMat S(rs.ambient_dim, rs.rank);
  for (int j = 0; j < rs.rank; ++j)
    for (int i = 0; i < rs.ambient_dim; ++i) S(i, j) = rs.simple_roots[j][i];
  Eigen::FullPivLU<RMat> lu(S.transpose() * S);
  const RVec* best = nullptr;
  Rat best_h(0);
  for (const RVec& r : rs.positive_roots) {
    RVec c = lu.solve(S.transpose() * r);
    Rat h(0);
    for (int k = 0; k < rs.rank; ++k) h += c[k];
    if (best == nullptr || best_h < h) {
      best = &r;
      best_h = h;
    }
  }
  return *best;
}

}  // namespace aff
