#pragma once

// Type classification of Cartan vectors against a weight set, the no-swinging
// test, construction of the extreme symmetric generic reference vector X₀,
// enumeration of generic type classes, and the headline condition report.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "aff/linprog.hpp"
#include "aff/rootsys.hpp"
#include "aff/weights.hpp"

namespace aff {

struct TypeClass {
  std::vector<RVec> omega_pos, omega_neg, omega_zero;  // each sorted, disjoint, union = Ω
};

inline bool is_generic_class(const TypeClass& tc) {
  for (const RVec& z : tc.omega_zero) {
    bool zero = true;
    for (Eigen::Index i = 0; i < z.size(); ++i) zero = zero && z[i].sign() == 0;
    if (!zero) return false;
  }
  return true;
}

enum class Status { SATISFIED, FAILED, NEEDS_NUMERIC };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::SATISFIED: return "SATISFIED";
    case Status::FAILED: return "FAILED";
    default: return "NEEDS_NUMERIC";
  }
}

struct ConditionReport {
  Status zero_weight = Status::NEEDS_NUMERIC;
  Status cond_ii_no_swinging = Status::NEEDS_NUMERIC;
  std::optional<RVec> swinging_witness;
  Status cond_ia_fixed_vector = Status::NEEDS_NUMERIC;
  Status cond_ib_w0_moves = Status::NEEDS_NUMERIC;
};

struct NoSwingingViolated : std::runtime_error {
  RVec witness;
  explicit NoSwingingViolated(RVec w)
      : std::runtime_error("no symmetric generic vector exists: a nonzero weight is fixed by w0"),
        witness(std::move(w)) {}
};

struct InputNotGeneric : std::runtime_error {
  InputNotGeneric() : std::runtime_error("input vector is not generic for this weight set") {}
};
struct InputNotDominant : std::runtime_error {
  InputNotDominant() : std::runtime_error("input vector is not dominant") {}
};

inline TypeClass classify(const RVec& x, const WeightSet& ws) {
  TypeClass tc;
  for (const RVec& lam : ws.weights) {
    int s = dot(lam, x).sign();
    if (s > 0)
      tc.omega_pos.push_back(lam);
    else if (s < 0)
      tc.omega_neg.push_back(lam);
    else
      tc.omega_zero.push_back(lam);
  }
  return tc;
}

inline bool is_generic(const RVec& x, const WeightSet& ws) {
  return is_generic_class(classify(x, ws));
}

inline bool same_type(const RVec& x, const RVec& y, const WeightSet& ws) {
  TypeClass a = classify(x, ws), b = classify(y, ws);
  auto eq = [](const std::vector<RVec>& u, const std::vector<RVec>& v) {
    if (u.size() != v.size()) return false;
    for (size_t i = 0; i < u.size(); ++i)
      if (!(u[i] == v[i])) return false;
    return true;
  };
  return eq(a.omega_pos, b.omega_pos) && eq(a.omega_neg, b.omega_neg);
}

struct SwingingCheck {
  Status status;
  std::optional<RVec> witness;
};

inline SwingingCheck no_swinging(const WeightSet& ws, const WeylElement& w0) {
  // shortcut: w₀ = −Id on the root span
  bool minus_id = true;
  for (const RVec& a : ws.rs.simple_roots) minus_id = minus_id && RVec(w0.matrix * a) == RVec(-a);
  if (minus_id) return {Status::SATISFIED, std::nullopt};
  for (const RVec& lam : ws.weights) {
    bool zero = true;
    for (Eigen::Index i = 0; i < lam.size(); ++i) zero = zero && lam[i].sign() == 0;
    if (zero) continue;
    if (RVec(w0.matrix * lam) == lam) return {Status::FAILED, lam};
  }
  return {Status::SATISFIED, std::nullopt};
}

// Deterministic symmetric generic vector: X_N = Σ N^k b_k over a dominant
// basis of Fix(−w₀), the first N ≥ 1 making every nonzero weight nonvanishing.
inline RVec find_symmetric_generic(const WeightSet& ws, const WeylElement& w0) {
  SwingingCheck sc = no_swinging(ws, w0);
  if (sc.status == Status::FAILED) throw NoSwingingViolated(*sc.witness);
  auto fw = fundamental_weights(ws.rs);
  std::vector<RVec> basis;
  std::set<RVec, RVecLess> dedup;
  for (const RVec& w : fw) {
    RVec b = Rat(1, 2) * (w - w0.matrix * w);  // (ϖ + (−w₀)ϖ)/2, still dominant
    if (dedup.insert(b).second) basis.push_back(b);
  }
  for (long N = 1;; ++N) {
    RVec x = RVec::Constant(ws.rs.ambient_dim, Rat(0));
    Rat p(1);
    for (const RVec& b : basis) {
      x += p * b;
      p *= Rat(N);
    }
    bool ok = true;
    for (const RVec& lam : ws.weights) {
      bool zero = true;
      for (Eigen::Index i = 0; i < lam.size(); ++i) zero = zero && lam[i].sign() == 0;
      if (!zero && dot(lam, x).sign() == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
}

inline std::vector<int> pi_x(const RootSystem& rs, const RVec& x) {
  std::vector<int> out;
  for (int i = 0; i < rs.rank; ++i)
    if (dot(rs.simple_roots[i], x).sign() == 0) out.push_back(i);
  return out;
}

inline std::vector<WeylElement> weyl_stabilizer(const RVec& x,
                                                const std::vector<WeylElement>& W) {
  std::vector<WeylElement> out;
  for (const auto& w : W)
    if (RVec(w.matrix * x) == x) out.push_back(w);
  return out;
}

inline std::vector<WeylElement> weyl_stabilizer_up_to_type(const RVec& x, const WeightSet& ws,
                                                           const std::vector<WeylElement>& W) {
  std::vector<WeylElement> out;
  for (const auto& w : W)
    if (same_type(RVec(w.matrix * x), x, ws)) out.push_back(w);
  return out;
}

struct ReferenceVector {
  RVec x0;
  TypeClass type_class;
  std::vector<int> pi_x0;
  std::vector<WeylElement> w_x0;
};

// X′ = Σ_{w ∈ W_{ρ,x}} w(x): same type, dominant, extreme; symmetric stays symmetric.
inline ReferenceVector extreme_representative(const RVec& x, const WeightSet& ws,
                                              const std::vector<WeylElement>& W) {
  if (!is_generic(x, ws)) throw InputNotGeneric();
  if (!is_dominant(ws.rs, x)) throw InputNotDominant();
  RVec xp = RVec::Constant(ws.rs.ambient_dim, Rat(0));
  auto wrx = weyl_stabilizer_up_to_type(x, ws, W);
  for (const auto& w : wrx) xp += w.matrix * x;

  ReferenceVector rv;
  rv.x0 = xp;
  rv.type_class = classify(xp, ws);
  rv.pi_x0 = pi_x(ws.rs, xp);
  rv.w_x0 = weyl_stabilizer(xp, W);
  if (!same_type(xp, x, ws) || !is_dominant(ws.rs, xp))
    throw std::logic_error("extreme_representative: averaging left the type class");
  if (rv.w_x0.size() != wrx.size())
    throw std::logic_error("extreme_representative: output is not extreme");
  return rv;
}

struct GenericType {
  TypeClass cls;
  RVec witness;                 // a rational point of the class, in 𝔞
  std::vector<int> sign_key;    // signs against the deduped hyperplane list
};

namespace detail {

// hyperplanes ker λ in the fundamental-weight coordinates, deduped up to scale
inline std::vector<RVec> type_hyperplanes(const WeightSet& ws, const std::vector<RVec>& fw) {
  std::set<RVec, RVecLess> seen;
  std::vector<RVec> out;
  int r = ws.rs.rank;
  for (const RVec& lam : ws.weights) {
    RVec c(r);
    bool zero = true;
    for (int i = 0; i < r; ++i) {
      c[i] = dot(lam, fw[i]);
      zero = zero && c[i].sign() == 0;
    }
    if (zero) continue;
    int lead = 0;
    while (c[lead].sign() == 0) ++lead;
    RVec key = c / c[lead];  // identifies c with −c as well
    if (seen.insert(key).second) out.push_back(key);
  }
  return out;
}

}  // namespace detail

// All generic type classes meeting the dominant cone: BFS over the chamber
// graph of {ker λ} inside 𝔞⁺, each chamber certified by an exact LP witness.
inline std::vector<GenericType> enumerate_generic_types(const WeightSet& ws, int rank_cap = 6) {
  const RootSystem& rs = ws.rs;
  if (rs.rank > rank_cap)
    throw std::invalid_argument("enumerate_generic_types: rank exceeds cap");
  auto fw = fundamental_weights(rs);
  int r = rs.rank;
  std::vector<RVec> hyp = detail::type_hyperplanes(ws, fw);
  int H = static_cast<int>(hyp.size());

  auto to_ambient = [&](const RVec& t) {
    RVec x = RVec::Constant(rs.ambient_dim, Rat(0));
    for (int i = 0; i < r; ++i) x += t[i] * fw[i];
    return x;
  };
  auto feasibility_rows = [&](const std::vector<int>& signs) {
    std::vector<LinIneq> rows;
    for (int i = 0; i < r; ++i) {
      RVec e = RVec::Constant(r, Rat(0));
      e[i] = Rat(1);
      rows.push_back(ineq(e, Rat(0), true));  // orthant interior reaches every class
    }
    for (int h = 0; h < H; ++h) rows.push_back(ineq(Rat(signs[h]) * hyp[h], Rat(0), true));
    return rows;
  };

  // deterministic generic start point in the dominant cone
  std::vector<int> start_signs(H);
  RVec t0(r);
  for (long N = 1;; ++N) {
    Rat p(1);
    for (int i = 0; i < r; ++i) {
      t0[i] = p;
      p *= Rat(N);
    }
    bool ok = true;
    for (int h = 0; h < H; ++h) {
      int s = dot(hyp[h], t0).sign();
      if (s == 0) {
        ok = false;
        break;
      }
      start_signs[h] = s;
    }
    if (ok) break;
  }

  std::map<std::vector<int>, RVec> chambers;  // sign key -> t-witness
  chambers[start_signs] = t0;
  std::vector<std::vector<int>> frontier{start_signs};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& key : frontier)
      for (int h = 0; h < H; ++h) {
        std::vector<int> cand = key;
        cand[h] = -cand[h];
        if (chambers.count(cand)) continue;
        LPResult lp = feasible_point(r, feasibility_rows(cand));
        if (!lp.feasible) continue;
        chambers[cand] = lp.witness;
        next.push_back(cand);
      }
    frontier = std::move(next);
  }

  std::vector<GenericType> out;
  for (const auto& [key, t] : chambers) {
    GenericType g;
    g.witness = to_ambient(t);
    g.cls = classify(g.witness, ws);
    g.sign_key = key;
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const GenericType& a, const GenericType& b) {
    return std::lexicographical_compare(a.cls.omega_pos.begin(), a.cls.omega_pos.end(),
                                        b.cls.omega_pos.begin(), b.cls.omega_pos.end(),
                                        RVecLess{});
  });
  return out;
}

struct GroupSpec {
  enum class Kind { split, so_pq, custom } kind = Kind::split;
  int p = 0, q = 0;  // so_pq only
};

inline bool is_split(const GroupSpec& g) {
  return g.kind == GroupSpec::Kind::split ||
         (g.kind == GroupSpec::Kind::so_pq && g.p - g.q <= 1);
}

inline ConditionReport main_theorem_report(const RootSystem& rs, const RVec& lambda,
                                           const GroupSpec& group) {
  WeightSet ws = weight_set(rs, lambda);
  WeylElement w0 = longest_element(rs);
  ConditionReport rep;
  bool zero = has_zero_weight(ws);
  rep.zero_weight = zero ? Status::SATISFIED : Status::FAILED;

  SwingingCheck sc = no_swinging(ws, w0);
  rep.cond_ii_no_swinging = sc.status;
  rep.swinging_witness = sc.witness;

  if (!zero)
    rep.cond_ia_fixed_vector = Status::FAILED;
  else if (is_split(group))
    rep.cond_ia_fixed_vector = Status::SATISFIED;
  else
    rep.cond_ia_fixed_vector = Status::NEEDS_NUMERIC;

  bool adjoint = lambda == highest_root(rs);
  bool so_standard = group.kind == GroupSpec::Kind::so_pq && group.p == group.q + 1 &&
                     rs.label == "B" && rs.rank == group.q;
  if (so_standard) {
    RVec e1 = RVec::Constant(rs.ambient_dim, Rat(0));
    e1[0] = Rat(1);
    so_standard = lambda == e1;
  }
  if (so_standard)
    rep.cond_ib_w0_moves = (group.q % 2 == 1) ? Status::SATISFIED : Status::FAILED;
  else if (adjoint)
    rep.cond_ib_w0_moves = Status::SATISFIED;
  else
    rep.cond_ib_w0_moves = Status::NEEDS_NUMERIC;
  return rep;
}

}  // namespace aff
