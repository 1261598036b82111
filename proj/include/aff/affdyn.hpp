#pragma once

// Affine maps on the extended space A = V ⊕ ℝ, dynamical splittings by
// eigenvalue modulus, the type test against a reference vector, canonizing
// maps, Margulis invariants, contraction strengths and non-degeneracy bounds.

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "aff/matgroups.hpp"
#include "aff/numeric.hpp"
#include "aff/scalar.hpp"
#include "aff/typing.hpp"

namespace aff {

struct NotGeneric : std::runtime_error {
  explicit NotGeneric(const std::string& what) : std::runtime_error(what) {}
};

struct ToleranceAmbiguous : std::runtime_error {
  explicit ToleranceAmbiguous(const std::string& what) : std::runtime_error(what) {}
};

struct NotTypeX0 : std::runtime_error {
  explicit NotTypeX0(const std::string& what) : std::runtime_error(what) {}
};

struct IllConditioned : std::runtime_error {
  explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// affine maps x ↦ ρ(carrier)x + translation

template <typename S>
struct AffineMap {
  MatX<S> carrier;      // ambient group element
  MatX<S> linear;       // ρ(carrier) on V
  VecX<S> translation;  // in V
};

template <typename S>
AffineMap<S> affine_map(const MatrixGroup& mg, const MatX<S>& carrier, const VecX<S>& v) {
  return {carrier, rho<S>(mg, carrier), v};
}

template <typename S>
AffineMap<S> affine_map(const MatrixGroup& mg, const MatX<S>& carrier) {
  return {carrier, rho<S>(mg, carrier), VecX<S>::Zero(mg.dim_V)};
}

template <typename S>
AffineMap<S> translation_map(const MatrixGroup& mg, const VecX<S>& v) {
  int a = carrier_dim(mg);
  return {MatX<S>::Identity(a, a), MatX<S>::Identity(mg.dim_V, mg.dim_V), v};
}

template <typename S>
AffineMap<S> compose(const AffineMap<S>& a, const AffineMap<S>& b) {
  return {MatX<S>(a.carrier * b.carrier), MatX<S>(a.linear * b.linear),
          VecX<S>(a.translation + a.linear * b.translation)};
}

template <typename S>
AffineMap<S> inverse(const AffineMap<S>& a) {
  int c = static_cast<int>(a.carrier.rows()), d = static_cast<int>(a.linear.rows());
  MatX<S> ci = a.carrier.fullPivLu().solve(MatX<S>::Identity(c, c));
  MatX<S> li = a.linear.fullPivLu().solve(MatX<S>::Identity(d, d));
  return {ci, li, VecX<S>(-(li * a.translation))};
}

template <typename S>
VecX<S> apply(const AffineMap<S>& a, const VecX<S>& x) {
  return VecX<S>(a.linear * x + a.translation);
}

// [[ℓ, v], [0, 1]] acting on A = V ⊕ ℝ; the affine slice is last coord 1
template <typename S>
MatX<S> extended(const AffineMap<S>& a) {
  int d = static_cast<int>(a.linear.rows());
  MatX<S> E = MatX<S>::Zero(d + 1, d + 1);
  E.topLeftCorner(d, d) = a.linear;
  E.topRightCorner(d, 1) = a.translation;
  E(d, d) = S(1);
  return E;
}

// ---------------------------------------------------------------------------
// reference dynamical spaces of exp(X0)

struct ReferenceSpaces {
  RMat v_pos, v_neg, v_zero;  // V^>₀, V^<₀, V^=₀
  RMat v_ge, v_le;
  RMat v_t, v_r;              // fixed and rotated parts of V^=₀ under the neutral group
  RMat a_ge, a_le, a_eq;      // extended coordinates, affine unit column included
  RMat pi_t;                  // B-orthogonal projection of V onto V^t₀
};

namespace detail {

inline RMat with_affine_column(const RMat& v_block) {
  int d = static_cast<int>(v_block.rows());
  RMat out = RMat::Constant(d + 1, v_block.cols() + 1, Rat(0));
  out.topLeftCorner(d, v_block.cols()) = v_block;
  out(d, v_block.cols()) = Rat(1);
  return out;
}

}  // namespace detail

inline ReferenceSpaces reference_spaces(const MatrixGroup& mg, const RVec& x0) {
  for (const WeightBlock& wb : mg.weight_table) {
    bool zero_weight = true;
    for (Eigen::Index i = 0; i < wb.lambda.size(); ++i)
      zero_weight = zero_weight && wb.lambda[i].sign() == 0;
    if (!zero_weight && dot(wb.lambda, x0).sign() == 0)
      throw NotGeneric("reference_spaces: a nonzero weight vanishes on the given vector");
  }
  ReferenceSplit rsp = reference_split(mg, x0);
  ReferenceSpaces out;
  out.v_pos = rsp.v_pos;
  out.v_neg = rsp.v_neg;
  out.v_zero = rsp.v_zero;
  out.v_ge = rsp.v_ge;
  out.v_le = rsp.v_le;

  // V^t₀ = joint fixed space of the neutral group on V⁰. The split torus acts
  // trivially there, so only the compact factor matters: for so(p,q) that is
  // SO(p−q) rotating the middle block, for sl(n) it is trivial.
  int m = static_cast<int>(out.v_zero.cols());
  if (mg.kind == MatrixGroup::Kind::so_pq_standard && m >= 2) {
    RMat stacked(m * (m - 1) / 2 * m, m);
    int row = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        RMat gen = RMat::Constant(m, m, Rat(0));
        gen(a, b) = Rat(1);
        gen(b, a) = Rat(-1);
        stacked.middleRows(row, m) = gen;
        row += m;
      }
    Eigen::FullPivLU<RMat> lu(stacked);
    RMat fixed = lu.dimensionOfKernel() == 0 ? RMat(m, 0) : RMat(lu.kernel());
    out.v_t = out.v_zero * fixed;
    RMat rot;
    if (fixed.cols() == 0) {
      rot = RMat::Identity(m, m);
    } else {
      Eigen::FullPivLU<RMat> lu2{RMat(fixed.transpose())};
      rot = lu2.dimensionOfKernel() == 0 ? RMat(m, 0) : RMat(lu2.kernel());
    }
    out.v_r = out.v_zero * rot;
  } else {
    out.v_t = out.v_zero;
    out.v_r = RMat(mg.dim_V, 0);
  }

  out.a_ge = detail::with_affine_column(out.v_ge);
  out.a_le = detail::with_affine_column(out.v_le);
  out.a_eq = detail::with_affine_column(out.v_zero);
  out.pi_t = out.v_t * out.v_t.transpose();
  return out;
}

// ---------------------------------------------------------------------------
// dynamical splitting of an affine map

template <typename S>
struct DynamicalSplit {
  MatX<S> v_gt, v_lt, v_eq;  // expanding / contracting / neutral directions in V
  MatX<S> a_ge, a_le, a_eq;  // invariant flats in extended coordinates
  VecX<S> logmod;            // extended-matrix log moduli, descending
  double tol = 0;
  std::string warning;       // near-wall notes, empty when clean
};

namespace detail {

template <typename S>
double flag_gate() {
  return std::is_same_v<S, double> ? 1e-6 : 1e-25;
}

// relative invariance defect of span(Q) under M (Q orthonormal)
template <typename S>
double invariance_residual(const MatX<S>& M, const MatX<S>& Q) {
  if (Q.cols() == 0) return 0.0;
  MatX<S> MQ = M * Q;
  MatX<S> res = MQ - Q * MatX<S>(Q.transpose() * MQ);
  double den = to_double(spectral_norm<S>(MQ));
  if (den == 0.0) return 0.0;
  return to_double(spectral_norm<S>(res)) / den;
}

// intersection of span(Q) with {last coordinate 0}, in V coordinates
template <typename S>
MatX<S> v_part(const MatX<S>& Qin) {
  MatX<S> Q = orthonormalize<S>(Qin);
  int rows = static_cast<int>(Q.rows()), k = static_cast<int>(Q.cols());
  if (k == 0) return MatX<S>(rows - 1, 0);
  MatX<S> r = Q.row(rows - 1).transpose();
  if (std::sqrt(to_double(S(r.squaredNorm()))) < 1e-12) return MatX<S>(Q.topRows(rows - 1));
  Eigen::HouseholderQR<MatX<S>> qr(r);
  MatX<S> Qf = qr.householderQ() * MatX<S>::Identity(k, k);
  return orthonormalize<S>(MatX<S>(Q.topRows(rows - 1) * Qf.rightCols(k - 1)));
}

}  // namespace detail

// Splits A into the expanding, contracting and neutral pieces of g. The V
// spaces come from the flags of E and E⁻¹, the flats from the transpose flags
// (the orthocomplement of a dominant E^T-invariant subspace is E-invariant).
// Every extracted space is validated a posteriori for invariance.
template <typename S>
DynamicalSplit<S> dynamical_split(const AffineMap<S>& g, double tol = 1e-8) {
  int d = static_cast<int>(g.linear.rows());
  MatX<S> E = extended(g);
  MatX<S> Ei = extended(inverse(g));

  ModulusFlag<S> fE = modulus_flag<S>(E);
  ModulusFlag<S> fEi = modulus_flag<S>(Ei);
  ModulusFlag<S> fET = modulus_flag<S>(MatX<S>(E.transpose()));
  ModulusFlag<S> fEiT = modulus_flag<S>(MatX<S>(Ei.transpose()));

  const double wall = std::log1p(tol);
  auto counts = [&](const VecX<S>& lm) {
    std::pair<int, int> c{0, 0};
    for (Eigen::Index i = 0; i < lm.size(); ++i) {
      double v = to_double(lm[i]);
      if (v > wall)
        ++c.first;
      else if (v < -wall)
        ++c.second;
    }
    return c;
  };
  auto [ngt, nlt] = counts(fE.logmod);
  auto ci = counts(fEi.logmod), ct = counts(fET.logmod), cit = counts(fEiT.logmod);
  if (ci != std::pair{nlt, ngt} || ct != std::pair{ngt, nlt} || cit != std::pair{nlt, ngt})
    throw ToleranceAmbiguous("dynamical_split: modulus classification disagrees between flags");
  int neq = d + 1 - ngt - nlt;
  if (neq < 1)
    throw ToleranceAmbiguous("dynamical_split: no neutral block for the affine direction");

  DynamicalSplit<S> out;
  out.tol = tol;
  out.logmod = fE.logmod;
  // 1e-12 floor: collapsed readout noise of genuinely neutral clusters
  const double wide = std::log1p(1e-6);
  for (Eigen::Index i = 0; i < fE.logmod.size(); ++i) {
    double v = std::abs(to_double(fE.logmod[i]));
    if (v > 1e-12 && v <= wide) {
      out.warning = "eigenvalue modulus within 1e-6 of 1; classification is tolerance-sensitive";
      break;
    }
  }

  const double gate = detail::flag_gate<S>();
  auto v_space = [&](const MatX<S>& Qext, int k, const char* who) {
    MatX<S> lead = Qext.leftCols(k);
    double aff = 0;
    for (int j = 0; j < k; ++j) aff = std::max(aff, std::abs(to_double(lead(d, j))));
    if (aff > gate)
      throw ToleranceAmbiguous(std::string("dynamical_split: ") + who +
                               " directions leak into the affine slice" +
                               (out.warning.empty() ? "" : "; " + out.warning));
    return orthonormalize<S>(MatX<S>(lead.topRows(d)));
  };
  out.v_gt = v_space(fE.Q, ngt, "expanding");
  out.v_lt = v_space(fEi.Q, nlt, "contracting");
  out.a_le = fET.Q.rightCols(d + 1 - ngt);
  out.a_ge = fEiT.Q.rightCols(d + 1 - nlt);

  MatX<S> C(d + 1, nlt + ngt);
  if (nlt + ngt > 0) {
    C << fEiT.Q.leftCols(nlt), fET.Q.leftCols(ngt);
    Eigen::JacobiSVD<MatX<S>> svd(C, Eigen::ComputeFullU);
    if (to_double(svd.singularValues()[nlt + ngt - 1]) < 1e-8)
      throw ToleranceAmbiguous("dynamical_split: expanding and contracting flats nearly meet");
    out.a_eq = svd.matrixU().rightCols(neq);
  } else {
    out.a_eq = MatX<S>::Identity(d + 1, d + 1);
  }
  out.v_eq = detail::v_part(out.a_eq);
  if (static_cast<int>(out.v_eq.cols()) != neq - 1)
    throw ToleranceAmbiguous("dynamical_split: affine fixed direction is not isolated");

  if (detail::invariance_residual(g.linear, out.v_gt) > gate ||
      detail::invariance_residual(g.linear, out.v_lt) > gate ||
      detail::invariance_residual(g.linear, out.v_eq) > gate ||
      detail::invariance_residual(E, out.a_ge) > gate ||
      detail::invariance_residual(E, out.a_le) > gate ||
      detail::invariance_residual(E, out.a_eq) > gate)
    throw ToleranceAmbiguous(std::string("dynamical_split: extracted spaces are not invariant") +
                             (out.warning.empty() ? "" : "; " + out.warning));
  return out;
}

// ---------------------------------------------------------------------------
// type test

struct TypeCheck {
  bool value = false;
  std::string warning;
  explicit operator bool() const { return value; }
};

// Same type as the reference vector: the Jordan projection of the linear part
// induces the same sign on every weight. Sign calls use tolerance 1e-6; a
// weight value inside the tolerance where the reference is nonzero fails the
// test with a near-wall warning instead of guessing.
template <typename S>
TypeCheck is_type_x0(const MatrixGroup& mg, const AffineMap<S>& g, const ReferenceVector& ref) {
  TypeCheck out;
  VecX<S> jd;
  try {
    jd = jordan_projection<S>(mg, g.carrier, 1e-3).value;
  } catch (const MatchResidualTooLarge& e) {
    out.warning = std::string("jordan projection unreliable: ") + e.what();
    return out;
  }
  const double tol = 1e-6;
  auto wval = [&](const RVec& lam) {
    double t = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) t += to_double(lam[i]) * to_double(jd[i]);
    return t;
  };
  for (const RVec& lam : ref.type_class.omega_pos) {
    double t = wval(lam);
    if (t > tol) continue;
    if (std::abs(t) <= tol) out.warning = "weight value within 1e-6 of the wall";
    return out;
  }
  for (const RVec& lam : ref.type_class.omega_neg) {
    double t = wval(lam);
    if (t < -tol) continue;
    if (std::abs(t) <= tol) out.warning = "weight value within 1e-6 of the wall";
    return out;
  }
  for (const RVec& lam : ref.type_class.omega_zero)
    if (std::abs(wval(lam)) > tol) return out;
  out.value = true;
  return out;
}

// ---------------------------------------------------------------------------
// canonizing map and the Margulis invariant

// φ = τ_w ∘ φ_lin with φ_lin from the canonizer on (V^≥_g, V^≤_g) and w
// killing the expanding and contracting components of the conjugated
// translation; then φ g φ⁻¹ translates only along the neutral block, so both
// parabolic flats of g land exactly on the reference ones.
template <typename S>
AffineMap<S> canonizing_map(const MatrixGroup& mg, const ReferenceVector& ref,
                            const AffineMap<S>& g, const DynamicalSplit<S>* pre = nullptr) {
  TypeCheck tc = is_type_x0(mg, g, ref);
  if (!tc.value)
    throw NotTypeX0(tc.warning.empty() ? "canonizing_map: element is not of the reference type"
                                       : "canonizing_map: " + tc.warning);
  DynamicalSplit<S> local;
  if (!pre) local = dynamical_split(g);
  const DynamicalSplit<S>& sp = pre ? *pre : local;
  ReferenceSpaces rs0 = reference_spaces(mg, ref.x0);

  MatX<S> Vge = detail::v_part(sp.a_ge);
  MatX<S> Vle = detail::v_part(sp.a_le);
  Canonizer<S> can = canonizer<S>(mg, ref.x0, Vge, Vle);
  AffineMap<S> phi_lin{can.carrier, can.phi, VecX<S>::Zero(mg.dim_V)};
  AffineMap<S> h = compose(phi_lin, compose(g, inverse(phi_lin)));

  // (ℓ(h) − Id) is invertible on V^>₀ ⊕ V^<₀ and preserves it
  MatX<S> U = rat_to<S>(hcat(rs0.v_pos, rs0.v_neg));
  int k = static_cast<int>(U.cols());
  MatX<S> rest = U.transpose() * MatX<S>(h.linear - MatX<S>::Identity(mg.dim_V, mg.dim_V)) * U;
  VecX<S> rhs = U.transpose() * h.translation;
  VecX<S> wc = rest.fullPivLu().solve(rhs);
  double res = k == 0 ? 0.0
                      : to_double(S(VecX<S>(rest * wc - rhs).norm())) /
                            std::max(1.0, to_double(S(rhs.norm())));
  if (res > 1e-6) throw IllConditioned("canonizing_map: translation solve did not converge");
  AffineMap<S> out = compose(translation_map<S>(mg, VecX<S>(U * wc)), phi_lin);

  MatX<S> Eout = extended(out);
  if (to_double(span_distance<S>(MatX<S>(Eout * sp.a_ge), rat_to<S>(rs0.a_ge))) > 1e-6 ||
      to_double(span_distance<S>(MatX<S>(Eout * sp.a_le), rat_to<S>(rs0.a_le))) > 1e-6)
    throw IllConditioned("canonizing_map: parabolic flats miss the reference flats");
  return out;
}

// M(g) = π_t(φ(g(x)) − φ(x)) for x on the neutral flat; with φ canonizing,
// the displacement at the canonized origin is the translation part itself.
template <typename S>
VecX<S> margulis_invariant(const MatrixGroup& mg, const ReferenceVector& ref, const AffineMap<S>& g,
                           const DynamicalSplit<S>* pre = nullptr) {
  AffineMap<S> phi = canonizing_map(mg, ref, g, pre);
  AffineMap<S> h = compose(phi, compose(g, inverse(phi)));
  ReferenceSpaces rs0 = reference_spaces(mg, ref.x0);
  return VecX<S>(rat_to<S>(rs0.pi_t) * h.translation);
}

// ---------------------------------------------------------------------------
// contraction data

// s(g) = ‖g restricted to V^<_g‖ · ‖g⁻¹ restricted to A^≥_g‖ in the B-metric
// (the affine coordinate counts as a B-orthonormal direction).
template <typename S>
S contraction_strength(const AffineMap<S>& g, const DynamicalSplit<S>& sp) {
  S a = spectral_norm<S>(MatX<S>(g.linear * sp.v_lt));
  S b = spectral_norm<S>(MatX<S>(extended(inverse(g)) * sp.a_ge));
  return S(a * b);
}

template <typename S>
S contraction_strength(const MatrixGroup& mg, const ReferenceVector& ref, const AffineMap<S>& g,
                       const DynamicalSplit<S>* pre = nullptr) {
  TypeCheck tc = is_type_x0(mg, g, ref);
  if (!tc.value) throw NotTypeX0("contraction_strength: element is not of the reference type");
  DynamicalSplit<S> local;
  if (!pre) local = dynamical_split(g);
  return contraction_strength(g, pre ? *pre : local);
}

// κ_p = m_{p+1}/m_p of the extended-matrix moduli, sorted descending (p 1-based)
template <typename S>
S spectral_gap(const VecX<S>& logmod, int p) {
  using std::exp;
  if (p < 1 || p >= logmod.size()) throw std::invalid_argument("spectral_gap: p out of range");
  S r = exp(S(logmod[p] - logmod[p - 1]));
  if (to_double(r) > 1.0) r = S(1);
  return r;
}

template <typename S>
S spectral_gap(const AffineMap<S>& g, int p) {
  return spectral_gap<S>(modulus_flag<S>(extended(g)).logmod, p);
}

// ---------------------------------------------------------------------------
// non-degeneracy of a pair of parabolic flats

template <typename S>
struct NondegeneracyBound {
  S cbar;            // max(‖φ‖, ‖φ⁻¹‖) of the constructed map, an upper bound
  AffineMap<S> phi;  // takes the pair to the reference flats
};

namespace detail {

// Rebalance a canonizing map over the split torus: exp(z) stabilizes both
// reference flats, so any improvement of max(‖aφ‖, ‖(aφ)⁻¹‖) keeps the map
// admissible. Coordinate ternary search; the objective is log-convex per
// coordinate. Returns the input when no improvement is found.
template <typename S>
AffineMap<S> polish_over_torus(const MatrixGroup& mg, const AffineMap<S>& phi) {
  int q = mg.kind == MatrixGroup::Kind::so_pq_standard ? mg.q : mg.n;
  auto lift = [&](const VecX<double>& zz) {
    VecX<S> zs(q);
    double mean = mg.kind == MatrixGroup::Kind::sl_n_adjoint ? zz.mean() : 0.0;
    for (int i = 0; i < q; ++i) zs[i] = S(zz[i] - mean);
    return affine_map<S>(mg, exp_cartan<S>(mg, zs));
  };
  auto cost = [&](const VecX<double>& zz) {
    AffineMap<S> cand = compose(lift(zz), phi);
    return std::max(to_double(spectral_norm<S>(extended(cand))),
                    to_double(spectral_norm<S>(extended(inverse(cand)))));
  };
  VecX<double> z = VecX<double>::Zero(q);
  const double base = cost(z);
  for (int sweep = 0; sweep < 2; ++sweep)
    for (int i = 0; i < q; ++i) {
      double lo = z[i] - 16, hi = z[i] + 16;
      for (int it = 0; it < 48; ++it) {
        VecX<double> z1 = z, z2 = z;
        z1[i] = lo + (hi - lo) / 3;
        z2[i] = hi - (hi - lo) / 3;
        if (cost(z1) < cost(z2))
          hi = z2[i];
        else
          lo = z1[i];
      }
      z[i] = (lo + hi) / 2;
    }
  if (cost(z) >= base) return phi;
  return compose(lift(z), phi);
}

}  // namespace detail

template <typename S>
NondegeneracyBound<S> nondegeneracy_bound(const MatrixGroup& mg, const RVec& x0,
                                          const MatX<S>& a_ge, const MatX<S>& a_le) {
  ReferenceSpaces rs0 = reference_spaces(mg, x0);
  MatX<S> Qge = orthonormalize<S>(a_ge), Qle = orthonormalize<S>(a_le);
  MatX<S> Vge = detail::v_part(Qge), Vle = detail::v_part(Qle);
  if (Vge.cols() != rs0.v_ge.cols() || Vle.cols() != rs0.v_le.cols())
    throw NotTransverse("nondegeneracy_bound: flats have the wrong linear parts");
  Canonizer<S> can = canonizer<S>(mg, x0, Vge, Vle);

  // the flats meet in an affine copy of the neutral block; send any meeting
  // point into the reference core by a translation
  int d1 = static_cast<int>(Qge.rows());
  int meet_dim = static_cast<int>(rs0.a_eq.cols());
  MatX<S> C(d1, Qge.cols() + Qle.cols());
  C << Qge, -Qle;
  Eigen::JacobiSVD<MatX<S>> svd(C, Eigen::ComputeFullV);
  // columns beyond min(rows, cols) are kernel directions with no listed value
  int small = static_cast<int>(C.cols()) - static_cast<int>(svd.singularValues().size());
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (to_double(svd.singularValues()[i]) < 1e-8) ++small;
  if (small != meet_dim)
    throw NotTransverse("nondegeneracy_bound: flats do not meet in the expected dimension");
  MatX<S> meet = Qge * MatX<S>(svd.matrixV().rightCols(meet_dim).topRows(Qge.cols()));
  MatX<S> row = meet.row(d1 - 1);
  double rn = std::sqrt(to_double(S(row.squaredNorm())));
  if (rn < 1e-10) throw NotTransverse("nondegeneracy_bound: meeting flat misses the affine slice");
  VecX<S> xs = meet * VecX<S>(row.transpose() / S(row.squaredNorm()));
  VecX<S> x = VecX<S>(xs.head(d1 - 1) / xs[d1 - 1]);

  VecX<S> y = can.phi * x;
  MatX<S> P = rat_to<S>(RMat(rs0.v_pos * rs0.v_pos.transpose() +
                             rs0.v_neg * rs0.v_neg.transpose()));
  AffineMap<S> phi_lin{can.carrier, can.phi, VecX<S>::Zero(mg.dim_V)};
  AffineMap<S> phi = compose(translation_map<S>(mg, VecX<S>(-(P * y))), phi_lin);
  phi = detail::polish_over_torus<S>(mg, phi);

  NondegeneracyBound<S> out;
  S n1 = spectral_norm<S>(extended(phi));
  S n2 = spectral_norm<S>(extended(inverse(phi)));
  out.cbar = to_double(n1) > to_double(n2) ? n1 : n2;
  out.phi = phi;
  return out;
}

}  // namespace aff
