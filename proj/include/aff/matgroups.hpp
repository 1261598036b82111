#pragma once

// Concrete matrix realizations of the two group families: the standard
// representation of SO(p,q) in hyperbolic coordinates (J anti-diagonal on the
// isotropic pairs, identity on the middle block, B = Id), and the adjoint
// representation of SL(n) in B-orthonormal coordinates. Weight tables, Cartan
// and Jordan projections by spectral matching, and the kind-specific
// canonizing-map constructors live here.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "aff/numeric.hpp"
#include "aff/rootsys.hpp"
#include "aff/scalar.hpp"

namespace aff {

struct MatchResidualTooLarge : std::runtime_error {
  double residual;
  explicit MatchResidualTooLarge(double r)
      : std::runtime_error("spectral data does not match the weight multiset (residual " +
                           std::to_string(r) + ")"),
        residual(r) {}
};

struct NotTransverse : std::runtime_error {
  explicit NotTransverse(const std::string& what) : std::runtime_error(what) {}
};

struct WeightBlock {
  RVec lambda;     // covector on 𝔞, ambient coordinates of rs
  RMat basis;      // exact unit coordinate columns of the block in V-coordinates
};

struct MatrixGroup {
  enum class Kind { so_pq_standard, sl_n_adjoint };
  Kind kind;
  int p = 0, q = 0, n = 0;  // so(p,q) parameters, or the n of sl(n)
  int dim_V = 0;            // dimension of the representation space
  RootSystem rs;
  RMat form_J;  // invariant bilinear form on V
  RMat form_B;  // K-invariant Euclidean form on V (identity in these coordinates)
  std::vector<WeightBlock> weight_table;
  std::vector<RMat> cartan_basis;  // dρ(H) for the rational basis H of 𝔞 below
  std::vector<RVec> cartan_rational_basis;  // basis of 𝔞 in ambient coordinates
};

inline int carrier_dim(const MatrixGroup& mg) {
  return mg.kind == MatrixGroup::Kind::so_pq_standard ? mg.p + mg.q : mg.n;
}

// ---------------------------------------------------------------------------
// builders

inline MatrixGroup so_pq_standard(int p, int q) {
  if (q < 1 || p < q) throw std::invalid_argument("so_pq_standard requires p >= q >= 1");
  MatrixGroup mg;
  mg.kind = MatrixGroup::Kind::so_pq_standard;
  mg.p = p;
  mg.q = q;
  int d = p + q;
  mg.dim_V = d;
  if (p > q)
    mg.rs = build_root_system("B", q);
  else
    mg.rs = build_root_system("D", q);  // throws below rank 3, as it should

  mg.form_J = RMat::Constant(d, d, Rat(0));
  for (int i = 0; i < q; ++i) {
    mg.form_J(i, d - 1 - i) = Rat(1);
    mg.form_J(d - 1 - i, i) = Rat(1);
  }
  for (int i = q; i < d - q; ++i) mg.form_J(i, i) = Rat(1);
  mg.form_B = RMat::Identity(d, d);

  auto unit_cols = [&](std::vector<int> idx) {
    RMat m = RMat::Constant(d, static_cast<int>(idx.size()), Rat(0));
    for (size_t j = 0; j < idx.size(); ++j) m(idx[j], static_cast<int>(j)) = Rat(1);
    return m;
  };
  for (int i = 0; i < q; ++i) {
    RVec lam = RVec::Constant(q, Rat(0));
    lam[i] = Rat(1);
    mg.weight_table.push_back({lam, unit_cols({i})});
  }
  if (p > q) {
    std::vector<int> mid;
    for (int i = q; i < d - q; ++i) mid.push_back(i);
    mg.weight_table.push_back({RVec::Constant(q, Rat(0)), unit_cols(mid)});
  }
  for (int i = q - 1; i >= 0; --i) {
    RVec lam = RVec::Constant(q, Rat(0));
    lam[i] = Rat(-1);
    mg.weight_table.push_back({lam, unit_cols({d - 1 - i})});
  }

  for (int i = 0; i < q; ++i) {
    RMat H = RMat::Constant(d, d, Rat(0));
    H(i, i) = Rat(1);
    H(d - 1 - i, d - 1 - i) = Rat(-1);
    mg.cartan_basis.push_back(H);
    RVec e = RVec::Constant(q, Rat(0));
    e[i] = Rat(1);
    mg.cartan_rational_basis.push_back(e);
  }
  return mg;
}

namespace detail {

// V-basis bookkeeping for sl(n): first the off-diagonal units E_ij (row-major,
// i != j), then the orthogonal traceless diagonals d_k = e_1+..+e_k − k e_{k+1}
// (normalized on conversion; their B-norms² are k(k+1)).
inline int offdiag_index(int n, int i, int j) {
  int idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      if (a == i && b == j) return idx;
      ++idx;
    }
  throw std::logic_error("offdiag_index");
}

inline std::vector<RVec> diag_chain(int n) {
  std::vector<RVec> out;
  for (int k = 1; k < n; ++k) {
    RVec v = RVec::Constant(n, Rat(0));
    for (int i = 0; i < k; ++i) v[i] = Rat(1);
    v[k] = Rat(-k);
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline MatrixGroup sl_n_adjoint(int n) {
  if (n < 2) throw std::invalid_argument("sl_n_adjoint requires n >= 2");
  MatrixGroup mg;
  mg.kind = MatrixGroup::Kind::sl_n_adjoint;
  mg.n = n;
  int dim = n * n - 1;
  mg.dim_V = dim;
  mg.rs = build_root_system("A", n - 1);
  int off = n * n - n;

  // J = tr(XY) in the orthonormal coordinates: swaps E_ij <-> E_ji, identity
  // on the diagonal block. B = Id.
  mg.form_J = RMat::Constant(dim, dim, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      mg.form_J(detail::offdiag_index(n, i, j), detail::offdiag_index(n, j, i)) = Rat(1);
    }
  for (int k = off; k < dim; ++k) mg.form_J(k, k) = Rat(1);
  mg.form_B = RMat::Identity(dim, dim);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      RVec lam = RVec::Constant(n, Rat(0));
      lam[i] = Rat(1);
      lam[j] = Rat(-1);
      RMat col = RMat::Constant(dim, 1, Rat(0));
      col(detail::offdiag_index(n, i, j), 0) = Rat(1);
      mg.weight_table.push_back({lam, col});
    }
  RMat diag_block = RMat::Constant(dim, n - 1, Rat(0));
  for (int k = 0; k < n - 1; ++k) diag_block(off + k, k) = Rat(1);
  mg.weight_table.push_back({RVec::Constant(n, Rat(0)), diag_block});

  auto chain = detail::diag_chain(n);
  for (int k = 0; k < n - 1; ++k) {
    RMat H = RMat::Constant(dim, dim, Rat(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        H(detail::offdiag_index(n, i, j), detail::offdiag_index(n, i, j)) =
            chain[k][i] - chain[k][j];
      }
    mg.cartan_basis.push_back(H);
    mg.cartan_rational_basis.push_back(chain[k]);
  }
  return mg;
}

// ---------------------------------------------------------------------------
// carrier -> representation space conversions

// Coordinates of a traceless n×n matrix in the orthonormal sl(n) basis.
template <typename S>
VecX<S> sl_mat_to_coords(const MatrixGroup& mg, const MatX<S>& X) {
  using std::sqrt;
  int n = mg.n, dim = mg.dim_V, off = n * n - n;
  VecX<S> v(dim);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      v[idx++] = X(i, j);
    }
  auto chain = detail::diag_chain(n);
  for (int k = 0; k < n - 1; ++k) {
    S acc(0);
    for (int i = 0; i < n; ++i) acc += scalar_cast<S>(chain[k][i]) * X(i, i);
    v[off + k] = acc / sqrt(scalar_cast<S>(dot(chain[k], chain[k])));
  }
  return v;
}

template <typename S>
MatX<S> sl_coords_to_mat(const MatrixGroup& mg, const VecX<S>& v) {
  using std::sqrt;
  int n = mg.n, off = n * n - n;
  MatX<S> X = MatX<S>::Zero(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      X(i, j) = v[idx++];
    }
  auto chain = detail::diag_chain(n);
  for (int k = 0; k < n - 1; ++k) {
    S scale = v[off + k] / sqrt(scalar_cast<S>(dot(chain[k], chain[k])));
    for (int i = 0; i < n; ++i) X(i, i) += scale * scalar_cast<S>(chain[k][i]);
  }
  return X;
}

// The matrix of ρ(g) on V from the carrier element.
template <typename S>
MatX<S> rho(const MatrixGroup& mg, const MatX<S>& carrier) {
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) return carrier;
  int n = mg.n, dim = mg.dim_V;
  MatX<S> inv = carrier.fullPivLu().solve(MatX<S>::Identity(n, n));
  MatX<S> out(dim, dim);
  for (int col = 0; col < dim; ++col) {
    VecX<S> e = VecX<S>::Zero(dim);
    e[col] = S(1);
    MatX<S> X = sl_coords_to_mat<S>(mg, e);
    out.col(col) = sl_mat_to_coords<S>(mg, MatX<S>(carrier * X * inv));
  }
  return out;
}

// dρ(X) on V for X ∈ 𝔞 given in ambient coordinates.
template <typename S>
MatX<S> rho_cartan(const MatrixGroup& mg, const VecX<S>& x) {
  int dim = mg.dim_V;
  MatX<S> out = MatX<S>::Zero(dim, dim);
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    int d = mg.p + mg.q;
    for (int i = 0; i < mg.q; ++i) {
      out(i, i) = x[i];
      out(d - 1 - i, d - 1 - i) = -x[i];
    }
    return out;
  }
  int n = mg.n, idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out(idx, idx) = x[i] - x[j];
      ++idx;
    }
  return out;
}

// carrier exp(X) for X ∈ 𝔞 (diagonal in these coordinates, so exact per entry)
template <typename S>
MatX<S> exp_cartan(const MatrixGroup& mg, const VecX<S>& x) {
  using std::exp;
  int d = carrier_dim(mg);
  MatX<S> g = MatX<S>::Identity(d, d);
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    for (int i = 0; i < mg.q; ++i) {
      g(i, i) = exp(x[i]);
      g(d - 1 - i, d - 1 - i) = exp(S(-x[i]));
    }
  } else {
    for (int i = 0; i < d; ++i) g(i, i) = exp(x[i]);
  }
  return g;
}

template <typename S>
S membership_residual(const MatrixGroup& mg, const MatX<S>& carrier) {
  using std::abs;
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    MatX<S> J = rat_to<S>(mg.form_J);
    MatX<S> r = carrier.transpose() * J * carrier - J;
    S m(0);
    for (int i = 0; i < r.rows(); ++i)
      for (int j = 0; j < r.cols(); ++j) m = std::max(m, S(abs(r(i, j))));
    return m;
  }
  return S(abs(S(carrier.determinant() - S(1))));
}

// ---------------------------------------------------------------------------
// spectral projections

template <typename S>
struct Projection {
  VecX<S> value;  // point of 𝔞⁺ in ambient coordinates
  S residual;     // ℓ∞ mismatch of the full spectral multiset
};

namespace detail {

// sorted (descending) model multiset {λ(x) : λ ∈ Ω with multiplicity}
template <typename S>
VecX<S> weight_multiset(const MatrixGroup& mg, const VecX<S>& x) {
  std::vector<S> vals;
  for (const auto& wb : mg.weight_table) {
    S v(0);
    for (Eigen::Index i = 0; i < wb.lambda.size(); ++i)
      v += scalar_cast<S>(wb.lambda[i]) * x[i];
    for (int m = 0; m < wb.basis.cols(); ++m) vals.push_back(v);
  }
  std::sort(vals.begin(), vals.end(), [](const S& a, const S& b) { return b < a; });
  VecX<S> out(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) out[static_cast<int>(i)] = vals[i];
  return out;
}

template <typename S>
S linf_diff(const VecX<S>& a, const VecX<S>& b) {
  using std::abs;
  S m(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, S(abs(S(a[i] - b[i]))));
  return m;
}

// logs sorted descending -> 𝔞⁺ point, by the kind-specific recovery rule
template <typename S>
VecX<S> recover_cartan_vector(const MatrixGroup& mg, const VecX<S>& carrier_logs) {
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    VecX<S> x(mg.q);
    for (int i = 0; i < mg.q; ++i) x[i] = carrier_logs[i];
    return x;
  }
  VecX<S> x(mg.n);
  S mean(0);
  for (int i = 0; i < mg.n; ++i) mean += carrier_logs[i];
  mean /= S(mg.n);
  for (int i = 0; i < mg.n; ++i) x[i] = carrier_logs[i] - mean;
  return x;
}

// For sl(n) the spectrum of ρ(g) on V comes from the carrier spectrum exactly:
// Ad(g)ᵀAd(g) = Ad(gᵀg) splits over sl(n) ⊕ ℝ·Id, so the B-singular values of
// ρ(g) are {σᵢ/σⱼ, i≠j} ∪ {1}ⁿ⁻¹ (and likewise for eigenvalue moduli). Using
// the product law keeps deep elements representable; the honest residual left
// is the det-one consistency of the carrier logs, folded into the match.
template <typename S>
Projection<S> spectral_match(const MatrixGroup& mg, const VecX<S>& carrier_logs,
                             double tol) {
  using std::abs;
  VecX<S> x = recover_cartan_vector<S>(mg, carrier_logs);
  VecX<S> measured;
  S extra(0);
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    measured = carrier_logs;
  } else {
    int n = mg.n;
    std::vector<S> vals;
    S total(0);
    for (int i = 0; i < n; ++i) {
      total += carrier_logs[i];
      for (int j = 0; j < n; ++j)
        if (i != j) vals.push_back(S(carrier_logs[i] - carrier_logs[j]));
    }
    for (int k = 0; k < n - 1; ++k) vals.push_back(S(0));
    std::sort(vals.begin(), vals.end(), [](const S& a, const S& b) { return b < a; });
    measured.resize(static_cast<int>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) measured[static_cast<int>(i)] = vals[i];
    extra = S(abs(total));
  }
  S res = std::max(linf_diff<S>(measured, weight_multiset<S>(mg, x)), extra);
  if (!(to_double(res) <= tol)) throw MatchResidualTooLarge(to_double(res));
  return {x, res};
}

}  // namespace detail

template <typename S>
Projection<S> cartan_projection(const MatrixGroup& mg, const MatX<S>& carrier,
                                double tol = 1e-6) {
  return detail::spectral_match<S>(mg, log_singular_values<S>(carrier), tol);
}

template <typename S>
Projection<S> jordan_projection(const MatrixGroup& mg, const MatX<S>& carrier,
                                double tol = 1e-6) {
  return detail::spectral_match<S>(mg, log_eigen_moduli(carrier), tol);
}

// ---------------------------------------------------------------------------
// reference splitting of V by the sign of λ(x0)

struct ReferenceSplit {
  RMat v_pos, v_zero, v_neg;  // V^>₀, V^=₀, V^<₀ (exact unit-column bases)
  RMat v_ge, v_le;            // V^≥₀, V^≤₀
  RMat v_t, v_r;              // translation-fixed part of V^=₀ and its complement
};

inline RMat hcat(const RMat& a, const RMat& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  RMat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

inline ReferenceSplit reference_split(const MatrixGroup& mg, const RVec& x0) {
  int dim = mg.dim_V;
  RMat empty(dim, 0);
  ReferenceSplit rsp{empty, empty, empty, empty, empty, empty, empty};
  for (const auto& wb : mg.weight_table) {
    int s = dot(wb.lambda, x0).sign();
    if (s > 0)
      rsp.v_pos = hcat(rsp.v_pos, wb.basis);
    else if (s < 0)
      rsp.v_neg = hcat(rsp.v_neg, wb.basis);
    else
      rsp.v_zero = hcat(rsp.v_zero, wb.basis);
  }
  rsp.v_ge = hcat(rsp.v_pos, rsp.v_zero);
  rsp.v_le = hcat(rsp.v_zero, rsp.v_neg);
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    // L ≅ SO(p−q) spins the middle block; only p−q = 1 leaves a fixed line
    if (mg.p - mg.q == 1) {
      rsp.v_t = rsp.v_zero;
      rsp.v_r = RMat(dim, 0);
    } else {
      rsp.v_t = RMat(dim, 0);
      rsp.v_r = rsp.v_zero;
    }
  } else {
    // the torus centralizes the whole Cartan block
    rsp.v_t = rsp.v_zero;
    rsp.v_r = RMat(dim, 0);
  }
  return rsp;
}

// ---------------------------------------------------------------------------
// canonizing maps

template <typename S>
struct Canonizer {
  MatX<S> phi;      // acts on V, maps (Vge, Vle) to the reference pair
  MatX<S> carrier;  // group element with ρ(carrier) = phi
  S norm_phi, norm_phi_inv;
};

namespace detail {

// columns of A spanning the numerical kernel of M (rank decided by a relative
// singular-value threshold); expected_dim must match or we refuse
template <typename S>
MatX<S> kernel_cols(const MatX<S>& M, int expected_dim, const char* who) {
  Eigen::JacobiSVD<MatX<S>> svd(M, Eigen::ComputeFullV);
  VecX<S> sv = svd.singularValues();
  int total = static_cast<int>(M.cols());
  S top = sv.size() ? sv[0] : S(0);
  double cut = std::is_same_v<S, double> ? 1e-10 : 1e-60;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (to_double(sv[i]) > cut * std::max(1.0, to_double(top))) ++rank;
  if (total - rank != expected_dim)
    throw NotTransverse(std::string(who) + ": kernel dimension " +
                        std::to_string(total - rank) + ", expected " +
                        std::to_string(expected_dim));
  return svd.matrixV().rightCols(expected_dim);
}

}  // namespace detail

template <typename S>
Canonizer<S> canonizer(const MatrixGroup& mg, const RVec& x0, const MatX<S>& Vge,
                       const MatX<S>& Vle) {
  using std::abs;
  using std::sqrt;
  ReferenceSplit ref = reference_split(mg, x0);
  if (Vge.cols() != ref.v_ge.cols() || Vle.cols() != ref.v_le.cols())
    throw NotTransverse("canonizer: subspace dimensions do not match the reference pair");

  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    int d = mg.p + mg.q, q = mg.q, mid = mg.p - mg.q;
    MatX<S> J = rat_to<S>(mg.form_J);
    // V^> is the radical of J restricted to V^≥ (positive weights pair with
    // negative ones, which live outside), and symmetrically for V^<
    MatX<S> u = Vge * detail::kernel_cols<S>(MatX<S>(Vge.transpose() * J * Vge), q,
                                             "canonizer: expanding space");
    MatX<S> w0 = Vle * detail::kernel_cols<S>(MatX<S>(Vle.transpose() * J * Vle), q,
                                              "canonizer: contracting space");
    // middle: common kernel of the stacked pair, i.e. Vge ∩ Vle
    MatX<S> stacked(Vge.rows(), Vge.cols() + Vle.cols());
    stacked << Vge, -Vle;
    MatX<S> mixing =
        detail::kernel_cols<S>(stacked, mid, "canonizer: intersection of the pair");
    MatX<S> m = Vge * mixing.topRows(Vge.cols());

    // J-Gram-Schmidt on the middle block (J is positive definite there)
    for (int j = 0; j < mid; ++j) {
      for (int k = 0; k < j; ++k) {
        S c = (m.col(k).transpose() * J * m.col(j))(0, 0);
        m.col(j) -= c * m.col(k);
      }
      S n2 = (m.col(j).transpose() * J * m.col(j))(0, 0);
      if (!(to_double(n2) > 0)) throw NotTransverse("canonizer: middle block not definite");
      m.col(j) /= sqrt(n2);
    }
    // pair w to u: J(u_i, w_j) = δ_ij
    MatX<S> G = u.transpose() * J * w0;
    MatX<S> w = w0 * G.fullPivLu().solve(MatX<S>::Identity(q, q));

    MatX<S> C(d, d);
    for (int i = 0; i < q; ++i) C.col(i) = u.col(i);
    for (int j = 0; j < mid; ++j) C.col(q + j) = m.col(j);
    for (int i = 0; i < q; ++i) C.col(d - 1 - i) = w.col(i);
    // Gram sanity: C must carry J to itself
    S gram_res = S(0);
    MatX<S> JG = C.transpose() * J * C - J;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gram_res = std::max(gram_res, S(abs(JG(i, j))));
    if (to_double(gram_res) > (std::is_same_v<S, double> ? 1e-6 : 1e-40))
      throw NotTransverse("canonizer: input pair is not conjugate to the reference pair");
    if (mid > 0 && to_double(C.determinant()) < 0) C.col(q) = -C.col(q);

    Canonizer<S> out;
    out.phi = C.fullPivLu().solve(MatX<S>::Identity(d, d));
    out.carrier = out.phi;
    out.norm_phi = spectral_norm<S>(out.phi);
    out.norm_phi_inv = spectral_norm<S>(C);
    return out;
  }

  // sl(n) adjoint: diagonalize a generic middle element to find the frame,
  // order the axes by which off-diagonal directions fall into Vge
  int n = mg.n, dim = mg.dim_V;
  MatX<S> stacked(dim, Vge.cols() + Vle.cols());
  stacked << Vge, -Vle;
  MatX<S> mixing = detail::kernel_cols<S>(stacked, n - 1, "canonizer: intersection of the pair");
  MatX<S> mids = Vge * mixing.topRows(Vge.cols());

  MatX<double> Zd = MatX<double>::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    MatX<S> Zk = sl_coords_to_mat<S>(mg, VecX<S>(mids.col(k)));
    double wgt = 1.0 + 0.37 * k;  // deterministic generic combination
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Zd(i, j) += wgt * to_double(Zk(i, j));
  }
  Eigen::EigenSolver<MatX<double>> es(Zd, true);
  MatX<double> P(n, n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()[i].imag()) > 1e-9 * (1.0 + std::abs(es.eigenvalues()[i].real())))
      throw NotTransverse("canonizer: frame element is not real-diagonalizable");
    for (int r = 0; r < n; ++r) P(r, i) = es.eigenvectors()(r, i).real();
  }

  // tournament: axis a ranks above b when the frame direction E_ab lies in Vge
  MatX<S> Ps = MatX<S>::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Ps(i, j) = scalar_cast<S>(P(i, j));
  MatX<S> Pinv = Ps.fullPivLu().solve(MatX<S>::Identity(n, n));
  MatX<S> Qge = orthonormalize<S>(Vge);
  std::vector<int> wins(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      MatX<S> E = MatX<S>::Zero(n, n);
      E(a, b) = S(1);
      VecX<S> v = sl_mat_to_coords<S>(mg, MatX<S>(Ps * E * Pinv));
      S vn(0), pn(0);
      VecX<S> proj = Qge * (Qge.transpose() * v);
      for (int i = 0; i < dim; ++i) {
        vn += v[i] * v[i];
        pn += (v[i] - proj[i]) * (v[i] - proj[i]);
      }
      if (to_double(pn) < 1e-12 * to_double(vn)) ++wins[a];
    }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return wins[a] > wins[b]; });
  for (int i = 0; i + 1 < n; ++i)
    if (wins[order[i]] == wins[order[i + 1]])
      throw NotTransverse("canonizer: axis ordering is ambiguous");

  MatX<S> Pord(n, n);
  for (int i = 0; i < n; ++i) Pord.col(i) = Ps.col(order[i]);
  using std::exp;
  using std::log;
  S det = Pord.determinant();
  S scale = exp(S(log(S(abs(det))) / S(n)));
  Pord /= scale;

  Canonizer<S> out;
  MatX<S> Pord_inv = Pord.fullPivLu().solve(MatX<S>::Identity(n, n));
  out.phi = MatX<S>(rho<S>(mg, Pord_inv));
  out.carrier = Pord_inv;
  out.norm_phi = spectral_norm<S>(out.phi);
  out.norm_phi_inv = S(S(1) / singular_values<S>(out.phi)[dim - 1]);
  return out;
}

// ---------------------------------------------------------------------------
// the longest-element representative and its action on the fixed space

struct FixedSpaceAction {
  MatX<double> carrier;   // a representative of w₀ in the group
  MatX<double> basis;     // columns: orthonormal basis of V^t₀ inside V
  MatX<double> action;    // matrix of the representative on V^t₀ in that basis
};

inline FixedSpaceAction w0_action_on_fixed_space(const MatrixGroup& mg) {
  FixedSpaceAction out;
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    int d = mg.p + mg.q, q = mg.q;
    MatX<double> W = MatX<double>::Zero(d, d);
    for (int i = 0; i < q; ++i) {
      W(d - 1 - i, i) = -1.0;
      W(i, d - 1 - i) = -1.0;
    }
    for (int i = q; i < d - q; ++i) W(i, i) = 1.0;
    if (d > 2 * q) W(d - q - 1, d - q - 1) = (q % 2 == 0) ? 1.0 : -1.0;  // det = +1
    out.carrier = W;
    ReferenceSplit ref = reference_split(mg, [&] {
      RVec x = RVec::Constant(q, Rat(0));
      for (int i = 0; i < q; ++i) x[i] = Rat(q - i);
      return x;
    }());
    out.basis = rat_to<double>(ref.v_t);
    out.action = out.basis.transpose() * W * out.basis;
    return out;
  }
  int n = mg.n;
  MatX<double> R = MatX<double>::Zero(n, n);
  for (int i = 0; i < n; ++i) R(i, n - 1 - i) = 1.0;
  int inversions = n * (n - 1) / 2;
  if (inversions % 2 == 1) R.col(0) = -R.col(0);  // det = +1; Ad is unaffected
  out.carrier = R;
  MatX<double> big = rho<double>(mg, R);
  RVec x = RVec::Constant(n, Rat(0));
  for (int i = 0; i < n; ++i) x[i] = Rat(2 * (n - i)) - Rat(n + 1);
  ReferenceSplit ref = reference_split(mg, x);
  out.basis = rat_to<double>(ref.v_t);
  out.action = out.basis.transpose() * big * out.basis;
  return out;
}

// ---------------------------------------------------------------------------
// exact generators for building honest group elements in tests and sampling

// rational basis of 𝔨 = {A : Aᵀ = −A and (JA)ᵀ = −JA}; Cayley transforms of
// its rational points are exact elements of K
inline std::vector<RMat> compact_algebra_basis(const MatrixGroup& mg) {
  int d = carrier_dim(mg);
  RMat J = mg.kind == MatrixGroup::Kind::so_pq_standard ? mg.form_J : RMat::Identity(d, d);
  // coordinates: strict upper triangle of the skew matrix A
  int nvar = d * (d - 1) / 2;
  auto unpack = [&](const RVec& c) {
    RMat A = RMat::Constant(d, d, Rat(0));
    int k = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        A(i, j) = c[k];
        A(j, i) = -c[k];
        ++k;
      }
    return A;
  };
  // constraint: JA + (JA)ᵀ = 0, linear in the coordinates
  std::vector<RVec> rows;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      RVec row = RVec::Constant(nvar, Rat(0));
      for (int k = 0, a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b, ++k) {
          // coefficient of c_k in (JA)(i,j) + (JA)(j,i)
          row[k] += J(i, a) * Rat(b == j ? 1 : 0) - J(i, b) * Rat(a == j ? 1 : 0);
          row[k] += J(j, a) * Rat(b == i ? 1 : 0) - J(j, b) * Rat(a == i ? 1 : 0);
        }
      rows.push_back(row);
    }
  RMat M(static_cast<int>(rows.size()), nvar);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < nvar; ++c) M(static_cast<int>(r), c) = rows[r][c];
  Eigen::FullPivLU<RMat> lu(M);
  RMat null = lu.kernel();
  std::vector<RMat> out;
  for (int c = 0; c < null.cols(); ++c) out.push_back(unpack(null.col(c)));
  return out;
}

// Cayley transform (I − A)(I + A)⁻¹: an exact rational element of K for
// rational A in the compact algebra.
inline RMat cayley(const RMat& A) {
  int d = static_cast<int>(A.rows());
  RMat I = RMat::Identity(d, d);
  Eigen::FullPivLU<RMat> lu(RMat(I + A));
  if (lu.rank() != d) throw std::invalid_argument("cayley: I + A is singular");
  return lu.solve(RMat(I - A)).eval();  // (I−A) and (I+A)⁻¹ commute
}

}  // namespace aff
