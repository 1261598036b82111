#pragma once

// Scalar-generic numeric kernels shared by the matrix-group layers: singular
// values, eigenvalue log-moduli (double via the standard solver, big-float via
// orthogonal iteration to a modulus-ordered flag), matrix exponential, and
// small subspace utilities. Matrices are small (dim ≤ ~24); clarity over blas.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "aff/scalar.hpp"

namespace aff {

template <typename S>
VecX<S> singular_values(const MatX<S>& A) {
  Eigen::JacobiSVD<MatX<S>> svd(A);
  return svd.singularValues();
}

template <typename S>
VecX<S> log_singular_values(const MatX<S>& A) {
  VecX<S> sv = singular_values<S>(A);
  VecX<S> out(sv.size());
  using std::log;
  for (Eigen::Index i = 0; i < sv.size(); ++i) out[i] = log(sv[i]);
  return out;
}

template <typename S>
S spectral_norm(const MatX<S>& A) {
  return singular_values<S>(A)[0];
}

// log |eigenvalues|, sorted descending (natural log)
inline VecX<double> log_eigen_moduli(const MatX<double>& A) {
  Eigen::EigenSolver<MatX<double>> es(A, false);
  VecX<double> out(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double m = std::abs(es.eigenvalues()[i]);
    if (m <= 0.0) throw std::domain_error("log_eigen_moduli: singular matrix");
    out[i] = std::log(m);
  }
  std::sort(out.data(), out.data() + out.size(), std::greater<double>());
  return out;
}

namespace detail {

// coarse base-2 magnitude (0 maps far down)
inline long mag2(const BigFloat& x) {
  if (x.sign() == 0) return -4000000000L;
  long e = 0;
  (void)x.to_double_2exp(&e);
  return e;
}

inline long mag2(double x) {
  if (x == 0.0) return -4000000000L;
  int e = 0;
  (void)std::frexp(x, &e);
  return e;
}

// x scaled by 2^shift, landed in double (safe against double overflow)
inline double scaled_to_double(const BigFloat& x, long shift) {
  return x.ldexp2(shift).to_double();
}

inline double scaled_to_double(double x, long shift) {
  int e = 0;
  double m = std::frexp(x, &e);
  return std::ldexp(m, static_cast<int>(e + shift));
}

template <typename S>
int scalar_precision() {
  return std::is_same_v<S, double> ? 53 : static_cast<int>(BigFloat::precision());
}

template <typename S>
MatX<S> qr_q(const MatX<S>& M) {
  Eigen::HouseholderQR<MatX<S>> qr(M);
  return qr.householderQ() * MatX<S>::Identity(M.rows(), M.cols());
}

}  // namespace detail

// Orthogonal iteration to a modulus-ordered flag: Q orthonormal with Q^T A Q
// block-upper-triangular, eigenvalue moduli descending down the diagonal. The
// leading k columns of Q span the dominant invariant subspace whenever a
// modulus gap separates position k; convergence is checked a posteriori by
// whoever consumes the flag. Per-position log-moduli are read off the diagonal
// in clusters: levels closer than 2^6 in ratio are resolved together by a
// double eigensolve of the rescaled diagonal block.
template <typename S>
struct ModulusFlag {
  MatX<S> Q;
  VecX<S> logmod;  // descending
};

template <typename S>
ModulusFlag<S> modulus_flag(const MatX<S>& A) {
  using std::abs;
  using std::log;
  const int d = static_cast<int>(A.rows());
  if (d == 0) return {MatX<S>(0, 0), VecX<S>(0)};
  const long kGapBits = 6;
  const int prec = detail::scalar_precision<S>();
  const int max_iters = 160 + prec;

  // deterministic jiggle so the start is not pathologically aligned
  MatX<S> Q = MatX<S>::Identity(d, d);
  unsigned long state = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      Q(i, j) += S(static_cast<double>(state >> 11) * 1.1e-22);
    }
  Q = detail::qr_q<S>(Q);
  for (int it = 0; it < max_iters; ++it) {
    Q = detail::qr_q<S>(MatX<S>(A * Q));
    if (it % 16 != 15) continue;
    // early exit: all gapped cuts have converged sub-blocks
    MatX<S> R = Q.transpose() * A * Q;
    long amax = -4000000000L;
    std::vector<long> mag(d);
    for (int i = 0; i < d; ++i) {
      mag[i] = detail::mag2(R(i, i));
      for (int j = 0; j < d; ++j) amax = std::max(amax, detail::mag2(R(i, j)));
    }
    bool done = true;
    for (int cut = 1; cut < d && done; ++cut) {
      if (mag[cut - 1] - mag[cut] < 1) continue;  // inside a cluster, never settles
      for (int i = cut; i < d && done; ++i)
        for (int j = 0; j < cut; ++j)
          if (detail::mag2(R(i, j)) > amax - prec - 8) {
            done = false;
            break;
          }
    }
    if (done) break;
  }
  MatX<S> R = Q.transpose() * A * Q;

  std::vector<long> mag(d);
  for (int i = 0; i < d; ++i) {
    mag[i] = detail::mag2(R(i, i));
    if (mag[i] < -3000000000L) throw std::domain_error("modulus_flag: singular matrix");
  }
  std::vector<S> logs;
  int a = 0;
  while (a < d) {
    int b = a + 1;
    while (b < d && mag[b - 1] - mag[b] < kGapBits) ++b;
    if (b - a == 1) {
      logs.push_back(log(S(abs(R(a, a)))));
    } else {
      long top = *std::max_element(mag.begin() + a, mag.begin() + b);
      if (top - mag[b - 1] > 26)
        throw std::domain_error("modulus_flag: unresolvable eigenvalue cluster");
      MatX<double> block(b - a, b - a);
      for (int i = a; i < b; ++i)
        for (int j = a; j < b; ++j)
          block(i - a, j - a) = detail::scaled_to_double(R(i, j), -top);
      Eigen::EigenSolver<MatX<double>> es(block, false);
      std::vector<double> ms;
      for (int i = 0; i < b - a; ++i) {
        double m = std::abs(es.eigenvalues()[i]);
        if (m <= 0.0) throw std::domain_error("modulus_flag: singular cluster block");
        ms.push_back(std::log(m));
      }
      std::sort(ms.begin(), ms.end(), std::greater<double>());
      // a defective group smears its moduli by ~sqrt(eps) symmetrically around
      // the true value; collapsing near-ties to their log-mean cancels that,
      // so readout below 1e-7 relative resolution is rounded to group means
      for (size_t u = 0; u < ms.size();) {
        size_t v = u + 1;
        while (v < ms.size() && ms[v - 1] - ms[v] <= 1e-7) ++v;
        double mean = 0;
        for (size_t i = u; i < v; ++i) mean += ms[i];
        mean /= static_cast<double>(v - u);
        for (size_t i = u; i < v; ++i) ms[i] = mean;
        u = v;
      }
      S ln2 = log(S(2));
      for (double m : ms) logs.push_back(S(S(m) + S(static_cast<double>(top)) * ln2));
    }
    a = b;
  }
  ModulusFlag<S> out;
  out.Q = Q;
  out.logmod.resize(d);
  for (int i = 0; i < d; ++i) out.logmod[i] = logs[i];
  return out;
}

// Big-float eigenvalue log-moduli via the flag (sorted descending).
inline VecX<BigFloat> log_eigen_moduli(const MatX<BigFloat>& A) {
  FVec lm = modulus_flag<BigFloat>(A).logmod;
  std::sort(lm.data(), lm.data() + lm.size(),
            [](const BigFloat& x, const BigFloat& y) { return y < x; });
  return lm;
}

// Scaling-and-squaring Taylor exponential; fine for the moderate inputs the
// tests and generator synthesis feed it.
template <typename S>
MatX<S> expm(const MatX<S>& A) {
  using std::abs;
  const int d = static_cast<int>(A.rows());
  S maxabs(0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) maxabs = std::max(maxabs, S(abs(A(i, j))));
  int k = 0;
  double m = to_double(maxabs) * d;
  while (m > 0.25 && k < 80) {
    m /= 2;
    ++k;
  }
  MatX<S> B = A;
  for (int i = 0; i < k; ++i) B = MatX<S>(B / S(2));
  MatX<S> term = MatX<S>::Identity(d, d), sum = MatX<S>::Identity(d, d);
  int terms = std::is_same_v<S, double> ? 24 : static_cast<int>(BigFloat::precision() / 2);
  for (int n = 1; n <= terms; ++n) {
    term = MatX<S>(term * B / S(n));
    sum += term;
  }
  for (int i = 0; i < k; ++i) sum = MatX<S>(sum * sum);
  return sum;
}

// Orthonormal basis of the column span (thin Q).
template <typename S>
MatX<S> orthonormalize(const MatX<S>& A) {
  Eigen::HouseholderQR<MatX<S>> qr(A);
  MatX<S> Q = qr.householderQ() * MatX<S>::Identity(A.rows(), A.cols());
  return Q;
}

// Principal angles between the column spans (orthonormalizes internally);
// returns the cosines, sorted descending.
template <typename S>
VecX<S> principal_cosines(const MatX<S>& A, const MatX<S>& B) {
  MatX<S> Qa = orthonormalize<S>(A), Qb = orthonormalize<S>(B);
  return singular_values<S>(MatX<S>(Qa.transpose() * Qb));
}

// Sine of the largest principal angle between two equal-dimension spans
// (stable near zero, unlike acos of the smallest cosine).
template <typename S>
S span_distance(const MatX<S>& A, const MatX<S>& B) {
  MatX<S> Qa = orthonormalize<S>(A), Qb = orthonormalize<S>(B);
  return spectral_norm<S>(MatX<S>(Qa - Qb * (Qb.transpose() * Qa)));
}

}  // namespace aff
