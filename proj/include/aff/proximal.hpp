#pragma once

// Proximal maps on a Euclidean space: attracting line, repelling hyperplane,
// proximal contraction strength, exterior powers in the lexicographic wedge
// basis, and angle metrics between subspaces.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "aff/numeric.hpp"
#include "aff/scalar.hpp"

namespace aff {

struct NotProximal : std::runtime_error {
  explicit NotProximal(const std::string& what) : std::runtime_error(what) {}
};

// κ̃ < 1 is required for the data to exist; E = E^s ⊕ E^u with E^s the top
// eigenline and E^u the invariant complement, stored by its unit normal.
template <typename S>
struct ProximalData {
  S spectral_radius;         // |λ1|
  S gap;                     // κ̃ = |λ2| / |λ1|
  VecX<S> attracting;        // unit vector spanning E^s
  VecX<S> repelling_normal;  // unit normal of E^u
  S strength;                // s̃ = ‖γ|E^u‖ / |λ1|
};

namespace detail {

// sign fixed so the largest-magnitude entry is positive; keeps reports stable
template <typename S>
VecX<S> oriented_unit(VecX<S> v) {
  using std::abs;
  v /= v.norm();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (abs(v[i]) > abs(v[best])) best = i;
  if (to_double(v[best]) < 0) v = -v;
  return v;
}

template <typename S>
struct LeadingDirection {
  VecX<S> dir;  // unit, spans the top-modulus invariant line
  S top;        // |λ1|
  S gap;        // |λ2| / |λ1|
  bool real_leading;
};

inline LeadingDirection<double> leading_direction(const MatX<double>& m) {
  Eigen::EigenSolver<MatX<double>> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("leading_direction: eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  Eigen::Index top = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev[i]) > std::abs(ev[top])) top = i;
  double m1 = std::abs(ev[top]), m2 = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != top) m2 = std::max(m2, std::abs(ev[i]));
  bool real_leading = std::abs(ev[top].imag()) <= 1e-9 * std::max(m1, 1e-300);
  VecX<double> v = es.eigenvectors().col(top).real();
  if (v.norm() == 0.0) v = VecX<double>::Unit(m.rows(), 0);
  return {oriented_unit<double>(v), m1, m1 > 0 ? m2 / m1 : 1.0, real_leading};
}

// Wide path: subspace iteration. Converges for the gap sizes this scalar is
// used at (deep contraction); marginal gaps fail the residual gate downstream.
inline LeadingDirection<BigFloat> leading_direction(const MatX<BigFloat>& m) {
  ModulusFlag<BigFloat> f = modulus_flag<BigFloat>(m);
  return {oriented_unit<BigFloat>(VecX<BigFloat>(f.Q.col(0))), exp(f.logmod[0]),
          exp(BigFloat(f.logmod[1] - f.logmod[0])), true};
}

// orthonormal basis of the hyperplane normal to n
template <typename S>
MatX<S> hyperplane_basis(const VecX<S>& n) {
  const Eigen::Index d = n.size();
  Eigen::HouseholderQR<MatX<S>> qr{MatX<S>(n)};
  MatX<S> Q = qr.householderQ() * MatX<S>::Identity(d, d);
  return Q.rightCols(d - 1);
}

// p-element subsets of {0,…,d−1} in lexicographic order. This order is the
// wedge basis order everywhere, including serialized reports.
inline std::vector<std::vector<int>> lex_subsets(int d, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(p);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = p - 1;
    while (i >= 0 && cur[i] == d - p + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

template <typename S>
ProximalData<S> proximal_data(const MatX<S>& g, double tol = 1e-6) {
  using std::abs;
  if (g.rows() != g.cols() || g.rows() < 2)
    throw std::invalid_argument("proximal_data: square matrix of size >= 2 required");
  detail::LeadingDirection<S> right = detail::leading_direction(g);
  if (!right.real_leading) throw NotProximal("leading eigenvalue pair is complex");
  if (to_double(right.top) == 0.0) throw NotProximal("zero spectral radius");
  if (to_double(right.gap) > 1.0 - tol)
    throw NotProximal("proximal spectral gap " + std::to_string(to_double(right.gap)) +
                      " exceeds 1 - tol");
  detail::LeadingDirection<S> left = detail::leading_direction(MatX<S>(g.transpose()));

  // certify both directions as genuine eigenvectors
  VecX<S> gv = g * right.dir;
  S lam = right.dir.dot(gv);
  S resid = (gv - lam * right.dir).norm();
  VecX<S> gw = g.transpose() * left.dir;
  S laml = left.dir.dot(gw);
  resid = std::max(resid, S((gw - laml * left.dir).norm()));
  if (to_double(resid) > 1e-6 * std::max(std::abs(to_double(lam)), 1e-300))
    throw NotProximal("leading direction not certified: eigenvector residual " +
                      std::to_string(to_double(resid)));

  MatX<S> W = detail::hyperplane_basis<S>(left.dir);
  S restr = spectral_norm<S>(MatX<S>(g * W));
  return {right.top, right.gap, right.dir, left.dir, S(restr / right.top)};
}

// ---------------------------------------------------------------------------
// exterior powers

template <typename S>
MatX<S> exterior_power(const MatX<S>& g, int p) {
  const int d = static_cast<int>(g.rows());
  if (g.cols() != d) throw std::invalid_argument("exterior_power: square matrix required");
  if (p < 1 || p > d) throw std::invalid_argument("exterior_power: order out of range");
  const auto sets = detail::lex_subsets(d, p);
  const int n = static_cast<int>(sets.size());
  MatX<S> out(n, n);
  MatX<S> minor(p, p);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) minor(i, j) = g(sets[a][i], sets[b][j]);
      out(a, b) = minor.determinant();
    }
  return out;
}

// Wedge coordinates of the column span of a d×p matrix, in the same basis
// order as exterior_power; exterior_power(g,p) · wedge_vector(U) = wedge_vector(gU).
template <typename S>
VecX<S> wedge_vector(const MatX<S>& U) {
  const int d = static_cast<int>(U.rows()), p = static_cast<int>(U.cols());
  if (p < 1 || p > d) throw std::invalid_argument("wedge_vector: column count out of range");
  const auto sets = detail::lex_subsets(d, p);
  VecX<S> out(static_cast<int>(sets.size()));
  MatX<S> minor(p, p);
  for (size_t a = 0; a < sets.size(); ++a) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) minor(i, j) = U(sets[a][i], j);
    out[static_cast<int>(a)] = minor.determinant();
  }
  return out;
}

// ---------------------------------------------------------------------------
// angles

// Principal angles between column spans, ascending, radians. Cosines come from
// the product SVD, sines from the projection residual; atan2 is stable at both
// ends of the range.
template <typename S>
std::vector<double> principal_angles(const MatX<S>& U, const MatX<S>& W) {
  MatX<S> Qa = orthonormalize<S>(U), Qb = orthonormalize<S>(W);
  if (Qa.cols() > Qb.cols()) std::swap(Qa, Qb);
  const int m = static_cast<int>(Qa.cols());
  VecX<S> c = singular_values<S>(MatX<S>(Qa.transpose() * Qb));
  VecX<S> s = singular_values<S>(MatX<S>(Qa - Qb * (Qb.transpose() * Qa)));
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = std::atan2(to_double(s[m - 1 - i]), to_double(c[i]));
  return out;
}

// minimum angle between unit vectors of the two spans
template <typename S>
double subspace_angle(const MatX<S>& U, const MatX<S>& W) {
  return principal_angles<S>(U, W).front();
}

template <typename S>
double subspace_angle(const VecX<S>& u, const VecX<S>& w) {
  return subspace_angle<S>(MatX<S>(u), MatX<S>(w));
}

// Hausdorff angle between subspaces as subsets of projective space: the
// largest principal angle for equal dimensions, π/2 otherwise.
template <typename S>
double hausdorff_angle(const MatX<S>& U, const MatX<S>& W) {
  if (U.cols() != W.cols()) return std::numbers::pi / 2;
  return principal_angles<S>(U, W).back();
}

// ---------------------------------------------------------------------------
// products

template <typename S>
struct ProximalProductReport {
  ProximalData<S> left, right, product;
  double attracting_shift;  // α(E^s of the product, E^s of the left factor)
  double shift_ratio;       // attracting_shift / s̃(left)
  double strength_ratio;    // s̃(product) / (s̃(left) s̃(right))
  double radius_ratio;      // r(product) / (‖left‖ ‖right‖)
  double nondegeneracy;     // supplied pair bound, echoed into reports
};

template <typename S>
ProximalProductReport<S> check_proximal_product(const MatX<S>& g1, const MatX<S>& g2,
                                                double cbar, double tol = 1e-6) {
  ProximalProductReport<S> out{proximal_data<S>(g1, tol),
                               proximal_data<S>(g2, tol),
                               proximal_data<S>(MatX<S>(g1 * g2), tol),
                               0,
                               0,
                               0,
                               0,
                               cbar};
  out.attracting_shift = subspace_angle<S>(out.product.attracting, out.left.attracting);
  out.shift_ratio = out.attracting_shift / to_double(out.left.strength);
  out.strength_ratio =
      to_double(S(out.product.strength / (out.left.strength * out.right.strength)));
  out.radius_ratio = to_double(
      S(out.product.spectral_radius / (spectral_norm<S>(g1) * spectral_norm<S>(g2))));
  return out;
}

}  // namespace aff
