#pragma once

// Scalar types for the two arithmetic layers: exact rationals (combinatorial
// layer) and fixed-precision big floats (quantitative layer). Both wrap GMP
// with eager operators so they can serve as Eigen scalars.

#include <gmp.h>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace aff {

// ---------------------------------------------------------------------------
// Rat: arbitrary-precision rational, always canonical.

class Rat {
 public:
  Rat() { mpq_init(v_); }
  Rat(long n) {  // NOLINT(google-explicit-constructor)
    mpq_init(v_);
    mpq_set_si(v_, n, 1);
  }
  Rat(int n) : Rat(static_cast<long>(n)) {}  // NOLINT
  Rat(long num, long den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    mpq_init(v_);
    mpq_set_si(v_, num, static_cast<unsigned long>(den));
    mpq_canonicalize(v_);
  }
  Rat(const Rat& o) {
    mpq_init(v_);
    mpq_set(v_, o.v_);
  }
  Rat(Rat&& o) noexcept {
    mpq_init(v_);
    mpq_swap(v_, o.v_);
  }
  ~Rat() { mpq_clear(v_); }

  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(v_, o.v_);
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    mpq_swap(v_, o.v_);
    return *this;
  }

  // Exact binary expansion of a finite double.
  static Rat from_double(double x) {
    if (!(x == x) || x - x != 0.0) throw std::invalid_argument("Rat: non-finite double");
    Rat r;
    mpq_set_d(r.v_, x);
    return r;
  }

  // Parses "p", "p/q", or a plain decimal like "-1.25".
  static Rat parse(const std::string& s) {
    Rat r;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      if (mpq_set_str(r.v_, (num + "/" + den).c_str(), 10) != 0)
        throw std::invalid_argument("Rat: cannot parse '" + s + "'");
      if (mpz_sgn(mpq_denref(r.v_)) == 0)
        throw std::invalid_argument("Rat: zero denominator in '" + s + "'");
      mpq_canonicalize(r.v_);
      return r;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      size_t frac = s.size() - dot - 1;
      if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("Rat: cannot parse '" + s + "'");
      Rat num;
      if (mpz_set_str(mpq_numref(num.v_), digits.c_str(), 10) != 0)
        throw std::invalid_argument("Rat: cannot parse '" + s + "'");
      mpz_ui_pow_ui(mpq_denref(num.v_), 10, frac);
      mpq_canonicalize(num.v_);
      return num;
    }
    if (mpq_set_str(r.v_, s.c_str(), 10) != 0)
      throw std::invalid_argument("Rat: cannot parse '" + s + "'");
    return r;
  }

  std::string str() const {
    char* raw = mpq_get_str(nullptr, 10, v_);
    std::string out(raw);
    std::free(raw);
    return out;
  }

  double to_double() const { return mpq_get_d(v_); }
  int sign() const { return mpq_sgn(v_); }
  bool is_zero() const { return mpq_sgn(v_) == 0; }

  bool is_integer() const { return mpz_cmp_ui(mpq_denref(v_), 1) == 0; }
  long num_long() const { return mpz_get_si(mpq_numref(v_)); }
  long den_long() const { return mpz_get_si(mpq_denref(v_)); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    Rat r;
    mpq_add(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    Rat r;
    mpq_sub(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    Rat r;
    mpq_mul(r.v_, a.v_, b.v_);
    return r;
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw std::domain_error("Rat: division by zero");
    Rat r;
    mpq_div(r.v_, a.v_, b.v_);
    return r;
  }
  Rat operator-() const {
    Rat r;
    mpq_neg(r.v_, v_);
    return r;
  }
  Rat& operator+=(const Rat& o) {
    mpq_add(v_, v_, o.v_);
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    mpq_sub(v_, v_, o.v_);
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    mpq_mul(v_, v_, o.v_);
    return *this;
  }
  Rat& operator/=(const Rat& o) {
    *this = *this / o;
    return *this;
  }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.v_, b.v_) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return mpq_cmp(a.v_, b.v_) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

  const __mpq_struct* raw() const { return v_; }

 private:
  mpq_t v_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

// ---------------------------------------------------------------------------
// BigFloat: fixed-precision (512-bit) floating point.

class BigFloat {
 public:
  static mp_bitcnt_t precision() { return 512; }

  BigFloat() { mpf_init2(v_, precision()); }
  BigFloat(double d) {  // NOLINT(google-explicit-constructor)
    mpf_init2(v_, precision());
    mpf_set_d(v_, d);
  }
  BigFloat(int n) : BigFloat(static_cast<double>(n)) {}   // NOLINT
  BigFloat(long n) {                                      // NOLINT
    mpf_init2(v_, precision());
    mpf_set_si(v_, n);
  }
  explicit BigFloat(const Rat& q) {
    mpf_init2(v_, precision());
    mpf_set_q(v_, q.raw());
  }
  BigFloat(const BigFloat& o) {
    mpf_init2(v_, precision());
    mpf_set(v_, o.v_);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpf_init2(v_, precision());
    mpf_swap(v_, o.v_);
  }
  ~BigFloat() { mpf_clear(v_); }

  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpf_set(v_, o.v_);
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpf_swap(v_, o.v_);
    return *this;
  }

  double to_double() const { return mpf_get_d(v_); }
  // Mantissa in [0.5, 1) and binary exponent, as for frexp.
  double to_double_2exp(long* exp2) const { return mpf_get_d_2exp(exp2, v_); }
  int sign() const { return mpf_sgn(v_); }
  bool is_zero() const { return mpf_sgn(v_) == 0; }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpf_add(r.v_, a.v_, b.v_);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpf_sub(r.v_, a.v_, b.v_);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r;
    mpf_mul(r.v_, a.v_, b.v_);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    if (b.is_zero()) throw std::domain_error("BigFloat: division by zero");
    BigFloat r;
    mpf_div(r.v_, a.v_, b.v_);
    return r;
  }
  BigFloat operator-() const {
    BigFloat r;
    mpf_neg(r.v_, v_);
    return r;
  }
  BigFloat& operator+=(const BigFloat& o) {
    mpf_add(v_, v_, o.v_);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    mpf_sub(v_, v_, o.v_);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpf_mul(v_, v_, o.v_);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    *this = *this / o;
    return *this;
  }

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpf_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return mpf_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpf_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpf_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpf_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpf_cmp(a.v_, b.v_) >= 0; }

  friend BigFloat sqrt(const BigFloat& a) {
    if (a.sign() < 0) throw std::domain_error("BigFloat: sqrt of negative");
    BigFloat r;
    mpf_sqrt(r.v_, a.v_);
    return r;
  }
  friend BigFloat abs(const BigFloat& a) {
    BigFloat r;
    mpf_abs(r.v_, a.v_);
    return r;
  }
  friend BigFloat floor(const BigFloat& a) {
    BigFloat r;
    mpf_floor(r.v_, a.v_);
    return r;
  }
  friend BigFloat ceil(const BigFloat& a) {
    BigFloat r;
    mpf_ceil(r.v_, a.v_);
    return r;
  }
  // Scale by a power of two, exactly.
  BigFloat ldexp2(long e) const {
    BigFloat r;
    if (e >= 0)
      mpf_mul_2exp(r.v_, v_, static_cast<mp_bitcnt_t>(e));
    else
      mpf_div_2exp(r.v_, v_, static_cast<mp_bitcnt_t>(-e));
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const BigFloat& a) {
    return os << a.to_double();
  }

 private:
  mpf_t v_;
};

inline bool isfinite(const BigFloat&) { return true; }
inline bool isnan(const BigFloat&) { return false; }
inline bool isinf(const BigFloat&) { return false; }
inline BigFloat hypot(const BigFloat& a, const BigFloat& b) { return sqrt(a * a + b * b); }

namespace detail {
inline const BigFloat& ln2() {
  // ln 2 = 2 atanh(1/3); the series in z = 1/3 gains ~3.1 bits per term.
  static const BigFloat value = [] {
    BigFloat z(1.0);
    z /= BigFloat(3.0);
    BigFloat z2 = z * z, term = z, sum = z;
    int terms = static_cast<int>(BigFloat::precision() / 3) + 24;  // ~3.17 bits/term
    for (int k = 1; k < terms; ++k) {
      term *= z2;
      sum += term / BigFloat(2 * k + 1);
    }
    return sum + sum;
  }();
  return value;
}
}  // namespace detail

// Natural log; input must be positive. Accurate to ~1 ulp at working precision.
inline BigFloat log(const BigFloat& x) {
  if (x.sign() <= 0) throw std::domain_error("BigFloat: log of nonpositive");
  long e = 0;
  (void)x.to_double_2exp(&e);
  // m = x / 2^e lies in [0.5, 1); ln x = ln m + e ln 2, ln m via 2 atanh((m-1)/(m+1)).
  BigFloat m = x.ldexp2(-e);
  BigFloat z = (m - BigFloat(1.0)) / (m + BigFloat(1.0));
  BigFloat z2 = z * z, term = z, sum = z;
  long cutoff = -static_cast<long>(BigFloat::precision()) - 40;
  int terms = static_cast<int>(BigFloat::precision() / 3) + 24;
  for (int k = 1; k < terms; ++k) {
    term *= z2;
    sum += term / BigFloat(2 * k + 1);
    long te = 0;
    (void)term.to_double_2exp(&te);
    if (k > 8 && (term.sign() == 0 || te < cutoff)) break;
  }
  return sum + sum + BigFloat(static_cast<long>(e)) * detail::ln2();
}

// exp(x) via power-of-two range reduction and the Taylor series on |r| < ln 2 / 2.
inline BigFloat exp(const BigFloat& x) {
  double xd = x.to_double();
  long n = static_cast<long>(xd / 0.6931471805599453 + (xd >= 0 ? 0.5 : -0.5));
  BigFloat r = x - BigFloat(n) * detail::ln2();
  BigFloat term(1.0), sum(1.0);
  long cutoff = -static_cast<long>(BigFloat::precision()) - 40;
  for (int k = 1; k < 200; ++k) {
    term *= r / BigFloat(k);
    sum += term;
    long te = 0;
    (void)term.to_double_2exp(&te);
    if (k > 8 && (term.sign() == 0 || te < cutoff)) break;
  }
  return sum.ldexp2(n);
}

// ---------------------------------------------------------------------------
// Scalar conversion helpers shared by the layers.

template <class S>
struct scalar_cast_impl;

template <>
struct scalar_cast_impl<double> {
  static double from(const Rat& q) { return q.to_double(); }
  static double from(double d) { return d; }
  static double from(const BigFloat& f) { return f.to_double(); }
};

template <>
struct scalar_cast_impl<BigFloat> {
  static BigFloat from(const Rat& q) { return BigFloat(q); }
  static BigFloat from(double d) { return BigFloat(d); }
  static BigFloat from(const BigFloat& f) { return f; }
};

template <class S, class T>
S scalar_cast(const T& v) {
  return scalar_cast_impl<S>::from(v);
}

template <class S>
double to_double(const S& v) {
  return scalar_cast_impl<double>::from(v);
}

// log/exp/sqrt/abs usable generically from templates (double or BigFloat).
using std::abs;
using std::exp;
using std::log;
using std::sqrt;

}  // namespace aff

namespace Eigen {

template <>
struct NumTraits<aff::Rat> {
  using Real = aff::Rat;
  using NonInteger = aff::Rat;
  using Nested = aff::Rat;
  using Literal = aff::Rat;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 60,
    MulCost = 60,
  };
  static aff::Rat epsilon() { return aff::Rat(0); }
  static aff::Rat dummy_precision() { return aff::Rat(0); }
  static int digits10() { return 0; }
  static aff::Rat highest() { return aff::Rat(1000000000L) * aff::Rat(1000000000L); }
  static aff::Rat lowest() { return -highest(); }
};

template <>
struct NumTraits<aff::BigFloat> {
  using Real = aff::BigFloat;
  using NonInteger = aff::BigFloat;
  using Nested = aff::BigFloat;
  using Literal = aff::BigFloat;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 30,
  };
  static aff::BigFloat epsilon() {
    static const aff::BigFloat e =
        aff::BigFloat(1.0).ldexp2(-static_cast<long>(aff::BigFloat::precision()) + 6);
    return e;
  }
  static aff::BigFloat dummy_precision() {
    static const aff::BigFloat e =
        aff::BigFloat(1.0).ldexp2(-static_cast<long>(aff::BigFloat::precision()) + 112);
    return e;
  }
  static int digits10() { return static_cast<int>(aff::BigFloat::precision() * 0.301) - 2; }
  static aff::BigFloat highest() {
    static const aff::BigFloat h = aff::BigFloat(1.0).ldexp2(1000000);
    return h;
  }
  static aff::BigFloat lowest() { return -highest(); }
};

}  // namespace Eigen

namespace aff {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using RMat = MatX<Rat>;
using RVec = VecX<Rat>;
using FMat = MatX<BigFloat>;
using FVec = VecX<BigFloat>;

inline Rat dot(const RVec& a, const RVec& b) {
  Rat s(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Lexicographic order, so exact vectors can key ordered containers.
struct RVecLess {
  bool operator()(const RVec& a, const RVec& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (b[i] < a[i]) return false;
    }
    return false;
  }
};

struct RMatLess {
  bool operator()(const RMat& a, const RMat& b) const {
    if (a.rows() != b.rows()) return a.rows() < b.rows();
    if (a.cols() != b.cols()) return a.cols() < b.cols();
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (a(i, j) < b(i, j)) return true;
        if (b(i, j) < a(i, j)) return false;
      }
    return false;
  }
};

template <class S>
MatX<S> rat_to(const RMat& m) {
  MatX<S> out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = scalar_cast<S>(m(i, j));
  return out;
}

template <class S>
VecX<S> rat_to_vec(const RVec& v) {
  VecX<S> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = scalar_cast<S>(v[i]);
  return out;
}

inline Eigen::MatrixXd to_d(const FMat& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = m(i, j).to_double();
  return out;
}

inline Eigen::VectorXd to_d_vec(const FVec& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i].to_double();
  return out;
}

}  // namespace aff
