#include "aff/scalar.hpp"

#include <Eigen/LU>
#include <sstream>

#include "doctest.h"

using aff::BigFloat;
using aff::Rat;

TEST_CASE("rational arithmetic and canonical form") {
  Rat a(2, 4);
  CHECK(a == Rat(1, 2));
  CHECK(a.str() == "1/2");
  CHECK((a + Rat(1, 3)).str() == "5/6");
  CHECK((a * Rat(-4, 3)).str() == "-2/3");
  CHECK((Rat(7) / Rat(2)).str() == "7/2");
  CHECK(Rat(-6, -4) == Rat(3, 2));
  CHECK(Rat(0).is_zero());
  CHECK(Rat(5, 1).is_integer());
  CHECK_THROWS(Rat(1, 0));
  CHECK_THROWS(Rat(1) / Rat(0));
}

TEST_CASE("rational parsing round-trip") {
  CHECK(Rat::parse("3/4") == Rat(3, 4));
  CHECK(Rat::parse("-3/6") == Rat(-1, 2));
  CHECK(Rat::parse("12") == Rat(12));
  CHECK(Rat::parse("-0.25") == Rat(-1, 4));
  CHECK(Rat::parse("1.5") == Rat(3, 2));
  CHECK_THROWS(Rat::parse("x"));
  CHECK_THROWS(Rat::parse("1/0"));
  for (const char* s : {"5/3", "-7", "0", "22/7"}) {
    Rat r = Rat::parse(s);
    CHECK(Rat::parse(r.str()) == r);
  }
}

TEST_CASE("rational comparisons avoid double rounding") {
  Rat big = Rat(1000000007L) * Rat(1000000009L);
  Rat bigger = big + Rat(1, 1000000000L);
  CHECK(big < bigger);
  CHECK(aff::abs(Rat(-5, 3)) == Rat(5, 3));
}

TEST_CASE("exact linear solve through Eigen") {
  aff::RMat m(3, 3);
  m << Rat(2), Rat(1), Rat(0), Rat(1), Rat(3), Rat(1), Rat(0), Rat(1), Rat(4);
  aff::RVec b(3);
  b << Rat(1), Rat(0), Rat(2);
  Eigen::FullPivLU<aff::RMat> lu(m);
  aff::RVec x = lu.solve(b);
  aff::RVec r = m * x - b;
  for (int i = 0; i < 3; ++i) CHECK(r[i].is_zero());
  CHECK(lu.rank() == 3);
  // determinant of the exact matrix: 2*(12-1) - 1*(4-0) = 18
  CHECK(lu.determinant() == Rat(18));
}

TEST_CASE("big float basics at 256 bits") {
  BigFloat x(2.0);
  BigFloat s = sqrt(x);
  BigFloat err = abs(s * s - x);
  CHECK(err.to_double() < 1e-70);
  CHECK(BigFloat(1.0) + BigFloat(1.0).ldexp2(-200) > BigFloat(1.0));
  CHECK(abs(BigFloat(-3.5)).to_double() == 3.5);
}

TEST_CASE("big float log and exp") {
  BigFloat e1 = aff::exp(BigFloat(1.0));
  CHECK(std::abs(e1.to_double() - 2.718281828459045) < 1e-15);
  // round-trip at extreme magnitudes that double cannot hold relative to 1
  for (double t : {-70.0, -3.25, 0.5, 42.0, 80.0}) {
    BigFloat y = aff::exp(BigFloat(t));
    BigFloat back = aff::log(y);
    CHECK(abs(back - BigFloat(t)).to_double() < 1e-70);
  }
  BigFloat tiny = aff::exp(BigFloat(-200.0));
  CHECK(aff::log(tiny).to_double() == doctest::Approx(-200.0).epsilon(1e-12));
  CHECK_THROWS(aff::log(BigFloat(0.0)));
}

TEST_CASE("big float keeps precision across huge dynamic range") {
  // (1e20 + 1e-20) - 1e20 == 1e-20 exactly at 256 bits
  BigFloat big = aff::exp(BigFloat(46.0517018598809136804));  // ~1e20
  BigFloat small = BigFloat(1.0) / big;
  // absolute rounding of big+small is ~1e20 * 2^-256, i.e. ~1e-57
  BigFloat diff = (big + small) - big;
  CHECK(abs(diff - small).to_double() / small.to_double() < 1e-30);
}

TEST_CASE("big float Eigen matrix product and LU") {
  aff::FMat m(2, 2);
  m << BigFloat(1.0), BigFloat(2.0), BigFloat(3.0), BigFloat(4.0);
  aff::FMat m2 = m * m;
  CHECK(m2(0, 0).to_double() == 7.0);
  Eigen::FullPivLU<aff::FMat> lu(m);
  aff::FMat inv = lu.inverse();
  aff::FMat id = m * inv;
  CHECK(abs(id(0, 1)).to_double() < 1e-70);
  CHECK(abs(id(0, 0) - BigFloat(1.0)).to_double() < 1e-70);
}
