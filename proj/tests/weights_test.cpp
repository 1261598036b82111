#include "aff/weights.hpp"

#include <random>
#include <set>

#include "doctest.h"

using namespace aff;

namespace {

RVec rv(std::initializer_list<long> xs) {
  RVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long x : xs) v[i++] = Rat(x);
  return v;
}

// Brute-force oracle: enumerate λ − Σ cᵢαᵢ over the exact coefficient box and
// keep the points passing the hull inequalities. Different layout from the BFS.
std::set<RVec, RVecLess> oracle_weight_set(const RootSystem& rs, const RVec& lambda) {
  auto fw = fundamental_weights(rs);
  WeylElement w0 = longest_element(rs);
  RVec span_diff = project_to_root_span(rs, RVec(lambda - w0.matrix * lambda));
  RMat S(rs.ambient_dim, rs.rank);
  for (int j = 0; j < rs.rank; ++j)
    for (int i = 0; i < rs.ambient_dim; ++i) S(i, j) = rs.simple_roots[j][i];
  Eigen::FullPivLU<RMat> lu(S.transpose() * S);
  RVec cmax = lu.solve(S.transpose() * span_diff);  // coefficients of λ − w₀λ
  std::vector<long> bound(rs.rank);
  for (int i = 0; i < rs.rank; ++i) {
    REQUIRE(cmax[i].is_integer());
    bound[i] = cmax[i].num_long();
  }
  std::set<RVec, RVecLess> out;
  std::vector<long> c(rs.rank, 0);
  for (;;) {
    RVec mu = lambda;
    for (int i = 0; i < rs.rank; ++i) mu -= Rat(c[i]) * rs.simple_roots[i];
    if (in_orbit_hull(rs, fw, lambda, mu)) out.insert(mu);
    int k = 0;
    while (k < rs.rank && c[k] == bound[k]) c[k++] = 0;
    if (k == rs.rank) break;
    ++c[k];
  }
  return out;
}

}  // namespace

TEST_CASE("validation accepts and rejects the pinned cases") {
  RootSystem b2 = build_root_system("B", 2);
  CHECK_NOTHROW(validate_highest_weight(b2, rv({2, 1})));
  CHECK_THROWS_AS(validate_highest_weight(b2, rv({-1, 0})), NotDominant);
  RVec third(2);
  third[0] = Rat(1, 3);
  third[1] = Rat(0);
  CHECK_THROWS_AS(validate_highest_weight(b2, third), NotIntegral);
  try {
    validate_highest_weight(b2, third);
  } catch (const NotIntegral& e) {
    CHECK(e.index >= 0);
  }
  try {
    validate_highest_weight(b2, rv({-1, 0}));
  } catch (const NotDominant& e) {
    CHECK(e.index == 0);
  }
  // dominant but not in the weight lattice's span is rejected too
  RootSystem a2 = build_root_system("A", 2);
  CHECK_THROWS_AS(validate_highest_weight(a2, rv({1, 1, 1})), NotIntegral);
  CHECK_NOTHROW(validate_highest_weight(a2, rv({2, -1, -1})));
}

TEST_CASE("B2 vector representation has the five pinned weights") {
  RootSystem rs = build_root_system("B", 2);
  WeightSet ws = weight_set(rs, rv({1, 0}));
  CHECK(ws.weights.size() == 5);
  for (auto mu : {rv({1, 0}), rv({-1, 0}), rv({0, 1}), rv({0, -1}), rv({0, 0})})
    CHECK(contains_weight(ws, mu));
  CHECK(has_zero_weight(ws));
}

TEST_CASE("B2 highest weight 2e1+e2 gives 21 weights") {
  RootSystem rs = build_root_system("B", 2);
  WeightSet ws = weight_set(rs, rv({2, 1}));
  CHECK(ws.weights.size() == 21);
  CHECK(contains_weight(ws, rv({-1, 2})));
  CHECK(contains_weight(ws, rv({0, 0})));
  CHECK(!contains_weight(ws, rv({2, 2})));
}

TEST_CASE("A2 highest weight 2e1-e2-e3 gives the 10-point diagram") {
  RootSystem rs = build_root_system("A", 2);
  WeightSet ws = weight_set(rs, rv({2, -1, -1}));
  CHECK(ws.weights.size() == 10);
  CHECK(contains_weight(ws, rv({-1, 2, -1})));
  CHECK(has_zero_weight(ws));
}

TEST_CASE("C4 spin-like representation has 41 weights") {
  RootSystem rs = build_root_system("C", 4);
  WeightSet ws = weight_set(rs, rv({1, 1, 1, 1}));
  CHECK(ws.weights.size() == 41);
  int sign16 = 0, pair24 = 0, zero = 0;
  for (const RVec& mu : ws.weights) {
    int nz = 0;
    bool unit = true;
    for (int i = 0; i < 4; ++i) {
      if (mu[i].sign() != 0) ++nz;
      if (!(abs(mu[i]) == Rat(1)) && mu[i].sign() != 0) unit = false;
    }
    if (nz == 4 && unit) ++sign16;
    if (nz == 2 && unit) ++pair24;
    if (nz == 0) ++zero;
  }
  CHECK(sign16 == 16);
  CHECK(pair24 == 24);
  CHECK(zero == 1);
}

TEST_CASE("zero-weight test agrees with the root-lattice criterion") {
  RootSystem a1 = build_root_system("A", 1);
  RVec w1 = fundamental_weights(a1)[0];
  CHECK(!has_zero_weight(weight_set(a1, w1)));
  CHECK(!in_root_lattice(a1, w1));

  for (const std::string& label : {"A", "B", "C", "G2"}) {
    RootSystem rs = build_root_system(label, label == "G2" ? 2 : 3);
    RVec theta = highest_root(rs);
    WeightSet adj = weight_set(rs, theta);
    CHECK(has_zero_weight(adj));
    CHECK(in_root_lattice(rs, theta));
    // the adjoint weights are the roots plus zero
    CHECK(adj.weights.size() == rs.roots.size() + 1);
  }

  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const char* labels[] = {"A", "B", "C", "BC"};
    RootSystem rs = build_root_system(labels[trial % 4], 2 + trial % 2);
    auto fw = fundamental_weights(rs);
    RVec lam = RVec::Constant(rs.ambient_dim, Rat(0));
    for (int i = 0; i < rs.rank; ++i) lam += Rat(static_cast<long>(rng() % 3)) * fw[i];
    WeightSet ws = weight_set(rs, lam);
    CHECK(has_zero_weight(ws) == in_root_lattice(rs, lam));
  }
}

TEST_CASE("weight sets are Weyl-invariant") {
  for (const std::string& label : {"B", "A", "BC"}) {
    RootSystem rs = build_root_system(label, 2);
    auto fw = fundamental_weights(rs);
    RVec lam = fw[0] + Rat(2) * fw[1];
    WeightSet ws = weight_set(rs, lam);
    for (const auto& w : weyl_group(rs)) {
      for (const RVec& mu : ws.weights) CHECK(contains_weight(ws, RVec(w.matrix * mu)));
    }
  }
}

TEST_CASE("weight strings are saturated") {
  RootSystem rs = build_root_system("B", 2);
  WeightSet ws = weight_set(rs, rv({2, 1}));
  for (const RVec& mu : ws.weights)
    for (const RVec& a : rs.simple_roots) {
      Rat k = Rat(2) * dot(mu, a) / dot(a, a);
      REQUIRE(k.is_integer());
      long kk = k.num_long();
      long lo = std::min(0l, kk), hi = std::max(0l, kk);
      for (long j = lo; j <= hi; ++j) CHECK(contains_weight(ws, RVec(mu - Rat(j) * a)));
    }
}

TEST_CASE("BFS result equals the brute-force box enumeration") {
  struct Case {
    std::string label;
    int rank;
    std::vector<long> coeffs;  // on fundamental weights
  };
  for (const Case& c : {Case{"B", 2, {2, 1}}, Case{"A", 2, {1, 1}}, Case{"C", 3, {1, 0, 1}},
                        Case{"G2", 2, {1, 0}}, Case{"BC", 2, {0, 2}}, Case{"D", 4, {1, 0, 0, 1}},
                        Case{"A", 1, {4}}}) {
    RootSystem rs = build_root_system(c.label, c.rank);
    auto fw = fundamental_weights(rs);
    RVec lam = RVec::Constant(rs.ambient_dim, Rat(0));
    for (int i = 0; i < rs.rank; ++i) lam += Rat(c.coeffs[i]) * fw[i];
    WeightSet ws = weight_set(rs, lam);
    auto oracle = oracle_weight_set(rs, lam);
    std::set<RVec, RVecLess> got(ws.weights.begin(), ws.weights.end());
    CHECK_MESSAGE(got == oracle, c.label, c.rank);
  }
}

TEST_CASE("highest weight out-of-span component is preserved") {
  // A-type: a dominant integral weight keeps its mean coordinate across Ω
  RootSystem rs = build_root_system("A", 2);
  RVec lam = rv({3, 0, 0});  // not in root span: mean 1
  CHECK_THROWS_AS(weight_set(rs, lam), NotIntegral);
  RVec proj = project_to_root_span(rs, lam);
  CHECK_NOTHROW(validate_highest_weight(rs, proj));
  WeightSet ws = weight_set(rs, proj);
  CHECK(ws.weights.size() == 10);
}
