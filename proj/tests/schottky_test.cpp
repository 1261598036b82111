#include "aff/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "aff/proximal.hpp"
#include "doctest.h"

using namespace aff;

namespace {

ReferenceVector make_ref(const MatrixGroup& mg, const RVec& x) {
  RVec lambda;
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    lambda = RVec::Constant(mg.rs.ambient_dim, Rat(0));
    lambda[0] = Rat(1);
  } else {
    lambda = highest_root(mg.rs);
  }
  WeightSet ws = weight_set(mg.rs, lambda);
  auto W = weyl_group(mg.rs);
  ReferenceVector rv = extreme_representative(x, ws, W);
  Rat top(0);
  for (Eigen::Index i = 0; i < rv.x0.size(); ++i)
    if (Rat(abs(rv.x0[i]) - top).sign() > 0) top = abs(rv.x0[i]);
  rv.x0 = rv.x0 * Rat(Rat(1) / top);  // unit scale keeps word powers shallow
  return rv;
}

RVec rvec1(int a) {
  RVec x(1);
  x << Rat(a);
  return x;
}

RVec rvec3(int a, int b, int c) {
  RVec x(3);
  x << Rat(a), Rat(b), Rat(c);
  return x;
}

Word mk_word(std::initializer_list<std::pair<int, int>> ls) {
  Word w;
  for (auto [g, s] : ls) w.letters.push_back({g, s});
  return w;
}

// independent count: every letter string, filtered by the predicate
int brute_count(int k, int l) {
  std::vector<Letter> alphabet;
  for (int i = 0; i < k; ++i) {
    alphabet.push_back({i, 1});
    alphabet.push_back({i, -1});
  }
  int n = static_cast<int>(alphabet.size());
  std::vector<int> idx(static_cast<size_t>(l), 0);
  int count = 0;
  for (;;) {
    Word w;
    for (int p = 0; p < l; ++p) w.letters.push_back(alphabet[static_cast<size_t>(idx[static_cast<size_t>(p)])]);
    if (is_cyclically_reduced(w)) ++count;
    int c = 0;
    while (c < l) {
      idx[static_cast<size_t>(c)] += 1;
      if (idx[static_cast<size_t>(c)] < n) break;
      idx[static_cast<size_t>(c)] = 0;
      ++c;
    }
    if (c == l) break;
  }
  return count;
}

std::string key_of(const Word& w) { return word_str(w); }

double linf(const MatX<double>& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("word utilities") {
  Word gg_inv = mk_word({{0, 1}, {0, -1}});
  CHECK_FALSE(is_reduced(gg_inv));
  CHECK_FALSE(is_cyclically_reduced(gg_inv));

  Word conj = mk_word({{0, 1}, {1, 1}, {0, -1}});
  CHECK(is_reduced(conj));
  CHECK_FALSE(is_cyclically_reduced(conj));

  Word empty;
  CHECK(is_reduced(empty));
  CHECK(is_cyclically_reduced(empty));
  CHECK(word_str(empty) == "e");
  CHECK(word_str(conj) == "g1 g2 g1^-1");

  Word w = mk_word({{0, 1}, {1, -1}, {0, 1}});
  CHECK(inverse_word(inverse_word(w)) == w);
  CHECK(inverse_word(w) == mk_word({{0, -1}, {1, 1}, {0, -1}}));

  auto words2 = enumerate_cyclically_reduced(2, 2);
  CHECK(words2.size() == 16);  // 4 letters + 12 two-letter words
  // shortest first, g1 before g1^-1 before g2
  CHECK(words2[0] == mk_word({{0, 1}}));
  CHECK(words2[1] == mk_word({{0, -1}}));
  CHECK(words2[2] == mk_word({{1, 1}}));
  CHECK(words2[3] == mk_word({{1, -1}}));
  for (const Word& u : words2) CHECK(is_cyclically_reduced(u));

  // per-length counts against brute force and the closed form
  for (int k = 2; k <= 3; ++k) {
    auto all = enumerate_cyclically_reduced(k, 4);
    for (int l = 1; l <= 4; ++l) {
      int got = static_cast<int>(std::count_if(all.begin(), all.end(), [&](const Word& u) {
        return word_length(u) == l;
      }));
      CHECK(got == brute_count(k, l));
      double formula = std::pow(2.0 * k - 1.0, l) + 1 + (k - 1) * (1 + (l % 2 == 0 ? 1 : -1));
      CHECK(got == static_cast<int>(formula));
    }
  }

  CHECK(enumerate_cyclically_reduced(2, 6).size() == 1104);
  CHECK_THROWS_AS(enumerate_cyclically_reduced(3, 9), std::invalid_argument);
}

TEST_CASE("synthesis rejects inadmissible inputs") {
  MatrixGroup so32 = so_pq_standard(3, 2);
  RVec x32(2);
  x32 << Rat(2), Rat(1);
  WeightSet ws = weight_set(so32.rs, [&] {
    RVec l = RVec::Constant(2, Rat(0));
    l[0] = Rat(1);
    return l;
  }());
  ReferenceVector rv32 = extreme_representative(x32, ws, weyl_group(so32.rs));
  CHECK_THROWS_WITH_AS(synthesize<double>(so32, rv32, 2, 1e-2, 1.0, 1),
                       "synthesize: precondition failed: cond_ib FAILED", std::invalid_argument);

  MatrixGroup so21 = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(so21, rvec1(1));
  CHECK_THROWS_AS(synthesize<double>(so21, ref, 1, 1e-2, 1.0, 1), std::invalid_argument);

  SynthesisOptions tight;
  tight.cbar_cap = 1.0;  // no pair of distinct flats clears this
  tight.max_attempts = 3;
  CHECK_THROWS_AS(synthesize<double>(so21, ref, 2, 1e-2, 1.0, 1, tight),
                  TransversalityRejectionExceeded);

  SynthesisOptions shallow;
  shallow.power_cap = 5;
  CHECK_THROWS_AS(synthesize<double>(so21, ref, 2, 1e-30, 1.0, 1, shallow), PowerCapExceeded);
}

TEST_CASE("synthesized so(2,1) set satisfies its invariants") {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<double> gs = synthesize<double>(mg, ref, 2, 1e-2, 1.0, 42);

  CHECK(gs.gens.size() == 2);
  CHECK(gs.power >= 1);
  CHECK(gs.s_values.size() == 4);
  for (double s : gs.s_values) CHECK(s <= 1e-2);

  // target invariant: unit vector on the one-dimensional fixed block
  VecX<double> m0 = gs.m0;
  CHECK(m0.norm() == doctest::Approx(1.0).epsilon(1e-12));

  for (int i = 0; i < 2; ++i) {
    AffineMap<double> g = gs.gens[static_cast<size_t>(i)];
    CHECK(static_cast<bool>(is_type_x0(mg, g, ref)));
    VecX<double> m = margulis_invariant(mg, ref, g);
    CHECK((m - m0).norm() < 1e-6);
    VecX<double> mi = margulis_invariant(mg, ref, inverse(g));
    CHECK((mi - m0).norm() < 1e-6);
  }

  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) {
      if (v == (u ^ 1)) {
        CHECK(gs.cbar_pairs(u, v) == 0.0);
      } else {
        CHECK(gs.cbar_pairs(u, v) >= 1.0);
        CHECK(gs.cbar_pairs(u, v) <= 8.0);
      }
    }

  // same seed, same set
  GeneratorSet<double> gs2 = synthesize<double>(mg, ref, 2, 1e-2, 1.0, 42);
  CHECK(gs2.power == gs.power);
  for (int i = 0; i < 2; ++i) {
    CHECK(linf(gs2.gens[i].linear - gs.gens[i].linear) == 0.0);
    CHECK(linf(MatX<double>(gs2.gens[i].translation - gs.gens[i].translation)) == 0.0);
  }
}

TEST_CASE("word evaluation") {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<double> gs = synthesize<double>(mg, ref, 2, 5e-1, 1.0, 7);

  AffineMap<double> id = evaluate(gs, Word{});
  CHECK(linf(id.linear - MatX<double>::Identity(3, 3)) == 0.0);
  CHECK(id.translation.norm() == 0.0);

  Word w = mk_word({{0, 1}, {1, -1}, {0, 1}});
  AffineMap<double> gw = evaluate(gs, w);
  AffineMap<double> round = compose(gw, evaluate(gs, inverse_word(w)));
  CHECK(linf(extended(round) - MatX<double>::Identity(4, 4)) < 1e-7);

  // rightmost letter acts first
  VecX<double> x(3);
  x << 0.3, -1.2, 0.7;
  Word pair = mk_word({{0, 1}, {1, 1}});
  VecX<double> lhs = apply(evaluate(gs, pair), x);
  VecX<double> rhs = apply(gs.gens[0], apply(gs.gens[1], x));
  CHECK((lhs - rhs).norm() < 1e-10 * rhs.norm());

  Word sq = mk_word({{0, 1}, {0, 1}});
  CHECK(linf(extended(evaluate(gs, sq)) - extended(compose(gs.gens[0], gs.gens[0]))) < 1e-12);
}

TEST_CASE("additivity report over short words") {
  // wide scalars: length-3 words already drive the extended matrices past
  // what double eigendata can split
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<BigFloat> gs = synthesize<BigFloat>(mg, ref, 2, 1e-2, 1.0, 42);

  AdditivityReport rep = additivity_report(gs, 3);
  CHECK(rep.rows.size() == 44);  // 4 + 12 + 28
  CHECK(rep.all_type_x0);
  CHECK(rep.defect_bounded);
  CHECK(rep.halfline_ok);
  CHECK(rep.eps_hat > 0.0);
  CHECK(rep.eps_hat < 0.2);

  double pair_cap = gs.cbar_pairs.maxCoeff();
  for (const WordRow& row : rep.rows) {
    if (word_length(row.word) == 1) CHECK(row.defect == 0.0);
    CHECK(row.s <= 1e-2);
    CHECK(row.cbar <= 4.0 * pair_cap);  // words stay about as transverse as the pairs
  }

  // sign consistency: M(w⁻¹) = −w₀(M(w)) for every enumerated word
  FixedSpaceAction fa = w0_action_on_fixed_space(mg);
  std::map<std::string, const WordRow*> by_key;
  for (const WordRow& row : rep.rows) by_key[key_of(row.word)] = &row;
  for (const WordRow& row : rep.rows) {
    auto it = by_key.find(key_of(inverse_word(row.word)));
    REQUIRE(it != by_key.end());
    VecX<double> expect = -(fa.carrier * row.m);
    CHECK((it->second->m - expect).norm() < 1e-6);
  }

  // half-line property, angle form
  VecX<double> u0(3);
  for (int c = 0; c < 3; ++c) u0[c] = to_double(gs.m0[c]);
  for (const WordRow& row : rep.rows) {
    double cosang = row.m.dot(u0) / (row.m.norm() * u0.norm());
    double ang = std::acos(std::clamp(cosang, -1.0, 1.0));
    CHECK(ang <= std::asin(std::min(1.0, rep.eps_hat / u0.norm())) + 1e-12);
  }
}

TEST_CASE("freeness proxy: no collisions among short words") {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<double> gs = synthesize<double>(mg, ref, 2, 1e-2, 1.0, 42);

  auto words = enumerate_cyclically_reduced(2, 4);
  std::vector<MatX<double>> ext;
  ext.reserve(words.size());
  for (const Word& w : words) ext.push_back(extended(evaluate(gs, w)));
  for (size_t a = 0; a < ext.size(); ++a)
    for (size_t b = a + 1; b < ext.size(); ++b) CHECK(linf(ext[a] - ext[b]) > 1e-4);
}

TEST_CASE("product laws across a contraction sweep") {
  using S = BigFloat;  // the deep end of the sweep is out of double range
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));

  std::vector<double> shift_ratio, strength_ratio, lin_shift_ratio, lin_strength_ratio;
  for (double st : {1e-1, 1e-2, 1e-3, 1e-4}) {
    GeneratorSet<S> gs = synthesize<S>(mg, ref, 2, st, 1.0, 42);
    AffineMap<S> g = gs.gens[0], h = gs.gens[1];
    AffineMap<S> gh = compose(g, h);
    DynamicalSplit<S> spg = dynamical_split(g), sph = dynamical_split(h),
                      spgh = dynamical_split(gh);
    double sg = to_double(contraction_strength(g, spg));
    double sh = to_double(contraction_strength(h, sph));
    double sgh = to_double(contraction_strength(gh, spgh));

    shift_ratio.push_back(hausdorff_angle<S>(spgh.a_ge, spg.a_ge) / sg);
    strength_ratio.push_back(sgh / (sg * sh));

    // linear-part variant
    auto vge = [](const DynamicalSplit<S>& sp) {
      MatX<S> m(sp.v_gt.rows(), sp.v_gt.cols() + sp.v_eq.cols());
      m << sp.v_gt, sp.v_eq;
      return orthonormalize<S>(m);
    };
    auto lin_strength = [&](const AffineMap<S>& a, const DynamicalSplit<S>& sp) {
      return to_double(S(spectral_norm<S>(MatX<S>(a.linear * sp.v_lt)) *
                         spectral_norm<S>(MatX<S>(a.linear.inverse() * vge(sp)))));
    };
    lin_shift_ratio.push_back(hausdorff_angle<S>(vge(spgh), vge(spg)) / lin_strength(g, spg));
    lin_strength_ratio.push_back(lin_strength(gh, spgh) /
                                 (lin_strength(g, spg) * lin_strength(h, sph)));
  }
  auto bounded = [](const std::vector<double>& v, double lo_floor, double hi_cap) {
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    CHECK(lo > lo_floor);
    CHECK(hi < hi_cap);
    CHECK(hi / lo < 10.0);
  };
  bounded(shift_ratio, 0.0, 1e3);
  bounded(strength_ratio, 0.0, 1e3);
  bounded(lin_shift_ratio, 0.0, 1e3);
  bounded(lin_strength_ratio, 0.0, 1e3);
}

TEST_CASE("jordan additivity and the hull certificate") {
  MatrixGroup so21 = so_pq_standard(2, 1);
  ReferenceVector ref1 = make_ref(so21, rvec1(1));
  GeneratorSet<BigFloat> gs1 = synthesize<BigFloat>(so21, ref1, 2, 1e-2, 1.0, 42);

  // rank one, no walls: the certificate degenerates to Ct′ = Jd
  CHECK(ref1.pi_x0.empty());
  JordanAdditivityReport rep1 = jordan_additivity_report(gs1);
  CHECK(rep1.rows.size() == 4);
  CHECK(rep1.upper_ok);
  CHECK(rep1.hull_all_ok);
  CHECK(rep1.eps_hat_prime < 1.0);

  // rank three: two walls, a six-element stabilizer, a substantive hull
  MatrixGroup so43 = so_pq_standard(4, 3);
  ReferenceVector ref3 = make_ref(so43, rvec3(1, 1, 1));
  CHECK(ref3.pi_x0 == std::vector<int>{0, 1});
  CHECK(ref3.w_x0.size() == 6);  // coordinate permutations fix the reference ray

  auto conjugated_pairs = [&](auto scalar, double t, int count, uint64_t seed) {
    using S = decltype(scalar);
    std::vector<RMat> kb = compact_algebra_basis(so43);
    detail::Rng rng(seed);
    VecX<S> x0t = rat_to_vec<S>(ref3.x0) * S(t);
    MatX<S> boost = exp_cartan<S>(so43, x0t);
    std::vector<std::pair<MatX<S>, MatX<S>>> out;
    for (int i = 0; i < count; ++i) {
      detail::Conjugator<S> a = detail::sample_conjugator<S>(so43, kb, rng);
      detail::Conjugator<S> b = detail::sample_conjugator<S>(so43, kb, rng);
      out.push_back({MatX<S>(a.fwd * boost * a.inv), MatX<S>(b.fwd * boost * b.inv)});
    }
    return out;
  };

  JordanAdditivityReport rep3 =
      jordan_additivity_report<double>(so43, ref3, conjugated_pairs(double{}, 1.0, 3, 5));
  CHECK(rep3.rows.size() == 3);
  CHECK(rep3.upper_ok);
  CHECK(rep3.hull_all_ok);
  for (const JordanPairRow& row : rep3.rows) {
    CHECK(row.delta.size() == 3);
    CHECK(row.max_over_all <= 1e-8);
    CHECK(row.min_off_wall >= -rep3.eps_hat_prime - 1e-15);
  }

  // the deep regime goes through wide scalars; the lower-side envelope is a
  // function of the conjugator distortion alone, so it must not grow with
  // the contraction depth
  JordanAdditivityReport deep =
      jordan_additivity_report<BigFloat>(so43, ref3, conjugated_pairs(BigFloat{}, 11.5, 2, 9));
  CHECK(deep.upper_ok);
  CHECK(deep.hull_all_ok);
  CHECK(deep.eps_hat_prime < 16.0);
  JordanAdditivityReport deeper =
      jordan_additivity_report<BigFloat>(so43, ref3, conjugated_pairs(BigFloat{}, 14.0, 2, 9));
  CHECK(deeper.upper_ok);
  CHECK(deeper.hull_all_ok);
  CHECK(std::abs(deeper.eps_hat_prime - deep.eps_hat_prime) < 0.2 * (1.0 + deep.eps_hat_prime));

  // commuting trivial case: g = h = exp(X₀) gives a zero difference vector
  MatX<double> e0 = exp_cartan<double>(so21, rat_to_vec<double>(ref1.x0));
  std::vector<std::pair<MatX<double>, MatX<double>>> pairs{{e0, e0}};
  JordanAdditivityReport triv = jordan_additivity_report<double>(so21, ref1, pairs);
  CHECK(triv.rows[0].delta.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(triv.rows[0].hull_ok);
}

TEST_CASE("contraction strength tracks the cartan projection") {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<BigFloat> gs = synthesize<BigFloat>(mg, ref, 2, 1e-2, 1.0, 42);

  AffineMap<BigFloat> g = gs.gens[0];
  std::vector<double> slack;
  AffineMap<BigFloat> p = g;
  for (int m = 1; m <= 4; ++m) {
    slack.push_back(cartan_strength_slack(mg, ref, p));
    p = compose(p, g);
  }
  // the lemma's lower bound, plus a drift cap: the affine factor of s(gᵐ)
  // saturates at the axis offset, so the slack moves by at most the
  // distortion scale while the projections themselves grow linearly
  for (double s : slack) CHECK(s >= -0.2);
  for (double s : slack) CHECK(s <= 5.0);
  for (size_t i = 1; i < slack.size(); ++i) CHECK(std::abs(slack[i] - slack[0]) < 2.0);
}

TEST_CASE("properness proxy and its negative control") {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<double> gs = synthesize<double>(mg, ref, 2, 1e-2, 1.0, 42);

  PropernessReport rep = properness_proxy(gs, 4, 50.0, 3);
  CHECK(rep.lengths.size() == 5);
  CHECK(rep.min_displacement[0] == 0.0);
  for (int l = 1; l <= 4; ++l) CHECK(rep.min_displacement[static_cast<size_t>(l)] > 0.0);
  CHECK(rep.positive_slope);
  CHECK(rep.slope > 0.5);  // the invariant adds one ‖M0‖ per letter

  // invariants of opposite signs cancel on alternating words
  GeneratorSet<double> broken = gs;
  broken.gens[1].translation = -broken.gens[1].translation;
  VecX<double> m = margulis_invariant(mg, ref, broken.gens[1]);
  VecX<double> m0d(3);
  for (int c = 0; c < 3; ++c) m0d[c] = broken.m0[c];
  CHECK((m + m0d).norm() < 1e-6);

  PropernessReport neg = properness_proxy(broken, 4, 50.0, 3);
  CHECK_FALSE(neg.positive_slope);
}

TEST_CASE("report rows are identical across thread counts") {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<BigFloat> gs = synthesize<BigFloat>(mg, ref, 2, 1e-2, 1.0, 42);

  AdditivityReport a = additivity_report(gs, 2, 1);
  AdditivityReport b = additivity_report(gs, 2, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].word == b.rows[i].word);
    CHECK(a.rows[i].s == b.rows[i].s);
    CHECK(a.rows[i].cbar == b.rows[i].cbar);
    CHECK(a.rows[i].defect == b.rows[i].defect);
    CHECK(linf(MatX<double>(a.rows[i].m - b.rows[i].m)) == 0.0);
  }
  CHECK(a.eps_hat == b.eps_hat);

  GeneratorSet<double> gd = synthesize<double>(mg, ref, 2, 1e-2, 1.0, 42);
  PropernessReport p1 = properness_proxy(gd, 3, 40.0, 3, 1);
  PropernessReport p2 = properness_proxy(gd, 3, 40.0, 3, 4);
  for (size_t i = 0; i < p1.min_displacement.size(); ++i)
    CHECK(p1.min_displacement[i] == p2.min_displacement[i]);
}

TEST_CASE("wide precision synthesis at the deep target") {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = make_ref(mg, rvec1(1));
  GeneratorSet<BigFloat> gs = synthesize<BigFloat>(mg, ref, 2, 1e-4, 1.0, 42);

  for (double s : gs.s_values) CHECK(s <= 1e-4);
  AdditivityReport rep = additivity_report(gs, 2);
  CHECK(rep.rows.size() == 16);
  CHECK(rep.all_type_x0);
  CHECK(rep.defect_bounded);
  CHECK(rep.halfline_ok);
  CHECK(rep.eps_hat > 0.0);
  CHECK(rep.eps_hat < 1e-2);  // pair defects scale with the contraction target
}
