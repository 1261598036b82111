#pragma once

// Free-group synthesis from a contracting reference element, and the
// word-level reports: invariant additivity, Jordan/Cartan additivity with the
// convex-hull certificate, and the properness proxy.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "aff/affdyn.hpp"
#include "aff/linprog.hpp"
#include "aff/matgroups.hpp"
#include "aff/typing.hpp"

namespace aff {

struct TransversalityRejectionExceeded : std::runtime_error {
  explicit TransversalityRejectionExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct PowerCapExceeded : std::runtime_error {
  explicit PowerCapExceeded(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------------------
// words

struct Letter {
  int gen = 0;   // 0-based generator index
  int sign = 1;  // +1 or -1
};

inline bool operator==(const Letter& a, const Letter& b) {
  return a.gen == b.gen && a.sign == b.sign;
}
inline bool operator!=(const Letter& a, const Letter& b) { return !(a == b); }

struct Word {
  std::vector<Letter> letters;
};

inline bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
inline bool operator!=(const Word& a, const Word& b) { return !(a == b); }

inline int word_length(const Word& w) { return static_cast<int>(w.letters.size()); }

inline Word inverse_word(const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back({it->gen, -it->sign});
  return out;
}

inline bool is_reduced(const Word& w) {
  for (size_t m = 0; m + 1 < w.letters.size(); ++m)
    if (w.letters[m + 1].gen == w.letters[m].gen && w.letters[m + 1].sign == -w.letters[m].sign)
      return false;
  return true;
}

// reduced, and the first letter does not cancel the last one
inline bool is_cyclically_reduced(const Word& w) {
  if (!is_reduced(w)) return false;
  if (w.letters.empty()) return true;
  const Letter& a = w.letters.front();
  const Letter& z = w.letters.back();
  return !(a.gen == z.gen && a.sign == -z.sign);
}

inline std::string word_str(const Word& w) {
  if (w.letters.empty()) return "e";
  std::string out;
  for (size_t m = 0; m < w.letters.size(); ++m) {
    if (m) out += ' ';
    out += "g" + std::to_string(w.letters[m].gen + 1);
    if (w.letters[m].sign < 0) out += "^-1";
  }
  return out;
}

// All nonempty cyclically reduced words of length <= L, shortest first; within
// a length the order is lexicographic in g1, g1^-1, g2, g2^-1, ...
inline std::vector<Word> enumerate_cyclically_reduced(int k, int L) {
  if (k < 1) throw std::invalid_argument("enumerate_cyclically_reduced: k must be positive");
  double level = 2.0 * k * std::pow(2.0 * k - 1.0, std::max(0, L - 1));
  if (level > 1e6)
    throw std::invalid_argument("enumerate_cyclically_reduced: level count exceeds 1e6");
  std::vector<Letter> alphabet;
  for (int i = 0; i < k; ++i) {
    alphabet.push_back({i, 1});
    alphabet.push_back({i, -1});
  }
  std::vector<Word> out;
  Word w;
  auto dfs = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      if (is_cyclically_reduced(w)) out.push_back(w);
      return;
    }
    for (const Letter& l : alphabet) {
      if (!w.letters.empty()) {
        const Letter& prev = w.letters.back();
        if (prev.gen == l.gen && prev.sign == -l.sign) continue;
      }
      w.letters.push_back(l);
      self(self, remaining - 1);
      w.letters.pop_back();
    }
  };
  for (int l = 1; l <= L; ++l) dfs(dfs, l);
  return out;
}

// ---------------------------------------------------------------------------
// generator sets

template <typename S>
struct GeneratorSet {
  MatrixGroup mg;
  ReferenceVector ref;
  std::vector<AffineMap<S>> gens;
  VecX<S> m0;                    // target invariant, V coordinates, supported on V^t₀
  long power = 1;                // the exponent N applied to the base conjugates
  std::vector<double> s_values;  // s(g1), s(g1⁻¹), s(g2), s(g2⁻¹), ...
  MatX<double> cbar_pairs;       // signed indices 2i, 2i+1 = gᵢ, gᵢ⁻¹; 0 on the cancelling pairs
};

template <typename S>
AffineMap<S> signed_generator(const GeneratorSet<S>& gs, const Letter& l) {
  const AffineMap<S>& g = gs.gens.at(static_cast<size_t>(l.gen));
  return l.sign > 0 ? g : inverse(g);
}

// Product left to right; the rightmost letter acts on points first.
template <typename S>
AffineMap<S> evaluate(const GeneratorSet<S>& gs, const Word& w) {
  int d = carrier_dim(gs.mg);
  AffineMap<S> acc = affine_map<S>(gs.mg, MatX<S>::Identity(d, d));
  for (const Letter& l : w.letters) acc = compose(acc, signed_generator(gs, l));
  return acc;
}

namespace detail {

struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int pick(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1)); }
  Rat small_rat() { return Rat(pick(-3, 3), pick(1, 4)); }
};

// Conjugators are products of exact rotations and a split-torus factor with
// dyadic exponents; the inverse is assembled from the factor inverses.
template <typename S>
struct Conjugator {
  MatX<S> fwd, inv;
};

template <typename S>
Conjugator<S> sample_conjugator(const MatrixGroup& mg, const std::vector<RMat>& kbasis,
                                Rng& rng) {
  int d = carrier_dim(mg);
  RMat A1 = RMat::Constant(d, d, Rat(0)), A2 = A1;
  for (const auto& B : kbasis) {
    A1 += B * Rat(rng.small_rat() / Rat(4));
    A2 += B * Rat(rng.small_rat() / Rat(4));
  }
  int amb = mg.kind == MatrixGroup::Kind::so_pq_standard ? mg.q : mg.n;
  VecX<S> z(amb);
  long acc = 0;
  for (int i = 0; i < amb; ++i) {
    long num = rng.pick(-6, 6);
    acc += num;
    z[i] = S(static_cast<double>(num) / 8.0);
  }
  if (mg.kind == MatrixGroup::Kind::sl_n_adjoint)
    for (int i = 0; i < amb; ++i) z[i] -= S(static_cast<double>(acc) / (8.0 * amb));
  Conjugator<S> out;
  out.fwd = rat_to<S>(cayley(A1)) * exp_cartan<S>(mg, z) * rat_to<S>(cayley(A2));
  out.inv = rat_to<S>(cayley(RMat(-A2))) * exp_cartan<S>(mg, VecX<S>(-z)) *
            rat_to<S>(cayley(RMat(-A1)));
  return out;
}

inline void require_conditions(const MatrixGroup& mg) {
  GroupSpec spec;
  RVec lambda;
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    spec.kind = GroupSpec::Kind::so_pq;
    spec.p = mg.p;
    spec.q = mg.q;
    lambda = RVec::Constant(mg.rs.ambient_dim, Rat(0));
    lambda[0] = Rat(1);
  } else {
    spec.kind = GroupSpec::Kind::split;
    lambda = highest_root(mg.rs);
  }
  ConditionReport rep = main_theorem_report(mg.rs, lambda, spec);
  auto reject = [](const char* name, Status st) {
    if (st != Status::SATISFIED)
      throw std::invalid_argument(std::string("synthesize: precondition failed: ") + name + " " +
                                  to_string(st));
  };
  reject("zero_weight", rep.zero_weight);
  reject("cond_ii", rep.cond_ii_no_swinging);
  reject("cond_ia", rep.cond_ia_fixed_vector);
  reject("cond_ib", rep.cond_ib_w0_moves);
}

// unit vector of V^t₀ fixed by −w₀, oriented with the largest entry positive
template <typename S>
VecX<S> invariant_direction(const MatrixGroup& mg) {
  FixedSpaceAction fa = w0_action_on_fixed_space(mg);
  int t = static_cast<int>(fa.basis.cols());
  if (t == 0) throw std::invalid_argument("synthesize: the fixed space V^t₀ is trivial");
  MatX<double> A = fa.action + MatX<double>::Identity(t, t);
  Eigen::FullPivLU<MatX<double>> lu(A);
  lu.setThreshold(1e-8);
  if (lu.dimensionOfKernel() == 0)
    throw std::invalid_argument("synthesize: no fixed point of −w₀ in V^t₀");
  VecX<double> z = lu.kernel().col(0);
  VecX<double> dir = fa.basis * z;
  dir /= dir.norm();
  int arg = 0;
  for (int i = 1; i < dir.size(); ++i)
    if (std::abs(dir[i]) > std::abs(dir[arg])) arg = i;
  if (dir[arg] < 0) dir = -dir;
  VecX<S> out(dir.size());
  for (int i = 0; i < dir.size(); ++i) out[i] = S(dir[i]);
  return out;
}

template <typename F>
void for_each_index(int n, int threads, F&& f) {
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::mutex err_mu;
  auto run = [&] {
    for (int i = cursor.fetch_add(1); i < n && !failed.load(); i = cursor.fetch_add(1)) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace detail

struct SynthesisOptions {
  double cbar_cap = 8.0;  // admissible pairs must come in under this bound
  int max_attempts = 1000;
  long power_cap = 200;
};

// Generators gᵢ = τ_{φᵢ⁻¹(M0)} ∘ γᵢᴺ with γᵢ = ψᵢ exp(X₀) ψᵢ⁻¹: seeded random
// conjugates, rejected until every non-cancelling signed pair is transverse,
// then powered until s drops below the target and translated along their own
// neutral flat so every Margulis invariant equals M0.
template <typename S>
GeneratorSet<S> synthesize(const MatrixGroup& mg, const ReferenceVector& ref, int k,
                           double s_target, double m0_norm, uint64_t seed,
                           const SynthesisOptions& opt = {}) {
  if (k < 2) throw std::invalid_argument("synthesize: k must be at least 2");
  if (!(s_target > 0) || !(m0_norm > 0))
    throw std::invalid_argument("synthesize: s_target and m0_norm must be positive");
  detail::require_conditions(mg);

  VecX<S> m0 = detail::invariant_direction<S>(mg) * S(m0_norm);
  auto kbasis = compact_algebra_basis(mg);
  detail::Rng rng(seed);
  VecX<S> x0 = rat_to_vec<S>(ref.x0);
  MatX<S> boost = exp_cartan<S>(mg, x0);
  MatX<S> boost_inv = exp_cartan<S>(mg, VecX<S>(-x0));

  // rejection loop over conjugator draws
  std::vector<MatX<S>> base, base_inv;  // carriers of γᵢ, γᵢ⁻¹
  bool accepted = false;
  for (int attempt = 0; attempt < opt.max_attempts && !accepted; ++attempt) {
    base.clear();
    base_inv.clear();
    for (int i = 0; i < k; ++i) {
      detail::Conjugator<S> psi = detail::sample_conjugator<S>(mg, kbasis, rng);
      base.push_back(psi.fwd * boost * psi.inv);
      base_inv.push_back(psi.fwd * boost_inv * psi.inv);
    }
    try {
      std::vector<DynamicalSplit<S>> splits(2 * static_cast<size_t>(k));
      for (int si = 0; si < 2 * k; ++si) {
        const MatX<S>& c = si % 2 == 0 ? base[si / 2] : base_inv[si / 2];
        AffineMap<S> g = affine_map<S>(mg, c);
        if (!is_type_x0(mg, g, ref)) throw NotTypeX0("synthesize: conjugate left the type");
        splits[si] = dynamical_split(g);
      }
      double worst = 0;
      for (int u = 0; u < 2 * k; ++u)
        for (int v = 0; v < 2 * k; ++v) {
          if (v == (u ^ 1)) continue;  // gᵢ against gᵢ⁻¹ can never be transverse
          NondegeneracyBound<S> nb =
              nondegeneracy_bound<S>(mg, ref.x0, splits[u].a_ge, splits[v].a_le);
          worst = std::max(worst, to_double(nb.cbar));
        }
      accepted = worst <= opt.cbar_cap;
    } catch (const NotTransverse&) {
    } catch (const NotTypeX0&) {
    } catch (const ToleranceAmbiguous&) {
    } catch (const IllConditioned&) {
    }
  }
  if (!accepted)
    throw TransversalityRejectionExceeded(
        "synthesize: no transverse conjugate family within the attempt budget");

  // power until the measured strength of every γᵢ^{±N} clears the target with
  // room for the translation attached below; the affine column contributes
  // about 1 + ‖φᵢ⁻¹‖·‖M0‖ to ‖g⁻¹|A^≥‖.
  double margin = 1.0 + 2.0 * opt.cbar_cap * m0_norm;
  GeneratorSet<S> out;
  for (long n = 1;; ++n) {
    if (n > opt.power_cap)
      throw PowerCapExceeded("synthesize: contraction target not reached at the power cap");
    std::vector<MatX<S>> pw(static_cast<size_t>(k)), pw_inv(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
      pw[i] = base[i];
      pw_inv[i] = base_inv[i];
      for (long m = 1; m < n; ++m) {
        pw[i] = pw[i] * base[i];
        pw_inv[i] = pw_inv[i] * base_inv[i];
      }
    }
    bool deep = true;
    std::vector<DynamicalSplit<S>> splits(static_cast<size_t>(k));
    try {
      for (int i = 0; i < k && deep; ++i) {
        AffineMap<S> gi = affine_map<S>(mg, pw[i]);
        AffineMap<S> gi_inv = affine_map<S>(mg, pw_inv[i]);
        splits[i] = dynamical_split(gi);
        DynamicalSplit<S> sp_inv = dynamical_split(gi_inv);
        deep = to_double(contraction_strength(gi, splits[i])) * margin <= s_target &&
               to_double(contraction_strength(gi_inv, sp_inv)) * margin <= s_target;
      }
    } catch (const ToleranceAmbiguous&) {
      continue;  // a deeper power separates the moduli
    }
    if (!deep) continue;

    // attach translations: v = φᵢ⁻¹(M0) lies on the neutral flat of γᵢᴺ and
    // commutes with it, so the parabolic flats are unchanged
    out = GeneratorSet<S>{};
    out.mg = mg;
    out.ref = ref;
    out.m0 = m0;
    out.power = n;
    for (int i = 0; i < k; ++i) {
      AffineMap<S> lin = affine_map<S>(mg, pw[i]);
      AffineMap<S> phi = canonizing_map(mg, ref, lin, &splits[i]);
      VecX<S> v = phi.linear.fullPivLu().solve(m0);
      out.gens.push_back(compose(translation_map<S>(mg, v), lin));
    }

    // re-measure every invariant on the finished maps
    std::vector<DynamicalSplit<S>> fin(2 * static_cast<size_t>(k));
    std::vector<AffineMap<S>> signed_maps(2 * static_cast<size_t>(k));
    bool within = true;
    for (int si = 0; si < 2 * k; ++si) {
      signed_maps[si] = si % 2 == 0 ? out.gens[si / 2] : inverse(out.gens[si / 2]);
      if (!is_type_x0(mg, signed_maps[si], ref))
        throw IllConditioned("synthesize: a finished generator failed the type check");
      fin[si] = dynamical_split(signed_maps[si]);
      double s = to_double(contraction_strength(signed_maps[si], fin[si]));
      out.s_values.push_back(s);
      within = within && s <= s_target;
    }
    if (!within) continue;  // margin was too thin; take one more power

    out.cbar_pairs = MatX<double>::Zero(2 * k, 2 * k);
    for (int u = 0; u < 2 * k; ++u)
      for (int v = 0; v < 2 * k; ++v) {
        if (v == (u ^ 1)) continue;
        NondegeneracyBound<S> nb = nondegeneracy_bound<S>(mg, ref.x0, fin[u].a_ge, fin[v].a_le);
        out.cbar_pairs(u, v) = to_double(nb.cbar);
      }
    for (int si = 0; si < 2 * k; ++si) {
      // the inverse rows are covered too: M(g⁻¹) = −w₀(M(g)) and M0 is −w₀-fixed
      VecX<S> m = margulis_invariant(mg, ref, signed_maps[si], &fin[si]);
      double err = 0;
      for (int c = 0; c < m.size(); ++c) err = std::max(err, std::abs(to_double(S(m[c] - m0[c]))));
      if (err > 1e-6)
        throw IllConditioned("synthesize: a finished generator missed the target invariant");
    }
    return out;
  }
}

// ---------------------------------------------------------------------------
// invariant additivity over cyclically reduced words

struct WordRow {
  Word word;
  bool type_x0 = false;
  double cbar = 0;
  double s = 0;
  VecX<double> m;  // Margulis invariant, V coordinates
  double defect = 0;
};

struct AdditivityReport {
  std::vector<WordRow> rows;  // enumeration order: shortest first
  double eps_hat = 0;         // max defect over the length-2 words
  double max_defect_per_length = 0;
  bool all_type_x0 = false;
  bool defect_bounded = false;  // max δ(w)/length ≤ ε̂
  bool halfline_ok = false;     // M(w)·(M0/‖M0‖) ≥ (‖M0‖ − ε̂)·length > 0
};

template <typename S>
AdditivityReport additivity_report(const GeneratorSet<S>& gs, int L, int threads = 1) {
  int k = static_cast<int>(gs.gens.size());
  std::vector<Word> words = enumerate_cyclically_reduced(k, L);
  int n = static_cast<int>(words.size());
  AdditivityReport rep;
  rep.rows.resize(static_cast<size_t>(n));
  detail::for_each_index(n, threads, [&](int i) {
    const Word& w = words[static_cast<size_t>(i)];
    AffineMap<S> g = evaluate(gs, w);
    DynamicalSplit<S> sp = dynamical_split(g);
    WordRow row;
    row.word = w;
    row.type_x0 = static_cast<bool>(is_type_x0(gs.mg, g, gs.ref));
    row.s = to_double(contraction_strength(g, sp));
    row.cbar =
        to_double(nondegeneracy_bound<S>(gs.mg, gs.ref.x0, sp.a_ge, sp.a_le).cbar);
    VecX<S> m = margulis_invariant(gs.mg, gs.ref, g, &sp);
    row.m.resize(m.size());
    for (int c = 0; c < m.size(); ++c) row.m[c] = to_double(m[c]);
    rep.rows[static_cast<size_t>(i)] = std::move(row);
  });

  // letter invariants are the length-1 rows, which lead the enumeration
  std::vector<VecX<double>> letter_m(2 * static_cast<size_t>(k));
  for (int si = 0; si < 2 * k; ++si) letter_m[si] = rep.rows[static_cast<size_t>(si)].m;
  rep.all_type_x0 = true;
  for (WordRow& row : rep.rows) {
    VecX<double> sum = VecX<double>::Zero(row.m.size());
    for (const Letter& l : row.word.letters) sum += letter_m[2 * l.gen + (l.sign > 0 ? 0 : 1)];
    row.defect = (row.m - sum).norm();
    rep.all_type_x0 = rep.all_type_x0 && row.type_x0;
    if (word_length(row.word) == 2) rep.eps_hat = std::max(rep.eps_hat, row.defect);
    rep.max_defect_per_length =
        std::max(rep.max_defect_per_length, row.defect / word_length(row.word));
  }
  // the floor absorbs the 1e−6 invariant-measurement tolerance when L < 2
  double eps_eff = std::max(rep.eps_hat, 1e-7);
  rep.defect_bounded = rep.max_defect_per_length <= eps_eff;
  VecX<double> u0(gs.m0.size());
  for (int c = 0; c < gs.m0.size(); ++c) u0[c] = to_double(gs.m0[c]);
  double m0n = u0.norm();
  u0 /= m0n;
  rep.halfline_ok = m0n > eps_eff;
  for (const WordRow& row : rep.rows) {
    double along = row.m.dot(u0);
    rep.halfline_ok = rep.halfline_ok && along >= (m0n - eps_eff) * word_length(row.word);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Jordan/Cartan additivity and the convex-hull certificate

struct JordanPairRow {
  VecX<double> delta;       // ϖ-coordinates of Jd(gh) − Ct(g) − Ct(h)
  double max_over_all = 0;  // over every simple root index
  double min_off_wall = 0;  // over the indices away from the walls of X₀
  bool hull_ok = false;     // Jd(gh) ∈ Conv(orbit of Ct′ under the wall stabilizer)
};

struct JordanAdditivityReport {
  std::vector<JordanPairRow> rows;
  double eps_hat_prime = 0;  // max observed drop below zero off the walls
  bool upper_ok = true;      // every delta ≤ tol
  bool hull_all_ok = true;
};

namespace detail {

// Ct′ solves: ⟨ϖᵢ, ·⟩ matches Jd(gh) off the walls of X₀ and Ct(g)+Ct(h) on
// them; exact in rational arithmetic, then the membership test is an exact LP
// against the orbit, with an ℓ∞ snap tolerance absorbing the float inputs.
inline bool hull_certificate(const RootSystem& rs, const std::vector<RVec>& varpi,
                             const std::vector<int>& walls,
                             const std::vector<WeylElement>& stab, const RVec& jd,
                             const RVec& ct_sum, const Rat& snap, bool trace_zero) {
  int amb = rs.ambient_dim;
  int rows = static_cast<int>(varpi.size()) + (trace_zero ? 1 : 0);
  RMat A(rows, amb);
  RVec b(rows);
  for (size_t i = 0; i < varpi.size(); ++i) {
    bool on_wall = std::find(walls.begin(), walls.end(), static_cast<int>(i)) != walls.end();
    const RVec& target = on_wall ? ct_sum : jd;
    for (int c = 0; c < amb; ++c) A(static_cast<int>(i), c) = varpi[i][c];
    b[static_cast<int>(i)] = dot(varpi[i], target);
  }
  if (trace_zero) {
    for (int c = 0; c < amb; ++c) A(rows - 1, c) = Rat(1);
    b[rows - 1] = Rat(0);
  }
  Eigen::FullPivLU<RMat> lu(A);
  if (lu.rank() != amb) return false;
  RVec ct_prime = lu.solve(b);

  std::set<RVec, RVecLess> orbit;
  if (stab.empty()) orbit.insert(ct_prime);
  for (const WeylElement& w : stab) orbit.insert(RVec(w.matrix * ct_prime));
  std::vector<RVec> pts(orbit.begin(), orbit.end());

  int np = static_cast<int>(pts.size());
  std::vector<LinIneq> lp;
  for (int i = 0; i < np; ++i) {
    RVec e = RVec::Constant(np, Rat(0));
    e[i] = Rat(1);
    lp.push_back(ineq(e, Rat(0)));
  }
  RVec ones = RVec::Constant(np, Rat(1));
  lp.push_back(ineq(ones, Rat(1)));
  lp.push_back(ineq(RVec(-ones), Rat(-1)));
  for (int c = 0; c < amb; ++c) {
    RVec col(np);
    for (int i = 0; i < np; ++i) col[i] = pts[static_cast<size_t>(i)][c];
    lp.push_back(ineq(col, Rat(jd[c] - snap)));
    lp.push_back(ineq(RVec(-col), Rat(-jd[c] - snap)));
  }
  return feasible_point(np, lp).feasible;
}

}  // namespace detail

template <typename S>
JordanAdditivityReport jordan_additivity_report(
    const MatrixGroup& mg, const ReferenceVector& ref,
    const std::vector<std::pair<MatX<S>, MatX<S>>>& pairs, double tol = 1e-8,
    double hull_tol = 1e-6) {
  std::vector<RVec> varpi = fundamental_weights(mg.rs);
  bool trace_zero = mg.kind == MatrixGroup::Kind::sl_n_adjoint;
  JordanAdditivityReport rep;
  for (const auto& [g, h] : pairs) {
    VecX<S> ct_g = cartan_projection<S>(mg, g).value;
    VecX<S> ct_h = cartan_projection<S>(mg, h).value;
    VecX<S> jd = jordan_projection<S>(mg, MatX<S>(g * h)).value;
    JordanPairRow row;
    row.delta.resize(static_cast<int>(varpi.size()));
    row.max_over_all = -1e300;
    row.min_off_wall = 1e300;
    for (size_t i = 0; i < varpi.size(); ++i) {
      S acc(0);
      for (int c = 0; c < jd.size(); ++c)
        acc += scalar_cast<S>(varpi[i][c]) * S(jd[c] - ct_g[c] - ct_h[c]);
      double d = to_double(acc);
      row.delta[static_cast<int>(i)] = d;
      row.max_over_all = std::max(row.max_over_all, d);
      bool on_wall =
          std::find(ref.pi_x0.begin(), ref.pi_x0.end(), static_cast<int>(i)) != ref.pi_x0.end();
      if (!on_wall) row.min_off_wall = std::min(row.min_off_wall, d);
    }
    if (varpi.size() == ref.pi_x0.size()) row.min_off_wall = 0;  // nothing off the walls

    auto rationalize = [](const VecX<S>& v) {
      RVec out(v.size());
      for (int c = 0; c < v.size(); ++c) out[c] = Rat::from_double(to_double(v[c]));
      return out;
    };
    RVec jd_r = rationalize(jd);
    RVec ct_sum = rationalize(VecX<S>(ct_g + ct_h));
    row.hull_ok = detail::hull_certificate(mg.rs, varpi, ref.pi_x0, ref.w_x0, jd_r, ct_sum,
                                           Rat::from_double(hull_tol), trace_zero);

    rep.upper_ok = rep.upper_ok && row.max_over_all <= tol;
    rep.hull_all_ok = rep.hull_all_ok && row.hull_ok;
    rep.eps_hat_prime = std::max(rep.eps_hat_prime, std::max(0.0, -row.min_off_wall));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

template <typename S>
JordanAdditivityReport jordan_additivity_report(const GeneratorSet<S>& gs, double tol = 1e-8,
                                                double hull_tol = 1e-6) {
  std::vector<std::pair<MatX<S>, MatX<S>>> pairs;
  for (const AffineMap<S>& a : gs.gens)
    for (const AffineMap<S>& b : gs.gens) pairs.emplace_back(a.carrier, b.carrier);
  return jordan_additivity_report<S>(gs.mg, gs.ref, pairs, tol, hull_tol);
}

// Slack of the contraction/Cartan comparison: (min over Ω^≥ of λ(Ct(g)) − max
// over Ω^< of λ(Ct(g))) + log s(g). The comparison states this is ≥ −ε.
template <typename S>
double cartan_strength_slack(const MatrixGroup& mg, const ReferenceVector& ref,
                             const AffineMap<S>& g, const DynamicalSplit<S>* pre = nullptr) {
  VecX<S> ct = cartan_projection<S>(mg, g.carrier).value;
  auto value = [&](const RVec& lam) {
    S acc(0);
    for (int c = 0; c < ct.size(); ++c) acc += scalar_cast<S>(lam[c]) * ct[c];
    return to_double(acc);
  };
  double lo = 1e300, hi = -1e300;
  for (const RVec& lam : ref.type_class.omega_pos) lo = std::min(lo, value(lam));
  for (const RVec& lam : ref.type_class.omega_zero) lo = std::min(lo, value(lam));
  for (const RVec& lam : ref.type_class.omega_neg) hi = std::max(hi, value(lam));
  double s = to_double(contraction_strength(mg, ref, g, pre));
  return (lo - hi) + std::log(s);
}

// ---------------------------------------------------------------------------
// properness proxy

struct PropernessReport {
  std::vector<int> lengths;               // 0..L
  std::vector<double> min_displacement;   // over words of that length and grid points
  double slope = 0;                       // least squares over lengths 1..L
  bool positive_slope = false;            // a proxy verdict, not a properness proof
};

// Minimum of ‖w(x) − x‖ over cyclically reduced words of each length and over
// candidate points in the ball of radius R: an axis lattice with grid points
// per axis, plus each word's least-squares stationary point (clamped to the
// ball). The lattice alone cannot witness the minimum once the expanding
// directions dominate; the stationary point sits on the word's neutral axis,
// where the displacement degenerates to the invariant itself.
template <typename S>
PropernessReport properness_proxy(const GeneratorSet<S>& gs, int L, double R, int grid,
                                  int threads = 1) {
  if (grid < 1) throw std::invalid_argument("properness_proxy: grid must be at least 1");
  int k = static_cast<int>(gs.gens.size());
  int dim = gs.mg.dim_V;
  std::vector<VecX<S>> points;
  std::vector<int> idx(static_cast<size_t>(dim), 0);
  for (;;) {
    VecX<double> x(dim);
    for (int c = 0; c < dim; ++c)
      x[c] = grid == 1 ? 0.0 : -R + 2.0 * R * idx[static_cast<size_t>(c)] / (grid - 1);
    if (x.norm() <= R + 1e-12) {
      VecX<S> xs(dim);
      for (int c = 0; c < dim; ++c) xs[c] = S(x[c]);
      points.push_back(xs);
    }
    int c = 0;
    while (c < dim) {
      idx[static_cast<size_t>(c)] += 1;
      if (idx[static_cast<size_t>(c)] < grid) break;
      idx[static_cast<size_t>(c)] = 0;
      ++c;
    }
    if (c == dim) break;
  }

  std::vector<Word> words = L >= 1 ? enumerate_cyclically_reduced(k, L) : std::vector<Word>{};
  int n = static_cast<int>(words.size());
  std::vector<double> word_min(static_cast<size_t>(n), 0.0);
  detail::for_each_index(n, threads, [&](int i) {
    AffineMap<S> g = evaluate(gs, words[static_cast<size_t>(i)]);
    double best = 1e300;
    auto measure = [&](const VecX<S>& x) {
      VecX<S> moved = apply(g, x);
      best = std::min(best, to_double(S(VecX<S>(moved - x).norm())));
    };
    for (const VecX<S>& x : points) measure(x);
    MatX<S> A = g.linear - MatX<S>::Identity(dim, dim);
    Eigen::JacobiSVD<MatX<S>> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(S(1e-8));
    VecX<S> xls = svd.solve(VecX<S>(-g.translation));
    double nx = to_double(S(xls.norm()));
    if (nx > R) xls *= S(R / nx);
    measure(xls);
    word_min[static_cast<size_t>(i)] = best;
  });

  PropernessReport rep;
  rep.lengths.resize(static_cast<size_t>(L) + 1);
  rep.min_displacement.assign(static_cast<size_t>(L) + 1, 1e300);
  rep.lengths[0] = 0;
  rep.min_displacement[0] = 0.0;  // the identity fixes everything
  for (int l = 1; l <= L; ++l) rep.lengths[static_cast<size_t>(l)] = l;
  for (int i = 0; i < n; ++i) {
    int l = word_length(words[static_cast<size_t>(i)]);
    rep.min_displacement[static_cast<size_t>(l)] =
        std::min(rep.min_displacement[static_cast<size_t>(l)], word_min[static_cast<size_t>(i)]);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int l = 1; l <= L; ++l) {
    double y = rep.min_displacement[static_cast<size_t>(l)];
    sx += l;
    sy += y;
    sxx += static_cast<double>(l) * l;
    sxy += l * y;
  }
  double denom = L * sxx - sx * sx;
  rep.slope = L >= 2 && denom != 0 ? (L * sxy - sx * sy) / denom : 0.0;
  rep.positive_slope = rep.slope > 0;
  return rep;
}

}  // namespace aff
