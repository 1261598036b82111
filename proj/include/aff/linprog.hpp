#pragma once

// Exact rational linear programming, two flavors:
//  - Fourier-Motzkin elimination with witness back-substitution (low dimension),
//  - two-phase simplex with Bland's rule (termination guaranteed, any size).
// Both accept strict inequalities; strictness is what distinguishes an open
// chamber from its walls, so it is tracked exactly.

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "aff/scalar.hpp"

namespace aff {

struct LinIneq {
  RVec c;
  Rat d;
  bool strict = false;  // c·t > d instead of c·t ≥ d
};

inline LinIneq ineq(RVec c, Rat d, bool strict = false) { return {std::move(c), std::move(d), strict}; }

struct LPResult {
  bool feasible = false;
  RVec witness;
};

namespace detail {

struct Row {
  RVec c;
  Rat d;
  bool strict;
};

// Canonical scaling: make the leading nonzero coefficient ±1 with positive sign
// carried into d; parallel rows then collapse to the strongest representative.
inline void push_row(std::map<RVec, std::pair<Rat, bool>, RVecLess>& acc, Row r) {
  int lead = -1;
  for (Eigen::Index i = 0; i < r.c.size(); ++i)
    if (r.c[i].sign() != 0) {
      lead = static_cast<int>(i);
      break;
    }
  if (lead < 0) return;  // constant rows are handled by the caller
  Rat scale = abs(r.c[lead]);
  RVec key = r.c / scale;
  Rat d = r.d / scale;
  auto it = acc.find(key);
  if (it == acc.end()) {
    acc.emplace(std::move(key), std::make_pair(std::move(d), r.strict));
  } else {
    if (it->second.first < d)
      it->second = {d, r.strict};
    else if (it->second.first == d)
      it->second.second = it->second.second || r.strict;
  }
}

}  // namespace detail

// Fourier-Motzkin feasibility for { t : cᵣ·t ≥/> dᵣ }. Returns a rational witness.
inline LPResult fourier_motzkin(int nvars, const std::vector<LinIneq>& rows_in) {
  using detail::Row;
  std::vector<Row> rows;
  for (const auto& r : rows_in) rows.push_back({r.c, r.d, r.strict});

  struct Level {
    int var;
    std::vector<Row> lower, upper;  // bounds on the eliminated variable
  };
  std::vector<Level> levels;
  std::vector<int> alive;
  for (int i = 0; i < nvars; ++i) alive.push_back(i);

  auto consistent_constant = [](const Row& r) {
    return r.strict ? r.d.sign() < 0 : r.d.sign() <= 0;
  };

  while (!alive.empty()) {
    // pick the variable with the smallest pos*neg fan-out
    int best = alive[0];
    long best_cost = -1;
    for (int v : alive) {
      long p = 0, n = 0;
      for (const Row& r : rows) {
        if (r.c[v].sign() > 0) ++p;
        if (r.c[v].sign() < 0) ++n;
      }
      long cost = p * n;
      if (best_cost < 0 || cost < best_cost) {
        best_cost = cost;
        best = v;
      }
    }
    Level lv;
    lv.var = best;
    std::map<RVec, std::pair<Rat, bool>, RVecLess> acc;
    std::vector<Row> constants;
    for (const Row& r : rows) {
      int s = r.c[best].sign();
      if (s > 0)
        lv.lower.push_back(r);
      else if (s < 0)
        lv.upper.push_back(r);
      else {
        bool nonzero = false;
        for (Eigen::Index i = 0; i < r.c.size(); ++i) nonzero = nonzero || r.c[i].sign() != 0;
        if (nonzero)
          detail::push_row(acc, r);
        else if (!consistent_constant(r))
          return {false, {}};
      }
    }
    for (const Row& lo : lv.lower)
      for (const Row& up : lv.upper) {
        Row comb;
        Rat a = -up.c[best], b = lo.c[best];  // both positive
        comb.c = a * lo.c + b * up.c;
        comb.d = a * lo.d + b * up.d;
        comb.strict = lo.strict || up.strict;
        bool nonzero = false;
        for (Eigen::Index i = 0; i < comb.c.size(); ++i) nonzero = nonzero || comb.c[i].sign() != 0;
        if (nonzero)
          detail::push_row(acc, std::move(comb));
        else if (!consistent_constant(comb))
          return {false, {}};
      }
    rows.clear();
    for (auto& [key, dv] : acc) rows.push_back({key, dv.first, dv.second});
    levels.push_back(std::move(lv));
    alive.erase(std::find(alive.begin(), alive.end(), best));
  }

  // back-substitute a witness
  RVec t = RVec::Constant(nvars, Rat(0));
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    std::optional<Rat> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const detail::Row& r : it->lower) {
      Rat rest = r.d;
      for (int v = 0; v < nvars; ++v)
        if (v != it->var) rest -= r.c[v] * t[v];
      Rat bound = rest / r.c[it->var];
      if (!lo || *lo < bound) {
        lo = bound;
        lo_strict = r.strict;
      } else if (*lo == bound) {
        lo_strict = lo_strict || r.strict;
      }
    }
    for (const detail::Row& r : it->upper) {
      Rat rest = r.d;
      for (int v = 0; v < nvars; ++v)
        if (v != it->var) rest -= r.c[v] * t[v];
      Rat bound = rest / r.c[it->var];
      if (!hi || bound < *hi) {
        hi = bound;
        hi_strict = r.strict;
      } else if (*hi == bound) {
        hi_strict = hi_strict || r.strict;
      }
    }
    Rat val(0);
    if (lo && hi)
      val = (*lo + *hi) / Rat(2);
    else if (lo)
      val = lo_strict ? *lo + Rat(1) : *lo;
    else if (hi)
      val = hi_strict ? *hi - Rat(1) : *hi;
    t[it->var] = val;
  }
  return {true, t};
}

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
  LPStatus status = LPStatus::Infeasible;
  RVec x;       // primal solution (decision variables only)
  Rat value{0};
};

namespace detail {

// Dense tableau simplex, Bland's rule throughout. Maximizes.
class Tableau {
 public:
  // rows: a·x (≤ or =) b over x ≥ 0
  Tableau(const RMat& A, const RVec& b, const std::vector<bool>& is_eq) : m_(static_cast<int>(A.rows())), n_(static_cast<int>(A.cols())) {
    int slacks = 0;
    for (int i = 0; i < m_; ++i)
      if (!is_eq[i]) ++slacks;
    total_ = n_ + slacks + m_;  // decision + slack + artificial (upper bound)
    T_ = RMat::Constant(m_, total_ + 1, Rat(0));
    basis_.assign(m_, -1);
    int sl = 0;
    art_begin_ = n_ + slacks;
    for (int i = 0; i < m_; ++i) {
      Rat bi = b[i];
      int sgn = bi.sign() < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j) T_(i, j) = Rat(sgn) * A(i, j);
      T_(i, total_) = Rat(sgn) * bi;
      if (!is_eq[i]) {
        T_(i, n_ + sl) = Rat(sgn);
        if (sgn > 0) basis_[i] = n_ + sl;
        ++sl;
      }
      if (basis_[i] < 0) {
        T_(i, art_begin_ + i) = Rat(1);
        basis_[i] = art_begin_ + i;
        has_art_ = true;
      }
    }
  }

  LPStatus solve(const RVec& obj_decision, RVec& x_out, Rat& val_out) {
    if (has_art_) {
      // Phase I: minimize sum of artificials == maximize −sum
      RVec obj = RVec::Constant(total_, Rat(0));
      for (int j = art_begin_; j < total_; ++j) obj[j] = Rat(-1);
      Rat v;
      if (run(obj, v) == LPStatus::Unbounded) return LPStatus::Infeasible;
      if (v.sign() != 0) return LPStatus::Infeasible;
      // pivot artificials out of the basis where possible; rows that cannot
      // pivot are redundant and harmless (artificial stays basic at zero)
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < art_begin_) continue;
        for (int j = 0; j < art_begin_; ++j)
          if (T_(i, j).sign() != 0) {
            pivot(i, j);
            break;
          }
      }
      blocked_from_ = art_begin_;  // artificials may not re-enter
    }
    RVec obj = RVec::Constant(total_, Rat(0));
    for (int j = 0; j < n_ && j < obj_decision.size(); ++j) obj[j] = obj_decision[j];
    Rat v;
    LPStatus st = run(obj, v);
    if (st == LPStatus::Unbounded) return st;
    x_out = RVec::Constant(n_, Rat(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x_out[basis_[i]] = T_(i, total_);
    val_out = v;
    return LPStatus::Optimal;
  }

 private:
  void pivot(int row, int col) {
    Rat p = T_(row, col);
    for (int j = 0; j <= total_; ++j) T_(row, j) /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      Rat f = T_(i, col);
      if (f.sign() == 0) continue;
      for (int j = 0; j <= total_; ++j) T_(i, j) -= f * T_(row, j);
    }
    basis_[row] = col;
  }

  LPStatus run(const RVec& obj, Rat& value) {
    int cols = blocked_from_ < 0 ? total_ : blocked_from_;
    for (;;) {
      // reduced costs: c_j − c_B·B⁻¹A_j, computed from the current tableau
      RVec y = RVec::Constant(m_, Rat(0));
      for (int i = 0; i < m_; ++i) y[i] = obj[basis_[i]];
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        bool basic = false;
        for (int i = 0; i < m_; ++i) basic = basic || basis_[i] == j;
        if (basic) continue;
        Rat rc = obj[j];
        for (int i = 0; i < m_; ++i) rc -= y[i] * T_(i, j);
        if (rc.sign() > 0) {
          enter = j;  // Bland: lowest index
          break;
        }
      }
      if (enter < 0) break;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m_; ++i) {
        if (T_(i, enter).sign() <= 0) continue;
        Rat ratio = T_(i, total_) / T_(i, enter);
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LPStatus::Unbounded;
      pivot(leave, enter);
    }
    value = Rat(0);
    for (int i = 0; i < m_; ++i) value += obj[basis_[i]] * T_(i, total_);
    return LPStatus::Optimal;
  }

  int m_, n_, total_, art_begin_ = 0, blocked_from_ = -1;
  bool has_art_ = false;
  RMat T_;
  std::vector<int> basis_;
};

}  // namespace detail

// maximize obj·x subject to A_le x ≤ b_le, A_eq x = b_eq, x ≥ 0
inline SimplexResult simplex_max(const RMat& A_le, const RVec& b_le, const RMat& A_eq,
                                 const RVec& b_eq, const RVec& obj) {
  int m = static_cast<int>(A_le.rows() + A_eq.rows());
  int n = static_cast<int>(A_le.cols() ? A_le.cols() : A_eq.cols());
  RMat A(m, n);
  RVec b(m);
  std::vector<bool> is_eq(m, false);
  for (int i = 0; i < A_le.rows(); ++i) {
    A.row(i) = A_le.row(i);
    b[i] = b_le[i];
  }
  for (int i = 0; i < A_eq.rows(); ++i) {
    A.row(A_le.rows() + i) = A_eq.row(i);
    b[A_le.rows() + i] = b_eq[i];
    is_eq[A_le.rows() + i] = true;
  }
  detail::Tableau tab(A, b, is_eq);
  SimplexResult res;
  RVec x;
  Rat v;
  res.status = tab.solve(obj, x, v);
  if (res.status == LPStatus::Optimal) {
    res.x = x;
    res.value = v;
  }
  return res;
}

// Feasibility of a system over free variables t (strict rows honored).
// Free t is split as u − v with u,v ≥ 0; strictness via a margin variable s:
// maximize s with s ≤ 1 and (c·t) − s ≥ d on strict rows — feasible iff max s > 0.
inline LPResult simplex_feasible(int nvars, const std::vector<LinIneq>& rows) {
  bool any_strict = false;
  for (const auto& r : rows) any_strict = any_strict || r.strict;
  int n = 2 * nvars + (any_strict ? 1 : 0);
  RMat A_le(static_cast<int>(rows.size()) + (any_strict ? 1 : 0), n);
  RVec b_le(A_le.rows());
  A_le.setConstant(Rat(0));
  for (size_t r = 0; r < rows.size(); ++r) {
    // c·t ≥ d  →  −c·t (+ s) ≤ −d
    for (int j = 0; j < nvars; ++j) {
      A_le(static_cast<int>(r), j) = -rows[r].c[j];
      A_le(static_cast<int>(r), nvars + j) = rows[r].c[j];
    }
    if (rows[r].strict) A_le(static_cast<int>(r), 2 * nvars) = Rat(1);
    b_le[static_cast<int>(r)] = -rows[r].d;
  }
  if (any_strict) {
    A_le(static_cast<int>(rows.size()), 2 * nvars) = Rat(1);
    b_le[static_cast<int>(rows.size())] = Rat(1);
  }
  RVec obj = RVec::Constant(n, Rat(0));
  if (any_strict) obj[2 * nvars] = Rat(1);
  SimplexResult sr = simplex_max(A_le, b_le, RMat(0, n), RVec(0), obj);
  if (sr.status != LPStatus::Optimal) return {false, {}};
  if (any_strict && sr.value.sign() <= 0) return {false, {}};
  RVec t(nvars);
  for (int j = 0; j < nvars; ++j) t[j] = sr.x[j] - sr.x[nvars + j];
  return {true, t};
}

// Routed entry point: Fourier-Motzkin in low dimension, simplex above.
inline LPResult feasible_point(int nvars, const std::vector<LinIneq>& rows) {
  if (nvars <= 4) return fourier_motzkin(nvars, rows);
  return simplex_feasible(nvars, rows);
}

// Is target a convex combination of the given points? Exact.
inline bool in_convex_hull(const std::vector<RVec>& points, const RVec& target) {
  if (points.empty()) return false;
  int dim = static_cast<int>(target.size());
  int k = static_cast<int>(points.size());
  RMat A_eq(dim + 1, k);
  RVec b_eq(dim + 1);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < dim; ++i) A_eq(i, j) = points[j][i];
    A_eq(dim, j) = Rat(1);
  }
  for (int i = 0; i < dim; ++i) b_eq[i] = target[i];
  b_eq[dim] = Rat(1);
  RVec obj = RVec::Constant(k, Rat(0));
  SimplexResult sr = simplex_max(RMat(0, k), RVec(0), A_eq, b_eq, obj);
  return sr.status == LPStatus::Optimal;
}

}  // namespace aff
