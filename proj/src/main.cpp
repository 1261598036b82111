// Command line front end: representation checks, weight and type censuses,
// Schottky simulation, and verification suites backed by brute-force oracles.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "aff/oracles.hpp"
#include "aff/proximal.hpp"
#include "aff/schottky.hpp"
#include "json.hpp"

using njson = nlohmann::ordered_json;

namespace aff {
namespace {

// ---------------------------------------------------------------------------
// parsing

RootSystem parse_system(const std::string& text) {
  size_t split = 0;
  while (split < text.size() && std::isalpha(static_cast<unsigned char>(text[split]))) ++split;
  if (split == 0 || split == text.size())
    throw std::invalid_argument("system must look like B3 or BC2: got '" + text + "'");
  std::string label = text.substr(0, split);
  for (char& c : label) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return build_root_system(label, std::stoi(text.substr(split)));
}

std::vector<Rat> parse_rats(const std::string& text) {
  std::vector<Rat> out;
  std::string tok;
  std::stringstream ss(text);
  while (std::getline(ss, tok, ',')) out.push_back(Rat::parse(tok));
  if (out.empty()) throw std::invalid_argument("expected a comma separated rational list");
  return out;
}

// ambient coordinates, zero padded and projected to the root span (A-type
// weights are commonly written in the first rank coordinates)
RVec parse_highest(const RootSystem& rs, const std::string& text) {
  std::vector<Rat> vals = parse_rats(text);
  if (static_cast<int>(vals.size()) > rs.ambient_dim)
    throw std::invalid_argument("highest weight has more coordinates than the ambient space");
  RVec x = RVec::Constant(rs.ambient_dim, Rat(0));
  for (size_t i = 0; i < vals.size(); ++i) x[static_cast<Eigen::Index>(i)] = vals[i];
  return project_to_root_span(rs, x);
}

struct ParsedGroup {
  std::string text;
  GroupSpec spec;
  std::optional<MatrixGroup> mg;
};

ParsedGroup parse_group(const std::string& text) {
  ParsedGroup out;
  out.text = text;
  if (text.empty()) return out;  // plain split form of the ambient type
  auto read_ints = [&](size_t prefix) {
    std::string inner = text.substr(prefix);
    if (inner.size() < 3 || inner.front() != '(' || inner.back() != ')')
      throw std::invalid_argument("group must look like so(4,3) or sl(3): got '" + text + "'");
    inner = inner.substr(1, inner.size() - 2);
    std::vector<int> nums;
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) nums.push_back(std::stoi(tok));
    return nums;
  };
  if (text.rfind("so", 0) == 0) {
    auto nums = read_ints(2);
    if (nums.size() != 2) throw std::invalid_argument("so groups take two integers");
    out.spec.kind = GroupSpec::Kind::so_pq;
    out.spec.p = nums[0];
    out.spec.q = nums[1];
    out.mg = so_pq_standard(nums[0], nums[1]);
  } else if (text.rfind("sl", 0) == 0) {
    auto nums = read_ints(2);
    if (nums.size() != 1) throw std::invalid_argument("sl groups take one integer");
    out.spec.kind = GroupSpec::Kind::split;
    out.mg = sl_n_adjoint(nums[0]);
  } else {
    throw std::invalid_argument("unknown group '" + text + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// report plumbing

njson rvec_json(const RVec& v) {
  njson a = njson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i].str());
  return a;
}

template <typename S>
njson vec_json(const VecX<S>& v) {
  njson a = njson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_double(v[i]));
  return a;
}

template <typename S>
njson mat_json(const MatX<S>& m) {
  njson rows = njson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    njson r = njson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(to_double(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

int emit(const njson& report, const std::string& out, int code) {
  std::string text = report.dump(2);
  text.push_back('\n');
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + out + "'");
    f << text;
  }
  return code;
}

std::string system_name(const RootSystem& rs) { return rs.label + std::to_string(rs.rank); }

// ---------------------------------------------------------------------------
// subcommands

struct ConditionRows {
  njson table;
  std::string reason;  // first non-satisfied entry, machine readable
  bool failed = false, numeric = false;
};

ConditionRows condition_rows(const ConditionReport& rep) {
  ConditionRows out;
  std::vector<std::pair<const char*, Status>> rows{
      {"zero_weight", rep.zero_weight},
      {"cond_ii_no_swinging", rep.cond_ii_no_swinging},
      {"cond_ia_fixed_vector", rep.cond_ia_fixed_vector},
      {"cond_ib_w0_moves", rep.cond_ib_w0_moves}};
  for (auto& [name, st] : rows) {
    out.table[name] = to_string(st);
    if (st != Status::SATISFIED && out.reason.empty())
      out.reason = std::string(name) + " " + to_string(st);
    out.failed = out.failed || st == Status::FAILED;
    out.numeric = out.numeric || st == Status::NEEDS_NUMERIC;
  }
  return out;
}

int run_check_rep(const std::string& system, const std::string& highest, const std::string& group,
                  const std::string& out) {
  RootSystem rs = parse_system(system);
  RVec lam = parse_highest(rs, highest);
  ParsedGroup pg = parse_group(group);
  ConditionRows rows = condition_rows(main_theorem_report(rs, lam, pg.spec));
  njson j;
  j["command"] = "check-rep";
  j["system"] = system_name(rs);
  j["highest"] = rvec_json(lam);
  j["group"] = group.empty() ? njson(nullptr) : njson(group);
  j["conditions"] = rows.table;
  const auto rep = main_theorem_report(rs, lam, pg.spec);
  j["swinging_witness"] =
      rep.swinging_witness ? rvec_json(*rep.swinging_witness) : njson(nullptr);
  j["verdict"] = rows.failed ? "FAILED" : (rows.numeric ? "NEEDS_NUMERIC" : "SATISFIED");
  j["reason"] = rows.failed ? njson(rows.reason) : njson(nullptr);
  return emit(j, out, rows.failed ? 2 : 0);
}

bool rvec_eq(const RVec& a, const RVec& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

int run_weights(const std::string& system, const std::string& highest, bool oracle,
                const std::string& out) {
  RootSystem rs = parse_system(system);
  RVec lam = parse_highest(rs, highest);
  WeightSet ws = weight_set(rs, lam);
  njson j;
  j["command"] = "weights";
  j["system"] = system_name(rs);
  j["highest"] = rvec_json(lam);
  j["count"] = ws.weights.size();
  njson arr = njson::array();
  for (const RVec& w : ws.weights) arr.push_back(rvec_json(w));
  j["weights"] = arr;
  if (oracle) {
    std::vector<RVec> ow = oracle_weight_set(rs, lam);
    bool agrees = ow.size() == ws.weights.size();
    for (size_t i = 0; agrees && i < ow.size(); ++i) agrees = rvec_eq(ow[i], ws.weights[i]);
    j["oracle"] = njson{{"count", ow.size()}, {"agrees", agrees}};
  }
  return emit(j, out, 0);
}

int run_types(const std::string& system, const std::string& highest, const std::string& out) {
  RootSystem rs = parse_system(system);
  RVec lam = parse_highest(rs, highest);
  WeightSet ws = weight_set(rs, lam);
  std::vector<GenericType> classes = enumerate_generic_types(ws);
  njson j;
  j["command"] = "types";
  j["system"] = system_name(rs);
  j["highest"] = rvec_json(lam);
  j["class_count"] = classes.size();
  njson arr = njson::array();
  for (const GenericType& gt : classes) {
    njson c;
    c["witness"] = rvec_json(gt.witness);
    c["positive"] = gt.cls.omega_pos.size();
    c["negative"] = gt.cls.omega_neg.size();
    c["zero"] = gt.cls.omega_zero.size();
    arr.push_back(c);
  }
  j["classes"] = arr;
  return emit(j, out, 0);
}

// default reference direction: a regular dominant vector of the restricted
// Cartan, unit top coefficient
RVec default_x0(const MatrixGroup& mg) {
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    RVec x(mg.q);
    for (int i = 0; i < mg.q; ++i) x[i] = Rat(mg.q - i, mg.q);
    return x;
  }
  RVec x(mg.n);
  Rat mean(mg.n - 1, 2);
  for (int i = 0; i < mg.n; ++i) x[i] = Rat(Rat(mg.n - 1 - i) - mean) / Rat(std::max(1, mg.n - 1));
  return x;
}

ReferenceVector reference_for(const MatrixGroup& mg, const RVec& x0) {
  RVec lam;
  if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
    lam = RVec::Constant(mg.rs.ambient_dim, Rat(0));
    lam[0] = Rat(1);
  } else {
    lam = highest_root(mg.rs);
  }
  WeightSet ws = weight_set(mg.rs, lam);
  ReferenceVector ref = extreme_representative(x0, ws, weyl_group(mg.rs));
  Rat top(0);
  for (Eigen::Index i = 0; i < ref.x0.size(); ++i)
    if (Rat(abs(ref.x0[i]) - top).sign() > 0) top = abs(ref.x0[i]);
  ref.x0 = ref.x0 * Rat(Rat(1) / top);
  return ref;
}

int run_simulate(const std::string& group, int k, double s_target, int L, uint64_t seed,
                 double m0_norm, const std::string& x0_text, int threads,
                 const std::string& out) {
  ParsedGroup pg = parse_group(group);
  if (!pg.mg) throw std::invalid_argument("simulate requires a matrix group such as so(2,1)");
  MatrixGroup mg = *pg.mg;

  // refuse inadmissible targets with the same machine-readable reason shape
  // that check-rep reports
  {
    RVec lam;
    if (mg.kind == MatrixGroup::Kind::so_pq_standard) {
      lam = RVec::Constant(mg.rs.ambient_dim, Rat(0));
      lam[0] = Rat(1);
    } else {
      lam = highest_root(mg.rs);
    }
    ConditionRows rows = condition_rows(main_theorem_report(mg.rs, lam, pg.spec));
    if (!rows.reason.empty()) {
      njson j;
      j["command"] = "simulate";
      j["config"] = njson{{"group", group}};
      j["verdict"] = "FAILED";
      j["reason"] = rows.reason;
      return emit(j, out, 2);
    }
  }

  int acoords = mg.kind == MatrixGroup::Kind::so_pq_standard ? mg.q : mg.n;
  RVec x0;
  if (x0_text.empty()) {
    x0 = default_x0(mg);
  } else {
    std::vector<Rat> vals = parse_rats(x0_text);
    if (static_cast<int>(vals.size()) != acoords)
      throw std::invalid_argument("x0 needs exactly " + std::to_string(acoords) +
                                  " coordinates for " + group);
    x0.resize(acoords);
    for (int i = 0; i < acoords; ++i) x0[i] = vals[static_cast<size_t>(i)];
  }
  ReferenceVector ref = reference_for(mg, x0);

  GeneratorSet<BigFloat> gs = synthesize<BigFloat>(mg, ref, k, s_target, m0_norm, seed);
  AdditivityReport rep = additivity_report(gs, L, threads);

  njson j;
  j["command"] = "simulate";
  njson cfg;
  cfg["group"] = group;
  cfg["k"] = k;
  cfg["s_target"] = s_target;
  cfg["L"] = L;
  cfg["seed"] = seed;
  cfg["m0_norm"] = m0_norm;
  cfg["x0"] = rvec_json(ref.x0);
  j["config"] = cfg;

  njson gens = njson::array();
  for (const AffineMap<BigFloat>& g : gs.gens) {
    njson e;
    e["linear"] = mat_json(g.linear);
    e["translation"] = vec_json(g.translation);
    gens.push_back(e);
  }
  j["generators"] = gens;

  njson rows = njson::array();
  for (const WordRow& row : rep.rows) {
    njson r;
    r["word"] = word_str(row.word);
    r["type_x0"] = row.type_x0;
    r["s"] = row.s;
    r["C_bar"] = row.cbar;
    r["M"] = vec_json(row.m);
    r["defect"] = row.defect;
    rows.push_back(r);
  }
  j["rows"] = rows;

  njson summary;
  summary["power"] = gs.power;
  njson sv = njson::array();
  for (double s : gs.s_values) sv.push_back(s);
  summary["s_values"] = sv;
  summary["cbar_pairs_max"] = gs.cbar_pairs.maxCoeff();
  summary["eps_hat"] = rep.eps_hat;
  summary["max_defect_per_length"] = rep.max_defect_per_length;
  summary["all_type_x0"] = rep.all_type_x0;
  summary["defect_bounded"] = rep.defect_bounded;
  summary["halfline_ok"] = rep.halfline_ok;
  j["summary"] = summary;

  bool ok = rep.all_type_x0 && rep.defect_bounded && rep.halfline_ok;
  j["verdict"] = ok ? "OK" : "FAILED";
  j["reason"] = ok               ? njson(nullptr)
                : !rep.all_type_x0 ? njson("type check failed on a word")
                : !rep.defect_bounded
                    ? njson("defect per length exceeded the measured envelope")
                    : njson("an invariant left the half line");
  return emit(j, out, ok ? 0 : 2);
}

// ---------------------------------------------------------------------------
// verification suites

struct CheckList {
  njson checks = njson::array();
  bool all_ok = true;
  void add(const std::string& name, bool ok, njson extra = njson::object()) {
    njson c;
    c["name"] = name;
    c["ok"] = ok;
    for (auto& [key, val] : extra.items()) c[key] = val;
    checks.push_back(c);
    all_ok = all_ok && ok;
  }
  template <typename F>
  void guarded(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(name, false, njson{{"error", e.what()}});
    }
  }
};

void suite_weights(CheckList& cl) {
  struct Case {
    const char* system;
    const char* highest;
    size_t count;
  };
  for (const Case& c : {Case{"B2", "2,1", 21}, Case{"A2", "1,0,-1", 7}, Case{"A1", "3", 4},
                        Case{"C4", "1,1,1,1", 41}}) {
    std::string name = std::string(c.system) + " " + c.highest;
    cl.guarded(name, [&] {
      RootSystem rs = parse_system(c.system);
      RVec lam = parse_highest(rs, c.highest);
      WeightSet ws = weight_set(rs, lam);
      std::vector<RVec> ow = oracle_weight_set(rs, lam);
      bool agrees = ow.size() == ws.weights.size();
      for (size_t i = 0; agrees && i < ow.size(); ++i) agrees = rvec_eq(ow[i], ws.weights[i]);
      cl.add(name, ws.weights.size() == c.count && agrees,
             njson{{"count", ws.weights.size()}, {"oracle_count", ow.size()}});
    });
  }
}

void suite_typing(CheckList& cl) {
  for (int n = 1; n <= 5; ++n) {
    std::string name = "so(" + std::to_string(n + 1) + "," + std::to_string(n) + ") standard";
    cl.guarded(name, [&] {
      RootSystem rs = build_root_system("B", n);
      RVec lam = RVec::Constant(rs.ambient_dim, Rat(0));
      lam[0] = Rat(1);
      GroupSpec spec;
      spec.kind = GroupSpec::Kind::so_pq;
      spec.p = n + 1;
      spec.q = n;
      ConditionRows rows = condition_rows(main_theorem_report(rs, lam, spec));
      bool expect_ok = n % 2 == 1;
      bool got_ok = !rows.failed && !rows.numeric;
      bool ib_failed = rows.table["cond_ib_w0_moves"] == "FAILED";
      cl.add(name, expect_ok ? got_ok : ib_failed, njson{{"conditions", rows.table}});
    });
  }
  for (const char* sys : {"A2", "B2"}) {
    std::string name = std::string(sys) + " adjoint";
    cl.guarded(name, [&] {
      RootSystem rs = parse_system(sys);
      ConditionRows rows = condition_rows(main_theorem_report(rs, highest_root(rs), GroupSpec{}));
      cl.add(name, !rows.failed && !rows.numeric, njson{{"conditions", rows.table}});
    });
  }
  cl.guarded("A2 cubed standard swings", [&] {
    RootSystem rs = parse_system("A2");
    RVec lam = parse_highest(rs, "3,0");
    ConditionReport rep = main_theorem_report(rs, lam, GroupSpec{});
    RVec expect(3);
    expect << Rat(-1), Rat(2), Rat(-1);
    bool ok = rep.cond_ii_no_swinging == Status::FAILED && rep.swinging_witness &&
              rvec_eq(*rep.swinging_witness, expect);
    cl.add("A2 cubed standard swings", ok,
           njson{{"witness", rep.swinging_witness ? rvec_json(*rep.swinging_witness)
                                                  : njson(nullptr)}});
  });
}

// mild seeded elements: conjugated regular torus points whose powers stay
// inside double's singular value floor
MatX<double> mild_conjugator(const MatrixGroup& mg, detail::Rng& rng) {
  RMat A = RMat::Constant(carrier_dim(mg), carrier_dim(mg), Rat(0));
  for (const RMat& B : compact_algebra_basis(mg)) A += B * Rat(rng.pick(-2, 2), 16);
  return rat_to<double>(cayley(A));
}

VecX<double> mild_cartan(const MatrixGroup& mg, detail::Rng& rng) {
  int amb = mg.kind == MatrixGroup::Kind::so_pq_standard ? mg.q : mg.n;
  VecX<double> y(amb);
  for (int i = 0; i < amb; ++i)
    y[i] = (amb - i) * (16.0 + static_cast<double>(rng.pick(0, 4))) / 64.0;
  if (mg.kind == MatrixGroup::Kind::sl_n_adjoint) y.array() -= y.mean();
  return y;
}

void suite_spectra(CheckList& cl, uint64_t seed, double tol) {
  for (const MatrixGroup& mg : {so_pq_standard(3, 2), sl_n_adjoint(3)}) {
    std::string name = mg.kind == MatrixGroup::Kind::so_pq_standard ? "so(3,2)" : "sl(3) adjoint";
    cl.guarded(name, [&] {
      detail::Rng rng(seed);
      int amb = mg.kind == MatrixGroup::Kind::so_pq_standard ? mg.q : mg.n;
      double worst_jd = 0, worst_power = 0;
      for (int trial = 0; trial < 20; ++trial) {
        VecX<double> y = mild_cartan(mg, rng);
        MatX<double> h = mild_conjugator(mg, rng);
        MatX<double> g =
            h * exp_cartan<double>(mg, y) * h.fullPivLu().solve(MatX<double>::Identity(h.rows(), h.rows()));
        VecX<double> jd = jordan_projection<double>(mg, g, std::max(tol, 1e-6)).value;
        VecX<double> ct = cartan_projection<double>(mg, g, std::max(tol, 1e-6)).value;
        for (int i = 0; i < amb; ++i) worst_jd = std::max(worst_jd, std::abs(jd[i] - y[i]));
        (void)ct;  // the residual gate inside the call is the check
        MatX<double> p = g;
        for (int s = 0; s < 6; ++s) p = MatX<double>(p * p);
        VecX<double> ct64 = cartan_projection<double>(mg, p, 1e-4).value;
        for (int i = 0; i < amb; ++i)
          worst_power = std::max(worst_power, std::abs(jd[i] - ct64[i] / 64.0));
      }
      cl.add(name, worst_jd < 1e-8 && worst_power < 1e-3,
             njson{{"max_jordan_error", worst_jd}, {"max_power_gap", worst_power}});
    });
  }
}

void suite_proximal(CheckList& cl, uint64_t seed) {
  MatrixGroup mg = so_pq_standard(3, 2);
  std::vector<double> shift, strength;
  for (double t : {3.0, 6.0}) {
    std::string name = "product law at depth " + njson(t).dump();
    cl.guarded(name, [&] {
      detail::Rng rng(seed);
      VecX<double> x(2);
      x << t, t / 2.0;
      MatX<double> boost = exp_cartan<double>(mg, x);
      MatX<double> h1 = mild_conjugator(mg, rng), h2 = mild_conjugator(mg, rng);
      MatX<double> g1 = h1 * boost * h1.transpose();  // cayley of a compact A is orthogonal
      MatX<double> g2 = h2 * boost * h2.transpose();
      ProximalProductReport<double> rep = check_proximal_product<double>(g1, g2, 0.0);
      shift.push_back(rep.shift_ratio);
      strength.push_back(rep.strength_ratio);
      bool ok = rep.shift_ratio > 0 && rep.shift_ratio < 100 && rep.strength_ratio > 0 &&
                rep.strength_ratio < 100 && rep.radius_ratio > 0 && rep.radius_ratio <= 1.01;
      cl.add(name, ok,
             njson{{"shift_ratio", rep.shift_ratio},
                   {"strength_ratio", rep.strength_ratio},
                   {"radius_ratio", rep.radius_ratio}});
    });
  }
  cl.guarded("ratios stable across depths", [&] {
    bool ok = shift.size() == 2 && strength.size() == 2;
    auto spread = [](double a, double b) {
      double lo = std::min(a, b), hi = std::max(a, b);
      return lo > 0 ? hi / lo : 1e300;
    };
    if (ok) ok = spread(shift[0], shift[1]) < 10 && spread(strength[0], strength[1]) < 10;
    cl.add("ratios stable across depths", ok, njson::object());
  });
}

ReferenceVector so21_reference() {
  MatrixGroup mg = so_pq_standard(2, 1);
  RVec x0(1);
  x0 << Rat(1);
  return reference_for(mg, x0);
}

void suite_products(CheckList& cl, uint64_t seed, int threads) {
  (void)threads;
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = so21_reference();
  std::vector<double> shift, strength;
  for (double st : {1e-2, 1e-3}) {
    std::string name = "affine product law at target " + njson(st).dump();
    cl.guarded(name, [&] {
      GeneratorSet<BigFloat> gs = synthesize<BigFloat>(mg, ref, 2, st, 1.0, seed);
      AffineMap<BigFloat> g = gs.gens[0], h = gs.gens[1], gh = compose(g, h);
      DynamicalSplit<BigFloat> spg = dynamical_split(g), sph = dynamical_split(h),
                               spgh = dynamical_split(gh);
      double sg = to_double(contraction_strength(g, spg));
      double sh = to_double(contraction_strength(h, sph));
      double sgh = to_double(contraction_strength(gh, spgh));
      double a = hausdorff_angle<BigFloat>(spgh.a_ge, spg.a_ge) / sg;
      double r = sgh / (sg * sh);
      shift.push_back(a);
      strength.push_back(r);
      cl.add(name, a > 0 && a < 1e3 && r > 0 && r < 1e3,
             njson{{"shift_ratio", a}, {"strength_ratio", r}});
    });
  }
  cl.guarded("ratios stable across targets", [&] {
    bool ok = shift.size() == 2 && strength.size() == 2;
    auto spread = [](double a, double b) {
      double lo = std::min(a, b), hi = std::max(a, b);
      return lo > 0 ? hi / lo : 1e300;
    };
    if (ok) ok = spread(shift[0], shift[1]) < 10 && spread(strength[0], strength[1]) < 10;
    cl.add("ratios stable across targets", ok, njson::object());
  });
}

void suite_additivity(CheckList& cl, uint64_t seed, double tol, int threads) {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = so21_reference();
  cl.guarded("short word additivity", [&] {
    GeneratorSet<BigFloat> gs = synthesize<BigFloat>(mg, ref, 2, 1e-2, 1.0, seed);
    AdditivityReport rep = additivity_report(gs, 3, threads);
    cl.add("short word additivity",
           rep.all_type_x0 && rep.defect_bounded && rep.halfline_ok,
           njson{{"eps_hat", rep.eps_hat},
                 {"max_defect_per_length", rep.max_defect_per_length}});

    FixedSpaceAction fa = w0_action_on_fixed_space(mg);
    double worst = 0;
    std::map<std::string, const WordRow*> by_key;
    for (const WordRow& row : rep.rows) by_key[word_str(row.word)] = &row;
    for (const WordRow& row : rep.rows) {
      const WordRow* inv = by_key.at(word_str(inverse_word(row.word)));
      worst = std::max(worst, (inv->m + fa.carrier * row.m).norm());
    }
    cl.add("inverse words flip through the longest element", worst < std::max(tol, 1e-6),
           njson{{"max_gap", worst}});
  });
}

void suite_properness(CheckList& cl, uint64_t seed, int threads) {
  MatrixGroup mg = so_pq_standard(2, 1);
  ReferenceVector ref = so21_reference();
  cl.guarded("displacement slope", [&] {
    GeneratorSet<double> gs = synthesize<double>(mg, ref, 2, 1e-2, 1.0, seed);
    PropernessReport rep = properness_proxy(gs, 4, 50.0, 3, threads);
    cl.add("displacement slope", rep.positive_slope, njson{{"slope", rep.slope}});
    GeneratorSet<double> broken = gs;
    broken.gens[1].translation = -broken.gens[1].translation;
    PropernessReport neg = properness_proxy(broken, 4, 50.0, 3, threads);
    cl.add("flipped generator fails the slope", !neg.positive_slope,
           njson{{"slope", neg.slope}});
  });
}

int run_verify(const std::string& suite, uint64_t seed, double tol, int threads,
               const std::string& out) {
  CheckList cl;
  if (suite == "weights")
    suite_weights(cl);
  else if (suite == "typing")
    suite_typing(cl);
  else if (suite == "spectra")
    suite_spectra(cl, seed, tol);
  else if (suite == "proximal")
    suite_proximal(cl, seed);
  else if (suite == "products")
    suite_products(cl, seed, threads);
  else if (suite == "additivity")
    suite_additivity(cl, seed, tol, threads);
  else if (suite == "properness")
    suite_properness(cl, seed, threads);
  else
    throw std::invalid_argument("unknown suite '" + suite + "'");
  njson j;
  j["command"] = "verify";
  j["suite"] = suite;
  j["checks"] = cl.checks;
  j["ok"] = cl.all_ok;
  return emit(j, out, cl.all_ok ? 0 : 2);
}

}  // namespace
}  // namespace aff

int main(int argc, char** argv) {
  CLI::App app{"affine action toolkit"};
  app.require_subcommand(1);

  std::string system, highest, group, out, x0;
  int k = 2, L = 3, threads = 1;
  double s_target = 1e-2, tol = 1e-6, m0_norm = 1.0;
  uint64_t seed = 42;
  bool oracle = false;
  std::string suite;

  CLI::App* c_check = app.add_subcommand("check-rep", "condition report for a representation");
  c_check->add_option("--system", system, "root system, e.g. B3")->required();
  c_check->add_option("--highest", highest, "highest weight, ambient coordinates")->required();
  c_check->add_option("--group", group, "matrix group, e.g. so(4,3); default split");
  c_check->add_option("--out", out, "write the JSON report to this file");

  CLI::App* c_weights = app.add_subcommand("weights", "weight set of a representation");
  c_weights->add_option("--system", system)->required();
  c_weights->add_option("--highest", highest)->required();
  c_weights->add_flag("--oracle", oracle, "cross check against the brute-force oracle");
  c_weights->add_option("--out", out);

  CLI::App* c_types = app.add_subcommand("types", "generic type classes in the dominant cone");
  c_types->add_option("--system", system)->required();
  c_types->add_option("--highest", highest)->required();
  c_types->add_option("--out", out);

  CLI::App* c_sim = app.add_subcommand("simulate", "synthesize a Schottky family and report");
  c_sim->add_option("--group", group, "matrix group, e.g. so(2,1)")->required();
  c_sim->add_option("--k", k, "number of generators");
  c_sim->add_option("--s-target", s_target, "contraction strength target");
  c_sim->add_option("--L", L, "maximum word length");
  c_sim->add_option("--seed", seed, "random seed");
  c_sim->add_option("--m0-norm", m0_norm, "target invariant norm");
  c_sim->add_option("--x0", x0, "reference direction, restricted Cartan coordinates");
  c_sim->add_option("--threads", threads, "worker threads for the report");
  c_sim->add_option("--out", out);

  CLI::App* c_verify = app.add_subcommand("verify", "run a verification suite");
  c_verify
      ->add_option("--suite", suite,
                   "weights, typing, spectra, proximal, products, additivity, properness")
      ->required();
  c_verify->add_option("--seed", seed);
  c_verify->add_option("--tol", tol);
  c_verify->add_option("--threads", threads);
  c_verify->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_check->parsed()) return aff::run_check_rep(system, highest, group, out);
    if (c_weights->parsed()) return aff::run_weights(system, highest, oracle, out);
    if (c_types->parsed()) return aff::run_types(system, highest, out);
    if (c_sim->parsed())
      return aff::run_simulate(group, k, s_target, L, seed, m0_norm, x0, threads, out);
    if (c_verify->parsed()) return aff::run_verify(suite, seed, tol, threads, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
