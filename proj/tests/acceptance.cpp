// One PASS/FAIL line per acceptance criterion; exit status 1 if any line fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "boxlite/analytic.hpp"
#include "boxlite/data.hpp"
#include "boxlite/eval.hpp"
#include "boxlite/geometry.hpp"
#include "boxlite/pipeline.hpp"
#include "boxlite/problem.hpp"
#include "boxlite/reasoner.hpp"
#include "boxlite/solver.hpp"
#include "oracles.hpp"

using namespace boxlite;

namespace {

// pinned tolerances
constexpr double kGridStep = 1e-3;
constexpr double kGridTol = 2e-3;
constexpr double kConvexTol = 1e-9;
constexpr double kResidualAnalytic = 1e-12;
constexpr double kObjTol = 1e-4;
constexpr double kResidualSolve = 1e-6;
constexpr double kSatTol = 1e-6;
constexpr double kSocpTol = 1e-8;
constexpr double kCompileRatio = 12.0;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ≤ 2 concepts, ≤ 2 roles, ≤ 2 individuals
std::vector<KnowledgeBase> small_fixtures() {
  std::mt19937_64 rng(2024);
  std::vector<KnowledgeBase> out;
  for (int k = 0; k < 25; ++k) {
    int nc = 1 + k % 2, nr = 1 + (k / 2) % 2, ni = k % 3;
    out.push_back(oracle::random_sat_kb(rng, nc, nr, ni, 2 + k % 3, ni ? 1 + k % 3 : 0));
  }
  return out;
}

Outcome canonical_model_agreement() {
  auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0, checked = 0;
  for (const auto& kb : small_fixtures()) {
    Closure cl = compute_closure(kb);
    Interpretation I = canonical_model(kb, cl, Witness::Full);
    for (const auto& ax : axiom_space(kb.sig)) {
      ++checked;
      mismatches += model_check(I, ax) != entails(cl, ax);
    }
  }
  double t = seconds_since(t0);
  return {mismatches == 0 && t < 10.0,
          std::to_string(checked) + " axioms, " + std::to_string(mismatches) + " mismatches, " + fmt("%.2f", t) + " s"};
}

Outcome oracle_equivalence() {
  int mismatches = 0, conclusive = 0;
  for (const auto& kb : small_fixtures()) {
    auto space = axiom_space(kb.sig);
    auto bf = oracle::enumerate_models(kb, space, 3);
    if (!bf.found_model) continue;
    for (size_t i = 0; i < space.size(); ++i)
      if (bf.refuted[i]) {
        ++conclusive;
        mismatches += entails(kb, space[i]);
      }
  }
  return {mismatches == 0 && conclusive > 0,
          std::to_string(conclusive) + " conclusive axioms, " + std::to_string(mismatches) + " mismatches"};
}

Outcome box_algebra() {
  std::mt19937_64 rng(7);
  const double s = 4.0;
  WorldConfig cfg{3, s, 0.1};
  // dyadic grid, so -s - (-s - L) is exact
  std::uniform_int_distribution<int> grid(-256, 256);
  auto coord = [&] { return grid(rng) / 64.0; };
  int failures = 0;
  for (int k = 0; k < 10000; ++k) {
    Box b = Box::uniform(cfg.d, 0, 0), inner = b;
    for (int i = 0; i < cfg.d; ++i) {
      double x = coord(), y = coord();
      b.lower[i] = std::min(x, y);
      b.upper[i] = std::max(x, y);
      std::uniform_real_distribution<double> u(b.lower[i], b.upper[i]);
      double p = u(rng), q = u(rng);
      inner.lower[i] = std::min(p, q);
      inner.upper[i] = std::max(p, q);
    }
    Box c = complement(b, cfg), ci = complement(inner, cfg);
    Box back = complement(c, cfg);
    bool ok = back.lower == b.lower && back.upper == b.upper;
    for (int i = 0; i < cfg.d; ++i) {
      ok = ok && (c.upper[i] - c.lower[i]) == 2 * s - (b.upper[i] - b.lower[i]);
      // inner ⊆ b implies comp(b) ⊆ comp(inner)
      ok = ok && ci.lower[i] <= c.lower[i] && c.upper[i] <= ci.upper[i];
    }
    failures += !ok;
  }
  return {failures == 0, "10000 boxes, " + std::to_string(failures) + " failures"};
}

Outcome signed_distance() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> y(1 + k % 4);
    for (double& v : y) v = u(rng);
    worst = std::max(worst, std::abs(sdist_neg_orthant(y) - oracle::grid_sdist(y, kGridStep, 3.0)));
  }
  double violation = 0;
  for (int k = 0; k < 10000; ++k) {
    int m = 1 + k % 4;
    Box b = Box::uniform(m, 0, 0);
    std::vector<double> x(m), y(m), mid(m);
    for (int i = 0; i < m; ++i) {
      double p = u(rng), q = u(rng);
      b.lower[i] = std::min(p, q);
      b.upper[i] = std::max(p, q);
      x[i] = 2 * u(rng);
      y[i] = 2 * u(rng);
      mid[i] = 0.5 * (x[i] + y[i]);
    }
    double v = dist_box(b, mid, 0.01) - 0.5 * (dist_box(b, x, 0.01) + dist_box(b, y, 0.01));
    violation = std::max(violation, v);
  }
  return {worst <= kGridTol && violation <= kConvexTol,
          "grid max error " + fmt("%.2e", worst) + ", convexity max violation " + fmt("%.2e", violation)};
}

Outcome analytic_faithfulness() {
  KnowledgeBase kb = family_tbox();
  BoxInterpretation eta = faithful_embedding(kb, Witness::Reduced, 0.1);
  AuditReport rep = audit_faithfulness(eta, kb);
  CompiledProblem p = compile_problem(kb, {{eta.config.d, 4.0, 0.1}, 0, 0, 0, false});
  double res = feasibility_residual(p, pack(p.layout, eta));
  bool ok = eta.config.d == 112 && rep.all() && res <= kResidualAnalytic && d_min(kb.sig, DminMode::TBox) == 21;
  std::mt19937_64 rng(9);
  int formula_fail = 0;
  for (int k = 0; k < 20; ++k) {
    int nc = k % 4, nr = 1 + k % 3, ni = k % 5;
    Signature sig = oracle::random_kb(rng, nc, nr, ni, 0, 0).sig;
    formula_fail += d_min(sig, DminMode::KB) != nc + nr * (2 + ni + 2 * nr);
    formula_fail += d_min(sig, DminMode::TBox) != nc + 3 * nr;
  }
  ok = ok && formula_fail == 0;
  return {ok, "d = " + std::to_string(eta.config.d) + ", audit " + (rep.all() ? "ok" : "failed") + ", residual " +
                  fmt("%.1e", res) + ", d_min(tbox) = " + std::to_string(d_min(kb.sig, DminMode::TBox)) +
                  ", formula failures " + std::to_string(formula_fail)};
}

// satisfiable KBs whose basic concepts are all satisfiable
std::vector<KnowledgeBase> solver_fixtures() {
  std::mt19937_64 rng(10);
  std::vector<KnowledgeBase> out;
  while (out.size() < 10) {
    int k = static_cast<int>(out.size());
    KnowledgeBase kb = oracle::random_sat_kb(rng, 1 + k % 2, 1, 1 + k % 2, 2, 2);
    Closure cl = compute_closure(kb);
    bool all_sat = true;
    for (Basic b : enumerate_basic_concepts(kb.sig)) all_sat = all_sat && !cl.is_unsat(b);
    if (all_sat) out.push_back(kb);
  }
  return out;
}

Outcome solver_mechanics() {
  auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  long worst_iters = 0;
  double worst_obj = -INFINITY, worst_res = 0;
  for (const auto& kb : solver_fixtures()) {
    int d = d_min(kb.sig, DminMode::KB);
    CompiledProblem p = compile_problem(kb, {{d, 4.0, 0.1}, 0, 0, 0, false});
    SolveOptions o;
    o.max_iters = 50000;
    o.target_objective = -1e-3;
    o.seed = 1;
    SolveResult r = solve(p, o);
    worst_iters = std::max<long>(worst_iters, r.diag.iterations);
    worst_obj = std::max(worst_obj, r.diag.objective);
    worst_res = std::max(worst_res, r.diag.residual);
    bool ok = r.diag.objective <= kObjTol && r.diag.residual <= kResidualSolve;
    if (ok) {
      BoxInterpretation eta = extract_interpretation(p, r.z, kResidualSolve);
      for (const auto& ax : kb.tbox) ok = ok && satisfies(eta, ax, kSatTol);
      for (const auto& ax : kb.abox) ok = ok && satisfies(eta, ax, kSatTol);
      ok = ok && is_box_consistent(eta);
    }
    failed += !ok;
  }
  double t = seconds_since(t0);
  return {failed == 0 && t < 120.0, std::to_string(failed) + "/10 failed, worst objective " + fmt("%.2e", worst_obj) +
                                        ", worst residual " + fmt("%.1e", worst_res) + ", max iterations " +
                                        std::to_string(worst_iters) + ", " + fmt("%.2f", t) + " s"};
}

Outcome accounting() {
  std::mt19937_64 rng(11);
  int fail = 0;
  for (int k = 0; k < 50; ++k) {
    int nc = k % 5, nr = k % 4, ni = k % 6, d = 1 + k % 9;
    if (nc + nr == 0) nc = 1;
    KnowledgeBase kb = oracle::random_kb(rng, nc, nr, ni, 4, ni ? 3 : 0);
    VariableLayout lay = build_layout(kb.sig, {d, 1.0, 0.01});
    fail += lay.n != (2 * ni + 2 * nc + 6 * nr) * d;
    int cis = 0, ris = 0;
    for (const auto& ax : kb.tbox) (ax.kind == Axiom::Kind::CI ? cis : ris) += 1;
    // compilation needs one dimension per basic concept
    const int dc = kb.sig.num_basic() + k % 5;
    auto [cons, t] = compile_constraints(kb, {dc, 1.0, 0.01});
    const int boxes = nc + 3 * nr;
    bool exact = t.ci == 2 * dc * cis && t.ri == 6 * dc * ris && t.consistency == kb.sig.num_basic() &&
                 t.universe == 4 * dc * ni && t.width == 2 * dc * boxes && t.total() == static_cast<int>(cons.size());
    long bound = 2L * dc * cis + 6L * dc * ris + kb.sig.num_basic() + 4L * dc * boxes + 4L * dc * ni;
    fail += !exact || static_cast<long>(cons.size()) > bound;
  }
  return {fail == 0, "50 signatures, " + std::to_string(fail) + " failures"};
}

Outcome socp_equivalence() {
  std::mt19937_64 rng(12);
  double worst = 0, worst_violation = 0;
  int points = 0;
  for (int k = 0; k < 5; ++k) {
    KnowledgeBase kb = oracle::random_sat_kb(rng, 1 + k % 2, 1 + k % 2, 2, 3, 3);
    CompiledProblem p = compile_problem(kb, {{kb.sig.num_basic() + 1, 4.0, 0.1}, 0.3, 0.05, 0.02, false});
    SocpProgram s = export_socp(p);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int j = 0; j < 20; ++j) {
      std::vector<double> z(p.layout.n);
      for (double& v : z) v = u(rng);
      project_polyhedron(z, p.constraints, 20000, 1e-13);
      auto x = complete_auxiliaries(s, z);
      worst = std::max(worst, std::abs(socp_objective(s, x) - evaluate_objective(p, z)));
      worst_violation = std::max(worst_violation, socp_violation(s, x));
      ++points;
    }
  }
  return {points == 100 && worst <= kSocpTol && worst_violation <= kSocpTol,
          std::to_string(points) + " points, max gap " + fmt("%.2e", worst) + ", max violation " +
              fmt("%.2e", worst_violation)};
}

Outcome evaluation_harness() {
  auto f = oracle::rank_fixture();
  std::set<Axiom> known(f.known_true.begin(), f.known_true.end());
  auto rs = rank_filtered(f.eta, f.test, known);
  std::vector<int> ranks;
  for (const auto& r : rs) ranks.push_back(r.filtered_rank);
  EvalReport rep = compute_metrics(rs, {1, 3, 10});
  // oracle metrics from the hand rank table
  double mrr = 0;
  std::map<int, double> hits;
  for (int r : f.expected_ranks) {
    mrr += 1.0 / r;
    for (int k : {1, 3, 10}) hits[k] += r <= k;
  }
  const double n = static_cast<double>(f.expected_ranks.size());
  mrr /= n;
  bool ok = ranks == f.expected_ranks && rep.mrr == mrr;
  for (int k : {1, 3, 10}) ok = ok && rep.hits[k] == hits[k] / n;
  auto g = oracle::with_distractors(f, 13);
  const size_t injected = g.known_true.size() - f.known_true.size();
  std::set<Axiom> gk(g.known_true.begin(), g.known_true.end());
  std::vector<int> moved;
  for (const auto& r : rank_filtered(g.eta, g.test, gk)) moved.push_back(r.filtered_rank);
  bool inv = injected >= 100 && moved == ranks;
  return {ok && inv, "MRR " + fmt("%.4f", rep.mrr) + ", H@1 " + fmt("%.3f", rep.hits[1]) + ", H@3 " +
                         fmt("%.3f", rep.hits[3]) + ", H@10 " + fmt("%.3f", rep.hits[10]) + ", " +
                         std::to_string(injected) + " distractors " + (inv ? "invariant" : "moved ranks")};
}

double median_compile_seconds(const KnowledgeBase& kb, const CompileOptions& co, int reps) {
  std::vector<double> ts;
  for (int k = 0; k < reps; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    CompiledProblem p = compile_problem(kb, co);
    ts.push_back(seconds_since(t0));
  }
  std::sort(ts.begin(), ts.end());
  return ts[ts.size() / 2];
}

Outcome end_to_end() {
  KnowledgeBase full = synthetic_family(400, 4, 31);
  DatasetBundle small = make_bundle(full, {300, 0.7, 0.0, 1}, 2);
  DatasetBundle big = make_bundle(full, {3000, 0.7, 0.0, 1}, 2);
  CompileOptions co{{32, 1.0, 1e-2}, 0.1, 0.01, 0.001, false};
  auto t0 = std::chrono::steady_clock::now();
  CompiledProblem p = compile_problem(small.train_kb, co);
  double compile_s = seconds_since(t0);
  SolveOptions o;
  o.max_iters = 300;
  o.seed = 1;
  SolveResult r = solve(p, o);
  BoxInterpretation eta = extract_interpretation(p, r.z, std::max(o.tol_feas, r.diag.residual));
  std::set<Axiom> known = known_true_set(small.train_kb, {small.valid, small.test});
  EvalReport rep = compute_metrics(rank_filtered(eta, small.test, known), {1, 3, 10});
  double ts = median_compile_seconds(small.train_kb, co, 5), tb = median_compile_seconds(big.train_kb, co, 5);
  double data_ratio = static_cast<double>(big.train_kb.abox.size()) / small.train_kb.abox.size();
  double ratio = tb / ts;
  bool ok = small.train_kb.abox.size() >= 300 && r.diag.residual <= o.tol_feas && rep.mrr > 0 && ratio <= kCompileRatio;
  return {ok, std::to_string(small.train_kb.abox.size()) + " train / " + std::to_string(small.test.size()) +
                  " test, compile " + fmt("%.3f", compile_s) + " s, solve residual " + fmt("%.1e", r.diag.residual) +
                  ", test MRR " + fmt("%.4f", rep.mrr) + ", compile ratio " + fmt("%.2f", ratio) + " for " +
                  fmt("%.1f", data_ratio) + "x data"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"canonical model", canonical_model_agreement},
      {"reasoner vs brute force", oracle_equivalence},
      {"box algebra", box_algebra},
      {"signed distance", signed_distance},
      {"analytic faithfulness", analytic_faithfulness},
      {"solver mechanics", solver_mechanics},
      {"variable/constraint accounting", accounting},
      {"SOCP export", socp_equivalence},
      {"evaluation harness", evaluation_harness},
      {"end-to-end smoke", end_to_end},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
