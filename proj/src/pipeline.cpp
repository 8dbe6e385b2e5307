#include "boxlite/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <future>
#include <tuple>

#include <json.hpp>

#include "boxlite/analytic.hpp"
#include "boxlite/errors.hpp"

namespace boxlite {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return buf;
}

std::set<Axiom> known_true_set(const KnowledgeBase& train, const std::vector<std::vector<Axiom>>& extra) {
  std::set<Axiom> out;
  for (const auto& ax : train.abox) out.insert(normalize_axiom(ax));
  for (const auto& list : extra)
    for (const auto& ax : list) out.insert(normalize_axiom(ax));
  return out;
}

SweepResult run_sweep(const KnowledgeBase& train, const std::vector<Axiom>& valid, const std::set<Axiom>& known_true,
                      const RunConfig& cfg) {
  if (cfg.l1.empty() || cfg.l2.empty() || cfg.l3.empty()) throw Error("lambda grids must be nonempty");
  SweepResult out;
  auto t0 = std::chrono::steady_clock::now();
  CompileOptions co;
  co.cfg = cfg.world;
  co.exclude_entailed_negatives = cfg.exclude_entailed_negatives;
  const CompiledProblem base = compile_problem(train, co);
  out.compiles = 1;
  out.compile_seconds = seconds_since(t0);

  SolveOptions sopts = cfg.solver;
  if (cfg.analytic_warm_start) sopts.warm_start = analytic_start(train, base.layout);

  std::vector<std::tuple<double, double, double>> grid;
  for (double a : cfg.l1)
    for (double b : cfg.l2)
      for (double c : cfg.l3) grid.push_back({a, b, c});

  auto run_point = [&](std::tuple<double, double, double> lam) {
    SweepPoint pt;
    std::tie(pt.l1, pt.l2, pt.l3) = lam;
    CompiledProblem p = base;
    p.objective.l1 = pt.l1;
    p.objective.l2 = pt.l2;
    p.objective.l3 = pt.l3;
    auto ts = std::chrono::steady_clock::now();
    SolveResult r = solve(p, sopts);
    pt.solve_seconds = seconds_since(ts);
    pt.diag = r.diag;
    if (!valid.empty()) {
      BoxInterpretation eta = extract_interpretation(p, r.z, std::max(sopts.tol_feas, r.diag.residual));
      pt.valid = compute_metrics(rank_filtered(eta, valid, known_true), cfg.ks);
    }
    pt.z = std::move(r.z);
    return pt;
  };

  const size_t jobs = static_cast<size_t>(std::max(cfg.jobs, 1));
  for (size_t at = 0; at < grid.size(); at += jobs) {
    std::vector<std::future<SweepPoint>> batch;
    for (size_t i = at; i < std::min(grid.size(), at + jobs); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_point, grid[i]));
    for (auto& f : batch) out.points.push_back(f.get());
  }

  auto key = [&](const SweepPoint& p) {
    auto h = p.valid.hits.find(10);
    double h10 = h == p.valid.hits.end() ? 0.0 : h->second;
    return std::tuple{-p.valid.mrr, -h10, p.l1, p.l2, p.l3};
  };
  for (int i = 0; i < static_cast<int>(out.points.size()); ++i)
    if (out.best < 0 || key(out.points[i]) < key(out.points[out.best])) out.best = i;
  return out;
}

std::string sweep_to_json(const SweepResult& r) {
  nlohmann::json j;
  j["compiles"] = r.compiles;
  j["compile_seconds"] = format_seconds(r.compile_seconds);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    nlohmann::json hits = nlohmann::json::object();
    for (auto [k, v] : p.valid.hits) hits[std::to_string(k)] = v;
    pts.push_back({{"l1", p.l1},
                   {"l2", p.l2},
                   {"l3", p.l3},
                   {"valid_mrr", p.valid.mrr},
                   {"valid_hits", hits},
                   {"solve_seconds", format_seconds(p.solve_seconds)},
                   {"iterations", p.diag.iterations},
                   {"objective", p.diag.objective},
                   {"residual", p.diag.residual},
                   {"stop_reason", p.diag.stop_reason}});
  }
  j["points"] = pts;
  j["best"] = r.best;
  return j.dump(2);
}

}  // namespace boxlite
