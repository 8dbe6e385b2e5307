#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "boxlite/eval.hpp"
#include "boxlite/problem.hpp"
#include "boxlite/solver.hpp"

namespace boxlite {

struct RunConfig {
  WorldConfig world{32, 1.0, 1e-2};
  std::vector<double> l1{0.0}, l2{0.0}, l3{0.0};
  SolveOptions solver;
  bool exclude_entailed_negatives = false;
  bool analytic_warm_start = false;
  std::vector<int> ks{1, 3, 10};
  int jobs = 1;
};

struct SweepPoint {
  double l1 = 0, l2 = 0, l3 = 0;
  double solve_seconds = 0;
  SolveDiagnostics diag;
  EvalReport valid;
  std::vector<double> z;
};

struct SweepResult {
  int compiles = 0;
  double compile_seconds = 0;
  std::vector<SweepPoint> points;
  int best = -1;
};

// Normalized role and concept assertions of the train ABox plus the given lists.
std::set<Axiom> known_true_set(const KnowledgeBase& train, const std::vector<std::vector<Axiom>>& extra);

// Compiles once, then solves and ranks `valid` for every (l1, l2, l3) in the grid product.
// Best point: highest validation MRR, then H@10, then the lexicographically smallest triple.
SweepResult run_sweep(const KnowledgeBase& train, const std::vector<Axiom>& valid, const std::set<Axiom>& known_true,
                      const RunConfig& cfg);

std::string sweep_to_json(const SweepResult& r);

// seconds with two decimals
std::string format_seconds(double s);

}  // namespace boxlite
