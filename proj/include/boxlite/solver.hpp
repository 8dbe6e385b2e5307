#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boxlite/problem.hpp"

namespace boxlite {

struct SolveOptions {
  int max_iters = 10000;
  double tol_feas = 1e-6;
  double tol_obj = 1e-4;
  // step c/sqrt(k) along the normalized subgradient; <= 0 means s_world/10
  double step_c = 0.0;
  int projection_passes = 200;
  std::uint64_t seed = 0;
  // stop once the best feasible objective reaches this value
  std::optional<double> target_objective;
  // stop after this many iterations without improving by tol_obj; 0 disables
  int stall_patience = 0;
  // extra projection passes on the returned point, aiming at a residual of 1e-12
  bool polish = true;
  std::vector<double> warm_start;
};

struct SolveDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  double objective = 0.0;
  std::vector<double> trace;  // best feasible objective after each iteration
  bool iteration_limit = false;
  std::string stop_reason;
};

struct SolveResult {
  std::vector<double> z;
  SolveDiagnostics diag;
};

// Throws InfeasibleDetected when the start point cannot be projected onto the polyhedron.
SolveResult solve(const CompiledProblem& p, const SolveOptions& opts);

// Cyclic halfspace projections; stops early once the residual is <= tol. Returns passes made.
int project_polyhedron(std::vector<double>& z, const std::vector<LinearConstraint>& cons, int passes,
                       double tol = 0.0);

std::vector<double> subgradient(const CompiledProblem& p, const std::vector<double>& z);

// ---- second-order cone export ----

struct AffineRow {
  std::vector<std::pair<int, double>> coeffs;
  double c = 0.0;
};

struct ConeBlock {
  std::vector<AffineRow> rows;  // rows[0] is the scalar head
};

// One sdist(y) <= t encoding: t1 + t2 <= t, (t1, w) in the cone, y - w <= t2, y <= w.
struct SdistGroup {
  int epigraph = -1;
  int w = -1, t1 = -1, t2 = -1;
  std::vector<AffineRow> y;
};

struct NormGroup {
  int t = -1;
  std::vector<AffineRow> v;
};

struct SocpProgram {
  int num_vars = 0;
  int num_z = 0;
  std::vector<std::pair<int, double>> objective;
  std::vector<LinearConstraint> linear;
  std::vector<ConeBlock> cones;
  int t_assert = -1, t_neg = -1;
  std::vector<SdistGroup> sdist_groups;
  std::vector<NormGroup> norm_groups;
};

SocpProgram export_socp(const CompiledProblem& p);
std::string socp_to_text(const SocpProgram& s);

// Extends z with the smallest auxiliaries; throws InfeasiblePoint for z outside the polyhedron.
std::vector<double> complete_auxiliaries(const SocpProgram& s, const std::vector<double>& z, double tol = 1e-9);
double socp_objective(const SocpProgram& s, const std::vector<double>& x);
// max violation over linear rows and cones
double socp_violation(const SocpProgram& s, const std::vector<double>& x);
bool verify_socp_equivalence(const CompiledProblem& p, const SocpProgram& s, const std::vector<double>& z,
                             double tol = 1e-8);

}  // namespace boxlite
