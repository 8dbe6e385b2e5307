#pragma once

#include <string>
#include <utility>
#include <vector>

#include "boxlite/geometry.hpp"
#include "boxlite/ontology.hpp"

namespace boxlite {

struct VariableLayout {
  WorldConfig cfg;
  int ni = 0, nc = 0, nr = 0;
  int n = 0;

  int pos(int a) const { return a * cfg.d; }
  int bump(int a) const { return (ni + a) * cfg.d; }
  int concept_lower(int c) const { return (2 * ni + 2 * c) * cfg.d; }
  int concept_upper(int c) const { return (2 * ni + 2 * c + 1) * cfg.d; }
  // part: 0 head, 1 tail, 2 bump
  int role_lower(int r, int part) const { return (2 * ni + 2 * nc + 6 * r + 2 * part) * cfg.d; }
  int role_upper(int r, int part) const { return role_lower(r, part) + cfg.d; }
};

VariableLayout build_layout(const Signature& sig, const WorldConfig& cfg);

// v[i] = c + sum_k coef_k * z[base_k + i], one value per dimension i
struct DimAffine {
  std::vector<std::pair<int, double>> terms;
  double c = 0.0;

  double at(const std::vector<double>& z, int i) const {
    double v = c;
    for (auto [base, coef] : terms) v += coef * z[base + i];
    return v;
  }
};

struct BoxExpr {
  DimAffine lower, upper;
};

// dist(box, point) = sdist((L + eps - x) ⊕ (x - U + eps))
struct DistTerm {
  BoxExpr box;
  DimAffine point;
};

struct LossTerm {
  Axiom axiom;  // the assertion scored, or D(a) for a negative term
  std::vector<DistTerm> parts;
};

// ||U - L||_2
struct NormTerm {
  std::string label;
  BoxExpr box;
};

struct ObjectiveSpec {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::vector<LossTerm> assertion_terms;
  std::vector<LossTerm> negative_terms;
  std::vector<NormTerm> width_terms_cr;
  std::vector<NormTerm> width_terms_bump;
};

struct LinearConstraint {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

struct ConstraintTally {
  int consistency = 0, width = 0, universe = 0, ci = 0, ri = 0;
  int total() const { return consistency + width + universe + ci + ri; }
};

struct CompileOptions {
  WorldConfig cfg;
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  // drop D(a) from the negatives when the KB entails it
  bool exclude_entailed_negatives = false;
};

struct CompiledProblem {
  Signature sig;
  VariableLayout layout;
  std::vector<LinearConstraint> constraints;
  ConstraintTally tally;
  ObjectiveSpec objective;
  std::vector<int> concept_dim;  // N_C^∃ index -> reserved dimension
};

// Affine boundary patterns for the box of a concept (¬ and ∃ expanded).
BoxExpr box_expr(const VariableLayout& lay, Concept c);
BoxExpr box_expr(const VariableLayout& lay, Role r, int part);

std::pair<std::vector<LinearConstraint>, ConstraintTally> compile_constraints(const KnowledgeBase& kb,
                                                                              const WorldConfig& cfg);
ObjectiveSpec compile_objective(const KnowledgeBase& kb, const WorldConfig& cfg, double l1, double l2, double l3,
                                bool exclude_entailed_negatives = false);
CompiledProblem compile_problem(const KnowledgeBase& kb, const CompileOptions& opts);

double evaluate_dist(const DistTerm& t, const std::vector<double>& z, int d, double eps);
double evaluate_loss(const LossTerm& t, const std::vector<double>& z, int d, double eps);
double evaluate_norm(const NormTerm& t, const std::vector<double>& z, int d);
double evaluate_objective(const CompiledProblem& p, const std::vector<double>& z);
double feasibility_residual(const CompiledProblem& p, const std::vector<double>& z);
double feasibility_residual(const std::vector<LinearConstraint>& cons, const std::vector<double>& z);

// Throws InfeasiblePoint when the residual exceeds tol.
BoxInterpretation extract_interpretation(const CompiledProblem& p, const std::vector<double>& z, double tol = 1e-6);
std::vector<double> pack(const VariableLayout& lay, const BoxInterpretation& eta);

std::string problem_to_json(const CompiledProblem& p);
CompiledProblem problem_from_json(const std::string& text);

}  // namespace boxlite
