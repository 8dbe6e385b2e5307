#pragma once

#include <string>
#include <utility>
#include <vector>

#include "boxlite/geometry.hpp"
#include "boxlite/problem.hpp"
#include "boxlite/reasoner.hpp"

namespace boxlite {

// Intervals used on every dimension of an analytic embedding, s_world = 4.
// All values are dyadic so box arithmetic on them is exact.
struct ConstantBank {
  static constexpr double s_world = 4.0;
  static constexpr double eps_max = 0.25;

  // concept dimensions, selected by the relation between D and C
  static constexpr std::pair<double, double> seq{-4.0, -0.5};
  static constexpr std::pair<double, double> isub{-2.0, -0.5};
  static constexpr std::pair<double, double> isup{-4.0, 2.0};
  static constexpr std::pair<double, double> inotsup{0.0, 2.0};
  static constexpr std::pair<double, double> icap{-2.0, 2.0};
  static constexpr std::pair<double, double> sempty{0.0, 0.0};
  static constexpr double p_in = -1.0, p_out = 1.0, b_concept = 0.0;
  // heads and tails are the case box shrunk by this margin, bumps are (-margin, margin)
  static constexpr double head_margin = 0.25;

  // role dimensions (Q, c)
  static constexpr double p_self = -0.5, p_other = 0.5;
  static constexpr double b_in = 0.0, b_out = -0.5;
  static constexpr std::pair<double, double> head_small{-1.0, 1.0};
  static constexpr std::pair<double, double> head_large{-1.5, 1.0};
  static constexpr std::pair<double, double> role_bump{-1.0, 0.5};
  // head minus bump
  static constexpr std::pair<double, double> exists_small{-1.5, 2.0};
  static constexpr std::pair<double, double> exists_large{-2.0, 2.0};
};

struct DimensionPlan {
  int num_basic = 0, num_roles = 0, num_elements = 0;

  int concept_dim(int basic_index) const { return basic_index; }
  int role_dim(int role, int element) const { return num_basic + role * num_elements + element; }
  int total() const { return num_basic + num_roles * num_elements; }
};

struct EmbedDiagnostics {
  DimensionPlan plan;
  // role dimensions (role, element) where heads and tails were all widened
  std::vector<std::pair<int, int>> collapsed;
};

// eps must lie in (0, 0.25].
BoxInterpretation embed_interpretation(const Interpretation& interp, double eps, EmbedDiagnostics* diag = nullptr);

// Throws UnsatKB for unsatisfiable KBs.
BoxInterpretation faithful_embedding(const KnowledgeBase& kb, Witness witness, double eps,
                                     EmbedDiagnostics* diag = nullptr);

enum class DminMode { TBox, KB };
int d_min(const Signature& sig, DminMode mode);

// Duplicates the last dimension; throws InvalidTarget when target_d < d.
BoxInterpretation pad_dimensions(const BoxInterpretation& eta, int target_d);

// Reduced-witness embedding scaled to the layout's world and padded to its d, packed as a
// starting vector. Throws InvalidTarget when the layout is too small.
std::vector<double> analytic_start(const KnowledgeBase& kb, const VariableLayout& lay);

struct AuditReport {
  bool kb_model = true;
  bool box_consistent = true;
  bool kb_entailed = true;
  bool weakly_faithful = true;
  std::vector<std::string> violations;

  bool all() const { return kb_model && box_consistent && kb_entailed && weakly_faithful; }
};

// Walks the whole axiom space of kb's signature.
AuditReport audit_faithfulness(const BoxInterpretation& eta, const KnowledgeBase& kb, double tol = 0.0);

}  // namespace boxlite
