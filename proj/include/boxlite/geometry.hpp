#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boxlite/ontology.hpp"

namespace boxlite {

struct WorldConfig {
  int d = 1;
  double s_world = 1.0;
  double eps = 1e-2;

  // throws Error unless 0 < eps <= min(0.5, s_world/8) and d >= 1
  void validate() const;
};

struct Box {
  std::vector<double> lower, upper;

  Box() = default;
  Box(std::vector<double> l, std::vector<double> u) : lower(std::move(l)), upper(std::move(u)) {}
  static Box uniform(int d, double l, double u) { return {std::vector<double>(d, l), std::vector<double>(d, u)}; }
  static Box empty_box(int d) { return uniform(d, 0.0, 0.0); }
  int dim() const { return static_cast<int>(lower.size()); }
  bool operator==(const Box&) const = default;
};

struct RoleBoxes {
  Box head, tail, bump;
  bool operator==(const RoleBoxes&) const = default;
};

struct BoxInterpretation {
  WorldConfig config;
  Signature sig;
  std::vector<std::vector<double>> pos, bump;  // per individual
  std::vector<Box> concept_box;                // per concept name
  std::vector<RoleBoxes> role_boxes;           // per role name
};

// The tolerance arguments loosen every comparison by tol; semantics use tol = 0.
bool membership(const Box& box, std::span<const double> x, double eps, double tol = 0.0);
bool box_empty(const Box& box, double eps);
// empty a is contained in everything; otherwise the bound test
bool box_subseteq(const Box& a, const Box& b, double eps, double tol = 0.0);
Box complement(const Box& box, const WorldConfig& cfg);
Box exists_box(const RoleBoxes& rb, bool inverse);
bool width_bounded(const Box& box, const WorldConfig& cfg, double tol = 0.0);

// Head/Tail/Bump of S ∈ N_R^-; the inverse swaps head and tail.
RoleBoxes role_boxes(const BoxInterpretation& eta, Role r);
Box concept_box(const BoxInterpretation& eta, Basic b);
Box concept_box(const BoxInterpretation& eta, Concept c);

enum class Status { Satisfied, Falsified, Unknown };
const char* to_string(Status s);

Status assertion_status(const BoxInterpretation& eta, Basic d, int a, double tol = 0.0);
// concept assertions count as satisfied only in the Satisfied state
bool satisfies(const BoxInterpretation& eta, const Axiom& ax, double tol = 0.0);
bool is_box_consistent(const BoxInterpretation& eta);
bool is_box_consistent(const Box& box, const WorldConfig& cfg);

double sdist_neg_orthant(std::span<const double> y);
double dist_box(const Box& box, std::span<const double> x, double eps);

// pos/bump inside Ω shrunk by eps and all stored widths within [0, 2 s_world]
bool well_formed(const BoxInterpretation& eta, double tol = 0.0);

std::string dump_embedding(const BoxInterpretation& eta);
BoxInterpretation parse_embedding(std::string_view text);
// Checks that eta is over exactly the symbols of sig.
BoxInterpretation align(const BoxInterpretation& eta, const Signature& sig);

}  // namespace boxlite
