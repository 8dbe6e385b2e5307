#pragma once

#include <string>
#include <vector>

#include "boxlite/ontology.hpp"

namespace boxlite {

// Dense boolean matrix, row-major.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool operator()(int i, int j) const { return v_[static_cast<size_t>(i) * cols_ + j] != 0; }
  void set(int i, int j, bool b = true) { v_[static_cast<size_t>(i) * cols_ + j] = b ? 1 : 0; }
  // Warshall; requires a square matrix
  void transitive_close();
  bool operator==(const BitMatrix&) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<unsigned char> v_;
};

struct Closure {
  int nc = 0, nr = 0, ni = 0;
  BitMatrix role_sub;  // over N_R^- (Role::index)
  BitMatrix sub;       // over N_C^∃ (Basic::index); unsat rows are all true
  BitMatrix disj;      // symmetric over N_C^∃
  std::vector<bool> unsat;
  BitMatrix member;                    // individual x N_C^∃
  std::vector<BitMatrix> role_member;  // per role name, individual x individual
  bool satisfiable = true;

  int nb() const { return nc + 2 * nr; }
  bool subsumes(Basic b, Basic c) const { return sub(b.index(nc), c.index(nc)); }
  bool disjoint(Basic b, Basic c) const { return disj(b.index(nc), c.index(nc)); }
  bool is_unsat(Basic b) const { return unsat[b.index(nc)]; }
  bool role_subsumes(Role s, Role t) const { return role_sub(s.index(), t.index()); }
  bool has(int a, Basic b) const { return member(a, b.index(nc)); }
  // K ⊨ R(a,b) for a role possibly inverted
  bool has_role(Role r, int a, int b) const {
    return r.inv ? role_member[r.name](b, a) : role_member[r.name](a, b);
  }
};

BitMatrix role_closure(const Signature& sig, const std::vector<Axiom>& tbox);

struct ConceptClosure {
  BitMatrix sub, disj;
  std::vector<bool> unsat;
};
ConceptClosure concept_closure(const Signature& sig, const std::vector<Axiom>& tbox, const BitMatrix& role_sub);

// Computes memberships and the satisfiability flag from the TBox closures.
void membership_closure(const KnowledgeBase& kb, Closure& cl);

Closure compute_closure(const KnowledgeBase& kb);

bool is_satisfiable(const KnowledgeBase& kb);
bool is_satisfiable(const Closure& cl);

// Throws UnsatKB when the KB is unsatisfiable.
bool entails(const KnowledgeBase& kb, const Axiom& ax);
bool entails(const Closure& cl, const Axiom& ax);

// d ⊓ e; pass e == d for a basic concept
bool concept_satisfiable(const Closure& cl, Basic d, Basic e);
bool concept_satisfiable(const KnowledgeBase& kb, Basic d, Basic e);

bool is_consistent_with(const KnowledgeBase& kb, const Axiom& ax);
// Same, with cl the closure of kb; assertions avoid recomputing the closure.
bool is_consistent_with(const KnowledgeBase& kb, const Closure& cl, const Axiom& ax);

enum class Witness { Full, Reduced };

// Domain element: a named individual or a witness c_D, c_{D⊓E}.
struct Element {
  enum class Kind { Individual, Witness };
  Kind kind = Kind::Individual;
  int individual = -1;
  Basic d, e;  // e == d for basic witnesses
};

struct Interpretation {
  Signature sig;
  std::vector<Element> elements;
  std::vector<std::string> element_names;
  std::vector<std::vector<bool>> concept_ext;  // per concept name, per element
  std::vector<BitMatrix> role_ext;             // per role name
  std::vector<int> individual_map;             // individual -> element

  int size() const { return static_cast<int>(elements.size()); }
  // extension of a basic concept, computed on the fly
  std::vector<bool> extension(Basic b) const;
  bool in_role(Role r, int x, int y) const { return r.inv ? role_ext[r.name](y, x) : role_ext[r.name](x, y); }
};

Interpretation canonical_model(const KnowledgeBase& kb, Witness witness);
Interpretation canonical_model(const KnowledgeBase& kb, const Closure& cl, Witness witness);

bool model_check(const Interpretation& interp, const Axiom& ax);
bool model_check(const Interpretation& interp, const KnowledgeBase& kb);

// Entailed role assertions over N_R x N_I^2 that are not in the ABox.
std::vector<Axiom> infer_test_assertions(const KnowledgeBase& kb);

// The finite axiom space over a signature: CIs over N_C^∃ x N^∃_{C¬}, RIs over
// (N_R^-)^2, concept assertions N_C^∃ x N_I, role assertions N_R x N_I^2.
std::vector<Axiom> axiom_space(const Signature& sig);

// Listing of the extensions, one line per symbol.
std::string dump_interpretation(const Interpretation& interp);

}  // namespace boxlite
