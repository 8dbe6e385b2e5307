#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace boxlite {

// Names are kept sorted; ids are positions in the sorted vectors.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> concepts, std::vector<std::string> roles,
            std::vector<std::string> individuals);

  const std::vector<std::string>& concepts() const { return concepts_; }
  const std::vector<std::string>& roles() const { return roles_; }
  const std::vector<std::string>& individuals() const { return individuals_; }

  int num_concepts() const { return static_cast<int>(concepts_.size()); }
  int num_roles() const { return static_cast<int>(roles_.size()); }
  int num_individuals() const { return static_cast<int>(individuals_.size()); }
  // |N_C^∃| = |N_C| + 2|N_R|
  int num_basic() const { return num_concepts() + 2 * num_roles(); }

  // -1 when absent
  int concept_id(std::string_view name) const;
  int role_id(std::string_view name) const;
  int individual_id(std::string_view name) const;

  bool operator==(const Signature& o) const {
    return concepts_ == o.concepts_ && roles_ == o.roles_ && individuals_ == o.individuals_;
  }

 private:
  std::vector<std::string> concepts_, roles_, individuals_;
  std::unordered_map<std::string, int> cidx_, ridx_, iidx_;
};

struct Role {
  int name = 0;
  bool inv = false;

  Role inverse() const { return {name, !inv}; }
  // position in N_R^-: R -> 2r, R^- -> 2r+1
  int index() const { return 2 * name + (inv ? 1 : 0); }
  static Role from_index(int i) { return {i / 2, (i % 2) != 0}; }
  auto operator<=>(const Role&) const = default;
};

struct Basic {
  enum class Kind : std::uint8_t { Atomic, Exists };
  Kind kind = Kind::Atomic;
  int id = 0;  // concept id for Atomic, role name for Exists
  bool inv = false;

  static Basic atomic(int c) { return {Kind::Atomic, c, false}; }
  static Basic exists(Role r) { return {Kind::Exists, r.name, r.inv}; }
  bool is_atomic() const { return kind == Kind::Atomic; }
  Role role() const { return {id, inv}; }
  // position in the N_C^∃ enumeration: atomics, then ∃R, ∃R⁻ per role
  int index(int num_concepts) const { return is_atomic() ? id : num_concepts + 2 * id + (inv ? 1 : 0); }
  static Basic from_index(int num_concepts, int i) {
    if (i < num_concepts) return atomic(i);
    return exists(Role::from_index(i - num_concepts));
  }
  auto operator<=>(const Basic&) const = default;
};

// B or ¬B
struct Concept {
  Basic base;
  bool neg = false;
  auto operator<=>(const Concept&) const = default;
};

struct Axiom {
  enum class Kind : std::uint8_t { CI, RI, ConceptAssertion, RoleAssertion };
  Kind kind = Kind::CI;
  Basic lhs;      // CI
  Concept rhs;    // CI
  Role sub, sup;  // RI
  Basic cls;      // concept assertion
  Role role;      // role assertion; inv only before normalization
  int a = -1, b = -1;

  static Axiom ci(Basic l, Concept r);
  static Axiom ri(Role s, Role t);
  static Axiom ca(Basic d, int ind);
  static Axiom ra(Role r, int i1, int i2);

  bool is_tbox() const { return kind == Kind::CI || kind == Kind::RI; }
  auto operator<=>(const Axiom&) const = default;
};

struct KnowledgeBase {
  Signature sig;
  std::vector<Axiom> tbox;
  std::vector<Axiom> abox;
};

// Raw logical content; sorted and deduplicated by finalize.
KnowledgeBase parse_kb(std::string_view text);
std::string serialize_kb(const KnowledgeBase& kb);
// A single axiom line ("ci A B", "ra R a b", ...) against an existing signature.
Axiom parse_axiom(const Signature& sig, std::string_view line);

std::vector<Basic> enumerate_basic_concepts(const Signature& sig);
Axiom normalize_axiom(const Axiom& ax);

// Sorts and deduplicates tbox/abox, normalizes every axiom.
void finalize(KnowledgeBase& kb);
// Checks named form and symbol ranges; throws NamedFormViolation / UnknownSymbol.
void validate(const KnowledgeBase& kb);
// Re-expresses kb over a larger signature containing all of kb's symbols.
KnowledgeBase rebase(const KnowledgeBase& kb, const Signature& target);

std::string to_string(const Signature& sig, Role r);
std::string to_string(const Signature& sig, Basic b);
std::string to_string(const Signature& sig, Concept c);
std::string to_string(const Signature& sig, const Axiom& ax);

}  // namespace boxlite
