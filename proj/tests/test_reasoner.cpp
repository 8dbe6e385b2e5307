#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "boxlite/data.hpp"
#include "boxlite/errors.hpp"
#include "boxlite/reasoner.hpp"
#include "oracles.hpp"

using namespace boxlite;

namespace {

Axiom q(const KnowledgeBase& kb, const char* line) { return parse_axiom(kb.sig, line); }

KnowledgeBase family_with(const std::string& abox) { return merge(family_tbox(), parse_kb(abox)); }

}  // namespace

TEST_CASE("family role closure") {
  KnowledgeBase kb = family_tbox();
  CHECK(entails(kb, q(kb, "ri hasFather relative")));
  CHECK(entails(kb, q(kb, "ri inv(hasFather) inv(relative)")));
  CHECK(entails(kb, q(kb, "ri inv(hasFather) relative")));
  CHECK_FALSE(entails(kb, q(kb, "ri spouse hasParent")));
  CHECK_FALSE(entails(kb, q(kb, "ri hasParent hasFather")));
}

TEST_CASE("inverse image of a role inclusion") {
  KnowledgeBase kb = parse_kb("ri R S");
  CHECK(entails(kb, q(kb, "ri inv(R) inv(S)")));
  CHECK_FALSE(entails(kb, q(kb, "ri inv(R) S")));
  KnowledgeBase empty = parse_kb("role R\nrole S");
  CHECK(entails(empty, q(empty, "ri R R")));
  CHECK_FALSE(entails(empty, q(empty, "ri R S")));
}

TEST_CASE("disjointness is symmetric and closed downward") {
  KnowledgeBase kb = family_tbox();
  CHECK(entails(kb, q(kb, "ci exists(inv(hasMother)) not(exists(inv(hasFather)))")));
  Closure cl = compute_closure(kb);
  CHECK_FALSE(concept_satisfiable(cl, Basic::exists({kb.sig.role_id("hasFather"), true}),
                                  Basic::exists({kb.sig.role_id("hasMother"), true})));
  CHECK(concept_satisfiable(cl, Basic::exists({kb.sig.role_id("hasFather"), false}),
                            Basic::exists({kb.sig.role_id("hasMother"), false})));
}

TEST_CASE("unsatisfiable concepts") {
  KnowledgeBase kb = parse_kb("ci A B\nci B not(A)");
  Closure cl = compute_closure(kb);
  CHECK(cl.is_unsat(Basic::atomic(kb.sig.concept_id("A"))));
  CHECK_FALSE(cl.is_unsat(Basic::atomic(kb.sig.concept_id("B"))));
  CHECK(entails(kb, q(kb, "ci A not(B)")));
  CHECK(entails(kb, q(kb, "ci A not(A)")));
  // an unsat ∃R makes R empty, so R is below every role
  KnowledgeBase r = parse_kb("ci exists(R) not(exists(R))\nrole S");
  CHECK(entails(r, q(r, "ri R S")));
  CHECK(compute_closure(r).is_unsat(Basic::exists({r.sig.role_id("R"), true})));
}

TEST_CASE("empty TBox closures are reflexive only") {
  KnowledgeBase kb = parse_kb("concept A\nconcept B\nrole R");
  Closure cl = compute_closure(kb);
  for (int i = 0; i < cl.nb(); ++i)
    for (int j = 0; j < cl.nb(); ++j) {
      CHECK(cl.sub(i, j) == (i == j));
      CHECK_FALSE(cl.disj(i, j));
    }
}

TEST_CASE("membership closure") {
  KnowledgeBase kb = family_with("ra hasFather a b");
  CHECK(entails(kb, q(kb, "ca exists(relative) a")));
  CHECK(entails(kb, q(kb, "ca exists(inv(hasFather)) b")));
  CHECK(entails(kb, q(kb, "ra relative b a")));
  CHECK_FALSE(entails(kb, q(kb, "ra hasMother a b")));
  KnowledgeBase rs = parse_kb("ri R S\nra R a b");
  CHECK(entails(rs, q(rs, "ra S a b")));
  CHECK(entails(rs, q(rs, "ra inv(S) b a")));
  CHECK_FALSE(entails(rs, q(rs, "ra S b a")));
}

TEST_CASE("satisfiability") {
  CHECK_FALSE(is_satisfiable(parse_kb("ci A not(B)\nca A a\nca B a")));
  CHECK(is_satisfiable(family_tbox()));
  CHECK_FALSE(is_satisfiable(family_with("ra hasFather c a\nra hasMother d a")));
  CHECK(is_satisfiable(family_with("ra hasFather c a\nra hasMother d b")));
  CHECK_THROWS_AS(entails(parse_kb("ci A not(A)\nca A a"), Axiom::ca(Basic::atomic(0), 0)), UnsatKB);
}

TEST_CASE("consistency of an axiom with a KB") {
  KnowledgeBase kb = family_with("ra hasFather c a\nindividual d");
  CHECK_FALSE(is_consistent_with(kb, q(kb, "ra hasMother d a")));
  CHECK(is_consistent_with(kb, q(kb, "ra hasMother d c")));
  CHECK(is_consistent_with(kb, kb.abox[0]));
  KnowledgeBase t = family_tbox();
  std::mt19937_64 rng(1);
  for (const auto& ax : axiom_space(t.sig))
    if (ax.kind == Axiom::Kind::CI || ax.kind == Axiom::Kind::RI) CHECK(is_consistent_with(t, ax));
  // the fast path for assertions agrees with the general definition
  Closure cl = compute_closure(kb);
  for (const auto& ax : axiom_space(kb.sig)) {
    KnowledgeBase ext = kb;
    (ax.is_tbox() ? ext.tbox : ext.abox).push_back(ax);
    finalize(ext);
    CHECK(is_consistent_with(kb, cl, ax) == is_satisfiable(ext));
  }
}

TEST_CASE("canonical model of a single role assertion") {
  KnowledgeBase kb = parse_kb("ra R a b");
  Interpretation I = canonical_model(kb, Witness::Full);
  int w = -1;
  for (int e = 0; e < I.size(); ++e)
    if (I.element_names[e] == "c_exists(inv(R))") w = e;
  REQUIRE(w >= 0);
  CHECK(I.in_role({0, false}, I.individual_map[0], w));
  CHECK(model_check(I, Axiom::ca(Basic::exists({0, false}), 0)));
  CHECK(model_check(I, kb));
}

TEST_CASE("full witness domain with an empty TBox") {
  KnowledgeBase kb = parse_kb("concept A\nrole R");
  Interpretation I = canonical_model(kb, Witness::Full);
  // c_A, c_∃R, c_∃R⁻ plus the three pairs
  CHECK(I.size() == 6);
  auto has = [&](const std::string& n) {
    return std::find(I.element_names.begin(), I.element_names.end(), n) != I.element_names.end();
  };
  CHECK(has("c_A"));
  CHECK(has("c_exists(R)"));
  CHECK(has("c_exists(inv(R))"));
}

TEST_CASE("reduced witness domain of the family TBox") {
  Interpretation I = canonical_model(family_tbox(), Witness::Reduced);
  CHECK(I.size() == 14);
  CHECK(model_check(I, family_tbox()));
}

TEST_CASE("model checking basics") {
  KnowledgeBase kb = parse_kb("ci A exists(R)\nri R S\nca A a");
  Interpretation I;
  I.sig = kb.sig;
  I.elements = {{Element::Kind::Individual, 0, {}, {}}};
  I.element_names = {"a"};
  I.concept_ext = {std::vector<bool>{false}};
  I.role_ext = {BitMatrix(1, 1), BitMatrix(1, 1)};
  I.individual_map = {0};
  for (const auto& ax : kb.tbox) CHECK(model_check(I, ax));
  CHECK_FALSE(model_check(I, kb.abox[0]));
  I.concept_ext[0][0] = true;
  CHECK(model_check(I, kb.abox[0]));
  CHECK_FALSE(model_check(I, kb.tbox[0]));
}

TEST_CASE("inferred test assertions") {
  KnowledgeBase kb = family_with("ra hasFather a b");
  auto inf = infer_test_assertions(kb);
  auto has = [&](const char* line) { return std::find(inf.begin(), inf.end(), q(kb, line)) != inf.end(); };
  CHECK(has("ra hasParent a b"));
  CHECK(has("ra relative a b"));
  CHECK(has("ra relative b a"));
  CHECK_FALSE(has("ra hasFather a b"));
  CHECK(infer_test_assertions(family_tbox()).empty());
  KnowledgeBase sp = family_with("ra spouse a b");
  auto s = infer_test_assertions(sp);
  CHECK(std::find(s.begin(), s.end(), q(sp, "ra spouse b a")) != s.end());
}

TEST_CASE("entailment is monotone in the TBox for positive inclusions") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 40; ++k) {
    KnowledgeBase small = oracle::random_sat_kb(rng, 2, 1, 0, 3, 0);
    KnowledgeBase big = small;
    KnowledgeBase extra = oracle::random_kb(rng, 2, 1, 0, 2, 0);
    big.tbox.insert(big.tbox.end(), extra.tbox.begin(), extra.tbox.end());
    finalize(big);
    for (const auto& ax : axiom_space(small.sig))
      if (ax.kind == Axiom::Kind::CI && !ax.rhs.neg && entails(small, ax)) CHECK(entails(big, ax));
  }
}

TEST_CASE("mini oracle sweep over one-concept one-role KBs") {
  std::mt19937_64 rng(3);
  int mismatches = 0, refuted = 0;
  for (int k = 0; k < 30; ++k) {
    KnowledgeBase kb = oracle::random_kb(rng, 1, 1, 1, 3, 2);
    auto space = axiom_space(kb.sig);
    auto bf = oracle::enumerate_models(kb, space, 3);
    if (bf.found_model) CHECK(is_satisfiable(kb));
    if (!is_satisfiable(kb)) continue;
    for (size_t i = 0; i < space.size(); ++i) {
      if (bf.refuted[i]) {
        ++refuted;
        if (entails(kb, space[i])) ++mismatches;
      }
    }
  }
  CHECK(mismatches == 0);
  CHECK(refuted > 0);
}
