#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "boxlite/analytic.hpp"
#include "boxlite/data.hpp"
#include "boxlite/errors.hpp"
#include "boxlite/problem.hpp"
#include "oracles.hpp"

using namespace boxlite;

namespace {

// individuals take the first elements, so the map is injective; needs n >= ni
Interpretation random_interpretation(std::mt19937_64& rng, int nc, int nr, int ni, int n) {
  KnowledgeBase kb = oracle::random_kb(rng, nc, nr, ni, 0, 0);
  Interpretation I;
  I.sig = kb.sig;
  std::bernoulli_distribution coin(0.4);
  for (int e = 0; e < n; ++e) {
    I.elements.push_back({e < ni ? Element::Kind::Individual : Element::Kind::Witness, e < ni ? e : -1, {}, {}});
    I.element_names.push_back("e" + std::to_string(e));
  }
  for (int c = 0; c < nc; ++c) {
    I.concept_ext.emplace_back(n);
    for (int e = 0; e < n; ++e) I.concept_ext[c][e] = coin(rng);
  }
  for (int r = 0; r < nr; ++r) {
    BitMatrix m(n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) m.set(x, y, coin(rng));
    I.role_ext.push_back(m);
  }
  for (int a = 0; a < ni; ++a) I.individual_map.push_back(a);
  return I;
}

struct Agreement {
  int forward_fail = 0;   // I ⊨ α but η does not satisfy α
  int backward_fail = 0;  // η satisfies α but I does not, on non-collapsed embeddings
  int checked = 0;
};

void compare(const Interpretation& I, double eps, Agreement& acc) {
  EmbedDiagnostics diag;
  BoxInterpretation eta = embed_interpretation(I, eps, &diag);
  REQUIRE(well_formed(eta));
  CHECK(is_box_consistent(eta));
  for (const auto& ax : axiom_space(I.sig)) {
    bool m = model_check(I, ax), s = satisfies(eta, ax);
    ++acc.checked;
    if (m && !s) ++acc.forward_fail;
    bool exact = ax.kind == Axiom::Kind::CI || ax.kind == Axiom::Kind::ConceptAssertion || diag.collapsed.empty();
    if (exact && s && !m) ++acc.backward_fail;
  }
}

}  // namespace

TEST_CASE("family TBox analytic embedding") {
  KnowledgeBase kb = family_tbox();
  EmbedDiagnostics diag;
  BoxInterpretation eta = faithful_embedding(kb, Witness::Reduced, 0.1, &diag);
  CHECK(eta.config.d == 112);
  CHECK(eta.config.s_world == 4.0);
  CHECK(diag.collapsed.empty());
  AuditReport rep = audit_faithfulness(eta, kb);
  CHECK(rep.kb_model);
  CHECK(rep.box_consistent);
  CHECK(rep.kb_entailed);
  CHECK(rep.weakly_faithful);
  CHECK(rep.violations.empty());
  CompiledProblem p = compile_problem(kb, {{112, 4.0, 0.1}, 0, 0, 0, false});
  CHECK(feasibility_residual(p, pack(p.layout, eta)) <= 1e-12);
}

TEST_CASE("d_min") {
  CHECK(d_min(family_tbox().sig, DminMode::TBox) == 21);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    int nc = k % 3, nr = 1 + k % 2, ni = k % 4;
    // positive axioms only, so every basic concept is satisfiable and the reduced witness is complete
    KnowledgeBase kb;
    do {
      kb = oracle::random_kb(rng, nc, nr, ni, 3, 3);
      std::erase_if(kb.tbox, [](const Axiom& a) { return a.kind == Axiom::Kind::CI && a.rhs.neg; });
    } while (!is_satisfiable(kb));
    CHECK(d_min(kb.sig, DminMode::KB) == nc + nr * (2 + ni + 2 * nr));
    CHECK(d_min(kb.sig, DminMode::TBox) == nc + 3 * nr);
    BoxInterpretation eta = faithful_embedding(kb, Witness::Reduced, 0.25);
    CHECK(eta.config.d == d_min(kb.sig, DminMode::KB));
  }
}

TEST_CASE("eps range") {
  Interpretation I = canonical_model(family_tbox(), Witness::Reduced);
  CHECK_THROWS_AS(embed_interpretation(I, 0.3), Error);
  CHECK_THROWS_AS(embed_interpretation(I, 0.0), Error);
  CHECK_NOTHROW(embed_interpretation(I, 0.25));
  CHECK_THROWS_AS(faithful_embedding(parse_kb("ci A not(A)\nca A a"), Witness::Full, 0.1), UnsatKB);
}

TEST_CASE("embedding of canonical models agrees with model checking") {
  std::mt19937_64 rng(4);
  Agreement acc;
  for (int k = 0; k < 40; ++k) {
    KnowledgeBase kb = oracle::random_sat_kb(rng, 2, 2, 2, 4, 3);
    for (Witness w : {Witness::Full, Witness::Reduced}) compare(canonical_model(kb, w), 0.1, acc);
  }
  CHECK(acc.checked > 0);
  CHECK(acc.forward_fail == 0);
  CHECK(acc.backward_fail == 0);
}

TEST_CASE("embedding of random interpretations") {
  std::mt19937_64 rng(8);
  Agreement acc;
  int collapsed = 0;
  for (int k = 0; k < 200; ++k) {
    Interpretation I = random_interpretation(rng, 1 + k % 2, 1 + k % 2, k % 3, std::max(1 + k % 4, k % 3));
    EmbedDiagnostics diag;
    embed_interpretation(I, 0.2, &diag);
    collapsed += !diag.collapsed.empty();
    compare(I, 0.2, acc);
  }
  CHECK(acc.forward_fail == 0);
  CHECK(acc.backward_fail == 0);
  MESSAGE("interpretations with collapsed role dimensions: " << collapsed);
}

TEST_CASE("nonempty concept boxes sit below the anti-diagonal") {
  Interpretation I = canonical_model(family_tbox(), Witness::Reduced);
  BoxInterpretation eta = embed_interpretation(I, 0.1);
  const int nc = eta.sig.num_concepts();
  for (Basic b : enumerate_basic_concepts(eta.sig)) {
    Box box = concept_box(eta, b);
    int i = b.index(nc);
    CHECK(box.lower[i] + box.upper[i] <= -eta.config.s_world);
  }
}

TEST_CASE("padding keeps satisfaction") {
  KnowledgeBase kb = merge(family_tbox(), parse_kb("ra hasFather a b\nra spouse b c"));
  BoxInterpretation eta = faithful_embedding(kb, Witness::Reduced, 0.1);
  BoxInterpretation big = pad_dimensions(eta, eta.config.d + 5);
  CHECK(big.config.d == eta.config.d + 5);
  for (const auto& ax : axiom_space(kb.sig)) CHECK(satisfies(eta, ax) == satisfies(big, ax));
  CHECK_THROWS_AS(pad_dimensions(eta, eta.config.d - 1), InvalidTarget);
  AuditReport rep = audit_faithfulness(big, kb);
  CHECK(rep.all());
}

TEST_CASE("an embedding that misses an inclusion fails the audit") {
  KnowledgeBase kb = parse_kb("ci A B\nca A a");
  BoxInterpretation eta = faithful_embedding(kb, Witness::Full, 0.1);
  eta.concept_box[1] = Box::empty_box(eta.config.d);
  AuditReport rep = audit_faithfulness(eta, kb);
  CHECK_FALSE(rep.kb_model);
  CHECK_FALSE(rep.all());
}

TEST_CASE("analytic start scales to the learned world") {
  KnowledgeBase kb = family_tbox();
  CompiledProblem p = compile_problem(kb, {{112, 1.0, 0.01}, 0, 0, 0, false});
  auto z = analytic_start(kb, p.layout);
  CHECK(feasibility_residual(p, z) <= 1e-12);
  BoxInterpretation eta = extract_interpretation(p, z);
  CHECK(audit_faithfulness(eta, kb).all());
}
