#pragma once

#include <cstdint>
#include <vector>

#include "boxlite/ontology.hpp"

namespace boxlite {

struct SampleConfig {
  int k = 300;
  double pf = 0.7;  // forward burning probability
  double bf = 0.0;  // backward burning probability
  std::uint64_t seed = 0;
};

// Nodes are individuals, edges are the role assertions in `edges` (as given, not normalized).
// Returns the assertions induced by the burned nodes, in input order.
std::vector<Axiom> forest_fire_sample(const std::vector<Axiom>& edges, int num_individuals, const SampleConfig& cfg);

struct DatasetBundle {
  KnowledgeBase train_kb;
  std::vector<Axiom> valid, test;
  int attempts = 1;
};

// full.abox is sampled, full.tbox is kept. The train signature keeps every concept and role
// but only the sampled individuals. Throws UnsatSample after max_attempts unsatisfiable samples.
DatasetBundle make_bundle(const KnowledgeBase& full, const SampleConfig& cfg, std::uint64_t split_seed,
                          int max_attempts = 10);

// The 10 axioms over the seven family roles.
KnowledgeBase family_tbox();

// Deterministic synthetic family ABox over the family_tbox() signature: couples, children
// and siblings across `generations`, each fact kept with probability keep.
KnowledgeBase synthetic_family(int founder_couples, int generations, std::uint64_t seed, double keep = 0.6);

// Union of the two signatures; both KBs are rebased onto it.
KnowledgeBase merge(const KnowledgeBase& a, const KnowledgeBase& b);

}  // namespace boxlite
