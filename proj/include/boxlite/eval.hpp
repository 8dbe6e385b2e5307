#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "boxlite/geometry.hpp"
#include "boxlite/ontology.hpp"

namespace boxlite {

enum class Direction { Head, Tail, Individual };
const char* to_string(Direction d);

struct RankRecord {
  Axiom assertion;
  Direction direction = Direction::Tail;
  int filtered_rank = 1;
  double score = 0.0;
};

struct EvalReport {
  double mrr = 0.0;
  std::map<int, double> hits;
  std::vector<RankRecord> records;
};

// Optimistic: rank = 1 + #{score > target}. Pessimistic also counts ties.
enum class TiePolicy { Optimistic, Pessimistic };

double score_concept(const BoxInterpretation& eta, Concept d, int a);
double score_role(const BoxInterpretation& eta, Role s, int a, int b);
double score(const BoxInterpretation& eta, const Axiom& assertion);

// Role assertions are corrupted at both ends, concept assertions at the individual.
std::vector<RankRecord> rank_filtered(const BoxInterpretation& eta, const std::vector<Axiom>& test,
                                      const std::set<Axiom>& known_true, TiePolicy ties = TiePolicy::Optimistic);

EvalReport compute_metrics(std::vector<RankRecord> records, const std::vector<int>& ks);

std::string report_to_json(const Signature& sig, const EvalReport& r);
std::string report_to_csv(const Signature& sig, const EvalReport& r);

}  // namespace boxlite
