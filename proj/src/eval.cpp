#include "boxlite/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "boxlite/errors.hpp"

namespace boxlite {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Head: return "head";
    case Direction::Tail: return "tail";
    case Direction::Individual: return "individual";
  }
  return "?";
}

namespace {

void check_individual(const BoxInterpretation& eta, int a) {
  if (a < 0 || a >= eta.sig.num_individuals()) throw UnknownSymbol("individual index " + std::to_string(a));
}

}  // namespace

double score_concept(const BoxInterpretation& eta, Concept d, int a) {
  check_individual(eta, a);
  return -dist_box(concept_box(eta, d), eta.pos[a], eta.config.eps);
}

double score_role(const BoxInterpretation& eta, Role s, int a, int b) {
  check_individual(eta, a);
  check_individual(eta, b);
  if (s.name < 0 || s.name >= eta.sig.num_roles()) throw UnknownSymbol("role index " + std::to_string(s.name));
  if (s.inv) return score_role(eta, s.inverse(), b, a);
  const RoleBoxes& rb = eta.role_boxes[s.name];
  const int d = eta.config.d;
  const double eps = eta.config.eps;
  std::vector<double> ab(d), ba(d);
  for (int i = 0; i < d; ++i) {
    ab[i] = eta.pos[a][i] + eta.bump[b][i];
    ba[i] = eta.pos[b][i] + eta.bump[a][i];
  }
  double loss = dist_box(rb.head, ab, eps);
  loss = std::max(loss, dist_box(rb.tail, ba, eps));
  loss = std::max(loss, dist_box(rb.bump, eta.bump[a], eps));
  loss = std::max(loss, dist_box(rb.bump, eta.bump[b], eps));
  return -loss;
}

double score(const BoxInterpretation& eta, const Axiom& ax) {
  if (ax.kind == Axiom::Kind::ConceptAssertion) return score_concept(eta, Concept{ax.cls, false}, ax.a);
  if (ax.kind == Axiom::Kind::RoleAssertion) return score_role(eta, ax.role, ax.a, ax.b);
  throw Error("only assertions have scores");
}

std::vector<RankRecord> rank_filtered(const BoxInterpretation& eta, const std::vector<Axiom>& test,
                                      const std::set<Axiom>& known_true, TiePolicy ties) {
  const int ni = eta.sig.num_individuals();
  if (ni == 0) throw EmptyCandidateSet("no individuals to rank against");
  std::vector<RankRecord> out;
  auto rank = [&](const Axiom& target, Direction dir, auto make) {
    const double ts = score(eta, target);
    int better = 0;
    for (int x = 0; x < ni; ++x) {
      Axiom cand = make(x);
      if (cand == target || known_true.count(cand)) continue;
      double cs = score(eta, cand);
      if (cs > ts || (ties == TiePolicy::Pessimistic && cs == ts)) ++better;
    }
    out.push_back({target, dir, 1 + better, ts});
  };
  for (const auto& raw : test) {
    Axiom t = normalize_axiom(raw);
    if (t.kind == Axiom::Kind::RoleAssertion) {
      rank(t, Direction::Head, [&](int x) { return Axiom::ra(t.role, x, t.b); });
      rank(t, Direction::Tail, [&](int x) { return Axiom::ra(t.role, t.a, x); });
    } else if (t.kind == Axiom::Kind::ConceptAssertion) {
      rank(t, Direction::Individual, [&](int x) { return Axiom::ca(t.cls, x); });
    } else {
      throw Error("test set contains a TBox axiom");
    }
  }
  return out;
}

EvalReport compute_metrics(std::vector<RankRecord> records, const std::vector<int>& ks) {
  if (records.empty()) throw EmptyRecords("no rank records");
  EvalReport r;
  double inv = 0;
  for (const auto& rec : records) inv += 1.0 / rec.filtered_rank;
  r.mrr = inv / records.size();
  for (int k : ks) {
    int hit = 0;
    for (const auto& rec : records) hit += rec.filtered_rank <= k;
    r.hits[k] = static_cast<double>(hit) / records.size();
  }
  r.records = std::move(records);
  return r;
}

std::string report_to_json(const Signature& sig, const EvalReport& r) {
  nlohmann::json j;
  j["mrr"] = r.mrr;
  nlohmann::json hits = nlohmann::json::object();
  for (auto [k, v] : r.hits) hits[std::to_string(k)] = v;
  j["hits"] = hits;
  j["num_records"] = r.records.size();
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& rec : r.records)
    recs.push_back({{"assertion", to_string(sig, rec.assertion)},
                    {"direction", to_string(rec.direction)},
                    {"rank", rec.filtered_rank},
                    {"score", rec.score}});
  j["records"] = recs;
  return j.dump(2);
}

std::string report_to_csv(const Signature& sig, const EvalReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "assertion,direction,rank,score\n";
  for (const auto& rec : r.records)
    out << '"' << to_string(sig, rec.assertion) << "\"," << to_string(rec.direction) << ',' << rec.filtered_rank
        << ',' << rec.score << "\n";
  return out.str();
}

}  // namespace boxlite
