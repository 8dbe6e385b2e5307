#include "boxlite/data.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <set>

#include "boxlite/errors.hpp"
#include "boxlite/reasoner.hpp"

namespace boxlite {

std::vector<Axiom> forest_fire_sample(const std::vector<Axiom>& edges, int num_individuals, const SampleConfig& cfg) {
  if (edges.empty()) throw EmptyGraph("forest fire sampling on a graph without edges");
  if (cfg.pf < 0 || cfg.pf > 1 || cfg.bf < 0 || cfg.bf > 1) throw Error("burning probabilities must lie in [0, 1]");
  const int n = num_individuals;
  std::vector<std::vector<int>> out_edges(n), in_edges(n);
  std::vector<bool> is_node(n, false);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const Axiom& ax = edges[e];
    if (ax.kind != Axiom::Kind::RoleAssertion) throw Error("forest fire sampling expects role assertions only");
    out_edges[ax.a].push_back(e);
    if (ax.b != ax.a) in_edges[ax.b].push_back(e);
    is_node[ax.a] = is_node[ax.b] = true;
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<bool> burned(n, false), covered(edges.size(), false);
  int num_covered = 0, num_burned = 0, num_nodes = 0;
  for (bool b : is_node) num_nodes += b;

  auto burn = [&](int v) {
    burned[v] = true;
    ++num_burned;
    for (const auto* list : {&out_edges[v], &in_edges[v]})
      for (int e : *list) {
        int other = edges[e].a == v ? edges[e].b : edges[e].a;
        if (!covered[e] && burned[other]) {
          covered[e] = true;
          ++num_covered;
        }
      }
  };
  auto fan_out = [&](double p) -> long {
    if (p <= 0) return 0;
    if (p >= 1) return std::numeric_limits<long>::max();
    std::geometric_distribution<long> g(1.0 - p);
    return g(rng);
  };
  // unburned neighbours of v through the given edge list, deduplicated, in edge order
  auto candidates = [&](int v, const std::vector<int>& list, bool forward) {
    std::vector<int> c;
    for (int e : list) {
      int other = forward ? edges[e].b : edges[e].a;
      if (other != v && !burned[other] && std::find(c.begin(), c.end(), other) == c.end()) c.push_back(other);
    }
    return c;
  };

  const int k = cfg.k;
  while (num_covered < k && num_burned < num_nodes) {
    std::vector<int> pool;
    for (int v = 0; v < n; ++v)
      if (is_node[v] && !burned[v]) pool.push_back(v);
    int seed = pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
    burn(seed);
    std::deque<int> queue{seed};
    while (!queue.empty() && num_covered < k) {
      int v = queue.front();
      queue.pop_front();
      std::vector<int> fresh;
      for (auto [list, forward, p] : {std::tuple{&out_edges[v], true, cfg.pf}, std::tuple{&in_edges[v], false, cfg.bf}}) {
        std::vector<int> c = candidates(v, *list, forward);
        long x = std::min<long>(fan_out(p), static_cast<long>(c.size()));
        std::shuffle(c.begin(), c.end(), rng);
        for (long i = 0; i < x; ++i)
          if (!burned[c[i]]) fresh.push_back(c[i]);
      }
      for (int u : fresh)
        if (!burned[u]) {
          burn(u);
          queue.push_back(u);
        }
    }
  }
  std::vector<Axiom> out;
  for (size_t e = 0; e < edges.size(); ++e)
    if (covered[e]) out.push_back(edges[e]);
  return out;
}

DatasetBundle make_bundle(const KnowledgeBase& full, const SampleConfig& cfg, std::uint64_t split_seed,
                          int max_attempts) {
  std::vector<Axiom> edges;
  for (const auto& ax : full.abox)
    if (ax.kind == Axiom::Kind::RoleAssertion) edges.push_back(ax);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    SampleConfig c = cfg;
    c.seed = cfg.seed + attempt;
    std::vector<Axiom> sample = forest_fire_sample(edges, full.sig.num_individuals(), c);
    std::set<int> used;
    for (const auto& ax : sample) {
      used.insert(ax.a);
      used.insert(ax.b);
    }
    std::vector<std::string> inds;
    for (int a : used) inds.push_back(full.sig.individuals()[a]);
    KnowledgeBase sampled;
    sampled.sig = full.sig;
    sampled.tbox = full.tbox;
    sampled.abox = sample;
    DatasetBundle b;
    b.train_kb = rebase(sampled, Signature(full.sig.concepts(), full.sig.roles(), inds));
    if (!is_satisfiable(b.train_kb)) continue;
    std::vector<Axiom> inferred = infer_test_assertions(b.train_kb);
    std::mt19937_64 rng(split_seed);
    std::shuffle(inferred.begin(), inferred.end(), rng);
    const size_t nv = static_cast<size_t>(std::llround(0.2 * inferred.size()));
    b.valid.assign(inferred.begin(), inferred.begin() + nv);
    b.test.assign(inferred.begin() + nv, inferred.end());
    b.attempts = attempt + 1;
    return b;
  }
  throw UnsatSample("no satisfiable sample after " + std::to_string(max_attempts) + " attempts");
}

KnowledgeBase family_tbox() {
  return parse_kb(
      "ri inv(relative) relative\n"
      "ri hasSibling relative\n"
      "ri hasChild relative\n"
      "ri hasParent relative\n"
      "ri hasFather hasParent\n"
      "ri hasMother hasParent\n"
      "ri inv(spouse) spouse\n"
      "ri inv(hasSibling) hasSibling\n"
      "ri spouse relative\n"
      "ci exists(inv(hasFather)) not(exists(inv(hasMother)))\n");
}

KnowledgeBase synthetic_family(int founder_couples, int generations, std::uint64_t seed, double keep) {
  struct Person {
    bool male;
    int father = -1, mother = -1;
  };
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5), kept(keep);
  std::uniform_int_distribution<int> kids(1, 4);
  std::vector<Person> people;
  std::vector<std::pair<int, int>> couples;
  for (int c = 0; c < founder_couples; ++c) {
    people.push_back({true});
    people.push_back({false});
    couples.push_back({2 * c, 2 * c + 1});
  }
  struct Fact {
    const char* role;
    int a, b;
  };
  std::vector<Fact> facts;
  for (int g = 0; g < generations; ++g) {
    std::vector<int> men, women;
    for (auto [f, m] : couples) {
      facts.push_back({"spouse", f, m});
      facts.push_back({"spouse", m, f});
      std::vector<int> children;
      for (int i = kids(rng); i > 0; --i) {
        people.push_back({coin(rng), f, m});
        children.push_back(static_cast<int>(people.size()) - 1);
      }
      for (int c : children) {
        facts.push_back({"hasFather", c, f});
        facts.push_back({"hasMother", c, m});
        facts.push_back({"hasParent", c, f});
        facts.push_back({"hasParent", c, m});
        facts.push_back({"hasChild", f, c});
        facts.push_back({"hasChild", m, c});
        for (int s : children)
          if (s != c) facts.push_back({"hasSibling", c, s});
        (people[c].male ? men : women).push_back(c);
      }
    }
    std::shuffle(men.begin(), men.end(), rng);
    std::shuffle(women.begin(), women.end(), rng);
    couples.clear();
    std::vector<bool> taken(women.size(), false);
    for (int m : men)
      for (size_t w = 0; w < women.size(); ++w)
        if (!taken[w] && people[women[w]].father != people[m].father) {
          taken[w] = true;
          couples.push_back({m, women[w]});
          break;
        }
  }
  std::string text;
  for (const auto& f : facts)
    if (kept(rng)) text += std::string("ra ") + f.role + " p" + std::to_string(f.a) + " p" + std::to_string(f.b) + "\n";
  KnowledgeBase abox = parse_kb(text);
  return merge(family_tbox(), abox);
}

KnowledgeBase merge(const KnowledgeBase& a, const KnowledgeBase& b) {
  auto uni = [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
    std::set<std::string> s(x.begin(), x.end());
    s.insert(y.begin(), y.end());
    return std::vector<std::string>(s.begin(), s.end());
  };
  Signature sig(uni(a.sig.concepts(), b.sig.concepts()), uni(a.sig.roles(), b.sig.roles()),
                uni(a.sig.individuals(), b.sig.individuals()));
  KnowledgeBase ra = rebase(a, sig), rb = rebase(b, sig);
  ra.tbox.insert(ra.tbox.end(), rb.tbox.begin(), rb.tbox.end());
  ra.abox.insert(ra.abox.end(), rb.abox.begin(), rb.abox.end());
  finalize(ra);
  return ra;
}

}  // namespace boxlite
