#include "boxlite/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "boxlite/errors.hpp"

namespace boxlite {

void WorldConfig::validate() const {
  if (d < 1) throw Error("dimension d must be positive");
  if (!(s_world > 0)) throw Error("s_world must be positive");
  if (!(eps > 0) || eps > 0.5 || eps > s_world / 8)
    throw Error("eps must satisfy 0 < eps <= min(0.5, s_world/8)");
}

namespace {

void check_dim(int a, int b) {
  if (a != b) throw DimensionMismatch("expected dimension " + std::to_string(a) + ", got " + std::to_string(b));
}

}  // namespace

bool membership(const Box& box, std::span<const double> x, double eps, double tol) {
  check_dim(box.dim(), static_cast<int>(x.size()));
  for (int i = 0; i < box.dim(); ++i)
    if (x[i] < box.lower[i] + eps - tol || x[i] > box.upper[i] - eps + tol) return false;
  return true;
}

bool box_empty(const Box& box, double eps) {
  for (int i = 0; i < box.dim(); ++i)
    if (box.upper[i] - box.lower[i] < 2 * eps) return true;
  return false;
}

bool box_subseteq(const Box& a, const Box& b, double eps, double tol) {
  check_dim(a.dim(), b.dim());
  if (box_empty(a, eps)) return true;
  for (int i = 0; i < a.dim(); ++i)
    if (b.lower[i] > a.lower[i] + tol || a.upper[i] > b.upper[i] + tol) return false;
  return true;
}

Box complement(const Box& box, const WorldConfig& cfg) {
  Box out = box;
  for (int i = 0; i < box.dim(); ++i) {
    out.lower[i] = -cfg.s_world - box.lower[i];
    out.upper[i] = cfg.s_world - box.upper[i];
  }
  return out;
}

Box exists_box(const RoleBoxes& rb, bool inverse) {
  const Box& h = inverse ? rb.tail : rb.head;
  check_dim(h.dim(), rb.bump.dim());
  Box out = h;
  for (int i = 0; i < h.dim(); ++i) {
    out.lower[i] = h.lower[i] - rb.bump.upper[i];
    out.upper[i] = h.upper[i] - rb.bump.lower[i];
  }
  return out;
}

bool width_bounded(const Box& box, const WorldConfig& cfg, double tol) {
  for (int i = 0; i < box.dim(); ++i) {
    double w = box.upper[i] - box.lower[i];
    if (w < -tol || w > 2 * cfg.s_world + tol) return false;
  }
  return true;
}

namespace {

void check_role(const BoxInterpretation& eta, int r) {
  if (r < 0 || r >= static_cast<int>(eta.role_boxes.size())) throw UnknownSymbol("role outside the embedding");
}
void check_ind(const BoxInterpretation& eta, int a) {
  if (a < 0 || a >= static_cast<int>(eta.pos.size())) throw UnknownSymbol("individual outside the embedding");
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

}  // namespace

RoleBoxes role_boxes(const BoxInterpretation& eta, Role r) {
  check_role(eta, r.name);
  const RoleBoxes& rb = eta.role_boxes[r.name];
  if (!r.inv) return rb;
  return {rb.tail, rb.head, rb.bump};
}

Box concept_box(const BoxInterpretation& eta, Basic b) {
  if (b.is_atomic()) {
    if (b.id < 0 || b.id >= static_cast<int>(eta.concept_box.size())) throw UnknownSymbol("concept outside the embedding");
    return eta.concept_box[b.id];
  }
  check_role(eta, b.id);
  return exists_box(eta.role_boxes[b.id], b.inv);
}

Box concept_box(const BoxInterpretation& eta, Concept c) {
  Box b = concept_box(eta, c.base);
  return c.neg ? complement(b, eta.config) : b;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Satisfied: return "satisfied";
    case Status::Falsified: return "falsified";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

Status assertion_status(const BoxInterpretation& eta, Basic d, int a, double tol) {
  check_ind(eta, a);
  Box b = concept_box(eta, d);
  const double eps = eta.config.eps;
  if (membership(b, eta.pos[a], eps, tol)) return Status::Satisfied;
  if (membership(complement(b, eta.config), eta.pos[a], eps, tol)) return Status::Falsified;
  return Status::Unknown;
}

bool satisfies(const BoxInterpretation& eta, const Axiom& ax, double tol) {
  const double eps = eta.config.eps;
  switch (ax.kind) {
    case Axiom::Kind::CI:
      return box_subseteq(concept_box(eta, ax.lhs), concept_box(eta, ax.rhs), eps, tol);
    case Axiom::Kind::RI: {
      RoleBoxes s = role_boxes(eta, ax.sub), t = role_boxes(eta, ax.sup);
      return box_subseteq(s.head, t.head, eps, tol) && box_subseteq(s.tail, t.tail, eps, tol) &&
             box_subseteq(s.bump, t.bump, eps, tol);
    }
    case Axiom::Kind::ConceptAssertion:
      return assertion_status(eta, ax.cls, ax.a, tol) == Status::Satisfied;
    case Axiom::Kind::RoleAssertion: {
      Axiom n = normalize_axiom(ax);
      check_ind(eta, n.a);
      check_ind(eta, n.b);
      RoleBoxes rb = role_boxes(eta, n.role);
      return membership(rb.head, add(eta.pos[n.a], eta.bump[n.b]), eps, tol) &&
             membership(rb.tail, add(eta.pos[n.b], eta.bump[n.a]), eps, tol) &&
             membership(rb.bump, eta.bump[n.a], eps, tol) && membership(rb.bump, eta.bump[n.b], eps, tol);
    }
  }
  return false;
}

bool is_box_consistent(const Box& box, const WorldConfig& cfg) {
  if (box_empty(box, cfg.eps)) return true;
  Box c = complement(box, cfg);
  if (box_empty(c, cfg.eps)) return true;
  for (int i = 0; i < box.dim(); ++i) {
    double lo = std::max(box.lower[i], c.lower[i]) + cfg.eps;
    double hi = std::min(box.upper[i], c.upper[i]) - cfg.eps;
    if (lo > hi) return true;
  }
  return false;
}

bool is_box_consistent(const BoxInterpretation& eta) {
  for (Basic b : enumerate_basic_concepts(eta.sig))
    if (!is_box_consistent(concept_box(eta, b), eta.config)) return false;
  return true;
}

double sdist_neg_orthant(std::span<const double> y) {
  if (y.empty()) throw DimensionMismatch("signed distance of an empty vector");
  double sq = 0, mx = y[0];
  bool outside = false;
  for (double v : y) {
    if (v > 0) {
      outside = true;
      sq += v * v;
    }
    mx = std::max(mx, v);
  }
  return outside ? std::sqrt(sq) : mx;
}

double dist_box(const Box& box, std::span<const double> x, double eps) {
  check_dim(box.dim(), static_cast<int>(x.size()));
  const int d = box.dim();
  std::vector<double> y(2 * d);
  for (int i = 0; i < d; ++i) {
    y[i] = box.lower[i] + eps - x[i];
    y[d + i] = x[i] - box.upper[i] + eps;
  }
  return sdist_neg_orthant(y);
}

bool well_formed(const BoxInterpretation& eta, double tol) {
  const auto& cfg = eta.config;
  auto in_omega = [&](const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != cfg.d) return false;
    for (double x : v)
      if (x < -cfg.s_world + cfg.eps - tol || x > cfg.s_world - cfg.eps + tol) return false;
    return true;
  };
  for (const auto& v : eta.pos)
    if (!in_omega(v)) return false;
  for (const auto& v : eta.bump)
    if (!in_omega(v)) return false;
  for (const auto& b : eta.concept_box)
    if (b.dim() != cfg.d || !width_bounded(b, cfg, tol)) return false;
  for (const auto& rb : eta.role_boxes)
    for (const Box* b : {&rb.head, &rb.tail, &rb.bump})
      if (b->dim() != cfg.d || !width_bounded(*b, cfg, tol)) return false;
  return true;
}

// ---- dump format ----

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put(std::ostringstream& os, const std::vector<double>& v) {
  for (double x : v) os << ' ' << fmt(x);
}

}  // namespace

std::string dump_embedding(const BoxInterpretation& eta) {
  std::ostringstream os;
  os << "boxlite-embedding v1\n";
  os << "config " << eta.config.d << ' ' << fmt(eta.config.s_world) << ' ' << fmt(eta.config.eps) << "\n";
  const auto& sig = eta.sig;
  for (int a = 0; a < sig.num_individuals(); ++a) {
    os << "pos " << sig.individuals()[a];
    put(os, eta.pos[a]);
    os << "\nbump " << sig.individuals()[a];
    put(os, eta.bump[a]);
    os << "\n";
  }
  for (int c = 0; c < sig.num_concepts(); ++c) {
    os << "cbox " << sig.concepts()[c];
    put(os, eta.concept_box[c].lower);
    put(os, eta.concept_box[c].upper);
    os << "\n";
  }
  for (int r = 0; r < sig.num_roles(); ++r) {
    const RoleBoxes& rb = eta.role_boxes[r];
    const std::pair<const char*, const Box*> parts[] = {{"head", &rb.head}, {"tail", &rb.tail}, {"bump", &rb.bump}};
    for (auto [tag, b] : parts) {
      os << "rbox " << sig.roles()[r] << ' ' << tag;
      put(os, b->lower);
      put(os, b->upper);
      os << "\n";
    }
  }
  return os.str();
}

BoxInterpretation parse_embedding(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> FormatError {
    return FormatError("embedding line " + std::to_string(lineno) + ": " + msg);
  };
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next() || line != "boxlite-embedding v1") throw fail("missing header 'boxlite-embedding v1'");
  if (!next()) throw fail("missing config line");
  WorldConfig cfg;
  {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag >> cfg.d >> cfg.s_world >> cfg.eps) || tag != "config") throw fail("malformed config line");
  }
  const int d = cfg.d;
  auto read_vec = [&](std::istringstream& ls, int n) {
    std::vector<double> v(n);
    std::string tok;
    for (int i = 0; i < n; ++i) {
      if (!(ls >> tok)) throw fail("expected " + std::to_string(n) + " values");
      char* end = nullptr;
      v[i] = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') throw fail("bad number '" + tok + "'");
    }
    if (ls >> tok) throw fail("trailing values");
    return v;
  };
  std::map<std::string, std::vector<double>> pos, bump;
  std::map<std::string, Box> cbox;
  std::map<std::string, std::map<std::string, Box>> rbox;
  while (next()) {
    std::istringstream ls(line);
    std::string tag, name;
    ls >> tag >> name;
    if (tag == "pos" || tag == "bump") {
      (tag == "pos" ? pos : bump)[name] = read_vec(ls, d);
    } else if (tag == "cbox") {
      auto v = read_vec(ls, 2 * d);
      cbox[name] = Box({v.begin(), v.begin() + d}, {v.begin() + d, v.end()});
    } else if (tag == "rbox") {
      std::string part;
      ls >> part;
      if (part != "head" && part != "tail" && part != "bump") throw fail("unknown role box part '" + part + "'");
      auto v = read_vec(ls, 2 * d);
      rbox[name][part] = Box({v.begin(), v.begin() + d}, {v.begin() + d, v.end()});
    } else {
      throw fail("unknown record '" + tag + "'");
    }
  }
  std::vector<std::string> inds, concepts, roles;
  for (const auto& [n, v] : pos) {
    if (!bump.count(n)) throw FormatError("individual '" + n + "' has no bump vector");
    inds.push_back(n);
  }
  for (const auto& [n, v] : bump)
    if (!pos.count(n)) throw FormatError("individual '" + n + "' has no position vector");
  for (const auto& [n, b] : cbox) concepts.push_back(n);
  for (const auto& [n, parts] : rbox) {
    if (parts.size() != 3) throw FormatError("role '" + n + "' needs head, tail and bump boxes");
    roles.push_back(n);
  }
  BoxInterpretation eta;
  eta.config = cfg;
  eta.sig = Signature(concepts, roles, inds);
  for (const auto& n : eta.sig.individuals()) {
    eta.pos.push_back(pos[n]);
    eta.bump.push_back(bump[n]);
  }
  for (const auto& n : eta.sig.concepts()) eta.concept_box.push_back(cbox[n]);
  for (const auto& n : eta.sig.roles())
    eta.role_boxes.push_back({rbox[n]["head"], rbox[n]["tail"], rbox[n]["bump"]});
  return eta;
}

BoxInterpretation align(const BoxInterpretation& eta, const Signature& sig) {
  // names are sorted on both sides, so equal symbol sets give equal ids
  if (!(eta.sig == sig)) throw UnknownSymbol("embedding symbols do not match the knowledge base signature");
  return eta;
}

}  // namespace boxlite
