#include "boxlite/ontology.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "boxlite/errors.hpp"

namespace boxlite {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int lookup(const std::unordered_map<std::string, int>& m, std::string_view name) {
  auto it = m.find(std::string(name));
  return it == m.end() ? -1 : it->second;
}

}  // namespace

Signature::Signature(std::vector<std::string> concepts, std::vector<std::string> roles,
                     std::vector<std::string> individuals)
    : concepts_(sorted_unique(std::move(concepts))),
      roles_(sorted_unique(std::move(roles))),
      individuals_(sorted_unique(std::move(individuals))) {
  for (int i = 0; i < num_concepts(); ++i) cidx_[concepts_[i]] = i;
  for (int i = 0; i < num_roles(); ++i) ridx_[roles_[i]] = i;
  for (int i = 0; i < num_individuals(); ++i) iidx_[individuals_[i]] = i;
  for (const auto& r : roles_)
    if (cidx_.count(r)) throw DisjointnessViolation("symbol '" + r + "' is both a concept and a role");
  for (const auto& a : individuals_)
    if (cidx_.count(a) || ridx_.count(a))
      throw DisjointnessViolation("symbol '" + a + "' is used as an individual and as a concept or role");
}

int Signature::concept_id(std::string_view name) const { return lookup(cidx_, name); }
int Signature::role_id(std::string_view name) const { return lookup(ridx_, name); }
int Signature::individual_id(std::string_view name) const { return lookup(iidx_, name); }

Axiom Axiom::ci(Basic l, Concept r) {
  Axiom ax;
  ax.kind = Kind::CI;
  ax.lhs = l;
  ax.rhs = r;
  return ax;
}

Axiom Axiom::ri(Role s, Role t) {
  Axiom ax;
  ax.kind = Kind::RI;
  ax.sub = s;
  ax.sup = t;
  return ax;
}

Axiom Axiom::ca(Basic d, int ind) {
  Axiom ax;
  ax.kind = Kind::ConceptAssertion;
  ax.cls = d;
  ax.a = ind;
  return ax;
}

Axiom Axiom::ra(Role r, int i1, int i2) {
  Axiom ax;
  ax.kind = Kind::RoleAssertion;
  ax.role = r;
  ax.a = i1;
  ax.b = i2;
  return ax;
}

std::vector<Basic> enumerate_basic_concepts(const Signature& sig) {
  std::vector<Basic> out;
  out.reserve(sig.num_basic());
  for (int i = 0; i < sig.num_basic(); ++i) out.push_back(Basic::from_index(sig.num_concepts(), i));
  return out;
}

Axiom normalize_axiom(const Axiom& ax) {
  if (ax.kind == Axiom::Kind::RoleAssertion && ax.role.inv)
    return Axiom::ra(ax.role.inverse(), ax.b, ax.a);
  return ax;
}

void finalize(KnowledgeBase& kb) {
  for (auto& ax : kb.tbox) ax = normalize_axiom(ax);
  for (auto& ax : kb.abox) ax = normalize_axiom(ax);
  auto dedup = [](std::vector<Axiom>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(kb.tbox);
  dedup(kb.abox);
}

namespace {

void check_basic(const Signature& sig, Basic b) {
  if (b.is_atomic() ? (b.id < 0 || b.id >= sig.num_concepts()) : (b.id < 0 || b.id >= sig.num_roles()))
    throw UnknownSymbol("basic concept refers to a symbol outside the signature");
}
void check_role(const Signature& sig, Role r) {
  if (r.name < 0 || r.name >= sig.num_roles()) throw UnknownSymbol("role outside the signature");
}
void check_ind(const Signature& sig, int a) {
  if (a < 0 || a >= sig.num_individuals()) throw UnknownSymbol("individual outside the signature");
}

}  // namespace

void validate(const KnowledgeBase& kb) {
  for (const auto& ax : kb.tbox) {
    switch (ax.kind) {
      case Axiom::Kind::CI:
        check_basic(kb.sig, ax.lhs);
        check_basic(kb.sig, ax.rhs.base);
        // disjointness between arbitrary basics is accepted, positive CIs need a name
        if (!ax.rhs.neg && !ax.lhs.is_atomic() && !ax.rhs.base.is_atomic())
          throw NamedFormViolation("concept inclusion '" + to_string(kb.sig, ax) + "' has no concept name on either side");
        break;
      case Axiom::Kind::RI:
        check_role(kb.sig, ax.sub);
        check_role(kb.sig, ax.sup);
        break;
      default:
        throw Error("assertion found in the TBox");
    }
  }
  for (const auto& ax : kb.abox) {
    switch (ax.kind) {
      case Axiom::Kind::ConceptAssertion:
        check_basic(kb.sig, ax.cls);
        check_ind(kb.sig, ax.a);
        break;
      case Axiom::Kind::RoleAssertion:
        check_role(kb.sig, ax.role);
        check_ind(kb.sig, ax.a);
        check_ind(kb.sig, ax.b);
        break;
      default:
        throw Error("inclusion found in the ABox");
    }
  }
}

std::string to_string(const Signature& sig, Role r) {
  const std::string& n = sig.roles().at(r.name);
  return r.inv ? "inv(" + n + ")" : n;
}

std::string to_string(const Signature& sig, Basic b) {
  if (b.is_atomic()) return sig.concepts().at(b.id);
  return "exists(" + to_string(sig, b.role()) + ")";
}

std::string to_string(const Signature& sig, Concept c) {
  return c.neg ? "not(" + to_string(sig, c.base) + ")" : to_string(sig, c.base);
}

std::string to_string(const Signature& sig, const Axiom& ax) {
  switch (ax.kind) {
    case Axiom::Kind::CI:
      return "ci " + to_string(sig, ax.lhs) + " " + to_string(sig, ax.rhs);
    case Axiom::Kind::RI:
      return "ri " + to_string(sig, ax.sub) + " " + to_string(sig, ax.sup);
    case Axiom::Kind::ConceptAssertion:
      return "ca " + to_string(sig, ax.cls) + " " + sig.individuals().at(ax.a);
    case Axiom::Kind::RoleAssertion:
      return "ra " + to_string(sig, ax.role) + " " + sig.individuals().at(ax.a) + " " + sig.individuals().at(ax.b);
  }
  return {};
}

std::string serialize_kb(const KnowledgeBase& kb) {
  std::ostringstream os;
  for (const auto& c : kb.sig.concepts()) os << "concept " << c << "\n";
  for (const auto& r : kb.sig.roles()) os << "role " << r << "\n";
  for (const auto& a : kb.sig.individuals()) os << "individual " << a << "\n";
  for (const auto& ax : kb.tbox) os << to_string(kb.sig, ax) << "\n";
  for (const auto& ax : kb.abox) os << to_string(kb.sig, ax) << "\n";
  return os.str();
}

// ---- parsing ----

namespace {

enum class SymKind { Concept, Role, Individual };

const char* kind_name(SymKind k) {
  switch (k) {
    case SymKind::Concept: return "concept";
    case SymKind::Role: return "role";
    case SymKind::Individual: return "individual";
  }
  return "?";
}

struct RawRole {
  std::string name;
  bool inv = false;
};
struct RawBasic {
  bool exists = false;
  std::string name;  // concept name or role name
  bool inv = false;
};
struct RawConcept {
  RawBasic base;
  bool neg = false;
};
struct RawAxiom {
  Axiom::Kind kind;
  RawBasic lhs;
  RawConcept rhs;
  RawRole r1, r2;
  std::string a, b;
  int line = 0;
};

struct Token {
  std::string text;
  int col;
};

bool is_name_char(char c) {
  return !(c == '(' || c == ')' || c == '#' || c == ' ' || c == '\t' || c == '\r' || c == '\n');
}

// Recursive descent over one token; positions are reported relative to the line.
class TokenParser {
 public:
  TokenParser(const Token& tok, int line) : s_(tok.text), col0_(tok.col), line_(line) {}

  RawRole role() {
    RawRole r;
    if (try_keyword("inv")) {
      r = role();
      r.inv = !r.inv;
      expect(')');
      return r;
    }
    r.name = name();
    return r;
  }

  RawBasic basic() {
    RawBasic b;
    if (try_keyword("exists")) {
      RawRole r = role();
      expect(')');
      b.exists = true;
      b.name = r.name;
      b.inv = r.inv;
      return b;
    }
    if (peek_keyword("not")) fail("negation is only allowed on the right-hand side of a concept inclusion");
    b.name = name();
    return b;
  }

  RawConcept concept_rhs() {
    RawConcept c;
    if (try_keyword("not")) {
      c.base = basic();
      c.neg = true;
      expect(')');
      return c;
    }
    c.base = basic();
    return c;
  }

  void done() {
    if (pos_ != s_.size()) fail("unexpected trailing characters");
  }

  std::string name() {
    size_t start = pos_;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a symbol name");
    return s_.substr(start, pos_ - start);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(line_, col0_ + static_cast<int>(pos_), msg);
  }

 private:
  bool peek_keyword(const char* kw) const {
    std::string k = std::string(kw) + "(";
    return s_.compare(pos_, k.size(), k) == 0;
  }
  bool try_keyword(const char* kw) {
    if (!peek_keyword(kw)) return false;
    pos_ += std::char_traits<char>::length(kw) + 1;
    return true;
  }
  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  const std::string& s_;
  int col0_;
  int line_;
  size_t pos_ = 0;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

class SymbolTable {
 public:
  void note(const std::string& name, SymKind k, int line) {
    auto [it, fresh] = kinds_.emplace(name, k);
    if (!fresh && it->second != k)
      throw DisjointnessViolation("line " + std::to_string(line) + ": symbol '" + name + "' used as " +
                                  kind_name(k) + " but already a " + kind_name(it->second));
  }
  Signature build() const {
    std::vector<std::string> c, r, i;
    for (const auto& [n, k] : kinds_) {
      if (k == SymKind::Concept) c.push_back(n);
      if (k == SymKind::Role) r.push_back(n);
      if (k == SymKind::Individual) i.push_back(n);
    }
    return Signature(c, r, i);
  }

 private:
  std::map<std::string, SymKind> kinds_;
};

void note_basic(SymbolTable& st, const RawBasic& b, int line) {
  st.note(b.name, b.exists ? SymKind::Role : SymKind::Concept, line);
}

std::optional<RawAxiom> parse_line(std::string_view line, int lineno, SymbolTable* st,
                                   std::vector<std::pair<std::string, SymKind>>* decls) {
  auto toks = tokenize(line);
  if (toks.empty()) return std::nullopt;
  const std::string& kw = toks[0].text;
  auto need = [&](size_t n) {
    if (toks.size() != n + 1)
      throw SyntaxError(lineno, toks[0].col,
                        "'" + kw + "' expects " + std::to_string(n) + " argument(s), got " + std::to_string(toks.size() - 1));
  };
  auto plain_name = [&](const Token& t) {
    TokenParser p(t, lineno);
    std::string n = p.name();
    p.done();
    return n;
  };

  if (kw == "concept" || kw == "role" || kw == "individual") {
    need(1);
    SymKind k = kw == "concept" ? SymKind::Concept : kw == "role" ? SymKind::Role : SymKind::Individual;
    std::string n = plain_name(toks[1]);
    if (decls) decls->push_back({n, k});
    if (st) st->note(n, k, lineno);
    return std::nullopt;
  }

  RawAxiom ax;
  ax.line = lineno;
  if (kw == "ci") {
    need(2);
    ax.kind = Axiom::Kind::CI;
    TokenParser pl(toks[1], lineno);
    ax.lhs = pl.basic();
    pl.done();
    TokenParser pr(toks[2], lineno);
    ax.rhs = pr.concept_rhs();
    pr.done();
    if (st) {
      note_basic(*st, ax.lhs, lineno);
      note_basic(*st, ax.rhs.base, lineno);
    }
  } else if (kw == "ri") {
    need(2);
    ax.kind = Axiom::Kind::RI;
    TokenParser p1(toks[1], lineno);
    ax.r1 = p1.role();
    p1.done();
    TokenParser p2(toks[2], lineno);
    ax.r2 = p2.role();
    p2.done();
    if (st) {
      st->note(ax.r1.name, SymKind::Role, lineno);
      st->note(ax.r2.name, SymKind::Role, lineno);
    }
  } else if (kw == "ca") {
    need(2);
    ax.kind = Axiom::Kind::ConceptAssertion;
    TokenParser p(toks[1], lineno);
    ax.lhs = p.basic();
    p.done();
    ax.a = plain_name(toks[2]);
    if (st) {
      note_basic(*st, ax.lhs, lineno);
      st->note(ax.a, SymKind::Individual, lineno);
    }
  } else if (kw == "ra") {
    need(3);
    ax.kind = Axiom::Kind::RoleAssertion;
    TokenParser p(toks[1], lineno);
    ax.r1 = p.role();
    p.done();
    ax.a = plain_name(toks[2]);
    ax.b = plain_name(toks[3]);
    if (st) {
      st->note(ax.r1.name, SymKind::Role, lineno);
      st->note(ax.a, SymKind::Individual, lineno);
      st->note(ax.b, SymKind::Individual, lineno);
    }
  } else {
    throw SyntaxError(lineno, toks[0].col, "unknown statement '" + kw + "'");
  }
  return ax;
}

int need_id(int id, const std::string& what, const std::string& name, int line) {
  if (id < 0) throw UnknownSymbol("line " + std::to_string(line) + ": unknown " + what + " '" + name + "'");
  return id;
}

Role resolve(const Signature& sig, const RawRole& r, int line) {
  return {need_id(sig.role_id(r.name), "role", r.name, line), r.inv};
}

Basic resolve(const Signature& sig, const RawBasic& b, int line) {
  if (b.exists) return Basic::exists({need_id(sig.role_id(b.name), "role", b.name, line), b.inv});
  return Basic::atomic(need_id(sig.concept_id(b.name), "concept", b.name, line));
}

Axiom resolve(const Signature& sig, const RawAxiom& r) {
  switch (r.kind) {
    case Axiom::Kind::CI:
      return Axiom::ci(resolve(sig, r.lhs, r.line), Concept{resolve(sig, r.rhs.base, r.line), r.rhs.neg});
    case Axiom::Kind::RI:
      return Axiom::ri(resolve(sig, r.r1, r.line), resolve(sig, r.r2, r.line));
    case Axiom::Kind::ConceptAssertion:
      return Axiom::ca(resolve(sig, r.lhs, r.line), need_id(sig.individual_id(r.a), "individual", r.a, r.line));
    case Axiom::Kind::RoleAssertion:
      return Axiom::ra(resolve(sig, r.r1, r.line), need_id(sig.individual_id(r.a), "individual", r.a, r.line),
                       need_id(sig.individual_id(r.b), "individual", r.b, r.line));
  }
  return {};
}

}  // namespace

KnowledgeBase parse_kb(std::string_view text) {
  SymbolTable st;
  std::vector<RawAxiom> raw;
  int lineno = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    if (auto ax = parse_line(text.substr(start, end - start), lineno, &st, nullptr)) raw.push_back(*ax);
    start = end + 1;
  }
  KnowledgeBase kb;
  kb.sig = st.build();
  for (const auto& r : raw) {
    Axiom ax = resolve(kb.sig, r);
    (ax.kind == Axiom::Kind::CI || ax.kind == Axiom::Kind::RI ? kb.tbox : kb.abox).push_back(ax);
  }
  finalize(kb);
  validate(kb);
  return kb;
}

Axiom parse_axiom(const Signature& sig, std::string_view line) {
  auto ax = parse_line(line, 1, nullptr, nullptr);
  if (!ax) throw SyntaxError(1, 1, "expected an axiom");
  return normalize_axiom(resolve(sig, *ax));
}

KnowledgeBase rebase(const KnowledgeBase& kb, const Signature& target) {
  auto cmap = [&](int c) { return need_id(target.concept_id(kb.sig.concepts()[c]), "concept", kb.sig.concepts()[c], 0); };
  auto rmap = [&](Role r) { return Role{need_id(target.role_id(kb.sig.roles()[r.name]), "role", kb.sig.roles()[r.name], 0), r.inv}; };
  auto imap = [&](int a) {
    return need_id(target.individual_id(kb.sig.individuals()[a]), "individual", kb.sig.individuals()[a], 0);
  };
  auto bmap = [&](Basic b) { return b.is_atomic() ? Basic::atomic(cmap(b.id)) : Basic::exists(rmap(b.role())); };
  auto amap = [&](const Axiom& ax) {
    switch (ax.kind) {
      case Axiom::Kind::CI: return Axiom::ci(bmap(ax.lhs), Concept{bmap(ax.rhs.base), ax.rhs.neg});
      case Axiom::Kind::RI: return Axiom::ri(rmap(ax.sub), rmap(ax.sup));
      case Axiom::Kind::ConceptAssertion: return Axiom::ca(bmap(ax.cls), imap(ax.a));
      case Axiom::Kind::RoleAssertion: return Axiom::ra(rmap(ax.role), imap(ax.a), imap(ax.b));
    }
    return ax;
  };
  KnowledgeBase out;
  out.sig = target;
  for (const auto& ax : kb.tbox) out.tbox.push_back(amap(ax));
  for (const auto& ax : kb.abox) out.abox.push_back(amap(ax));
  finalize(out);
  return out;
}

}  // namespace boxlite
