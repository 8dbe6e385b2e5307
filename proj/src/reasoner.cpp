#include "boxlite/reasoner.hpp"

#include <sstream>

#include "boxlite/errors.hpp"

namespace boxlite {

void BitMatrix::transitive_close() {
  for (int k = 0; k < rows_; ++k)
    for (int i = 0; i < rows_; ++i) {
      if (!(*this)(i, k)) continue;
      for (int j = 0; j < cols_; ++j)
        if ((*this)(k, j)) set(i, j);
    }
}

BitMatrix role_closure(const Signature& sig, const std::vector<Axiom>& tbox) {
  int n = 2 * sig.num_roles();
  BitMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i);
  for (const auto& ax : tbox) {
    if (ax.kind != Axiom::Kind::RI) continue;
    m.set(ax.sub.index(), ax.sup.index());
    m.set(ax.sub.inverse().index(), ax.sup.inverse().index());
  }
  m.transitive_close();
  return m;
}

ConceptClosure concept_closure(const Signature& sig, const std::vector<Axiom>& tbox, const BitMatrix& role_sub) {
  const int nc = sig.num_concepts();
  const int nb = sig.num_basic();
  ConceptClosure out{BitMatrix(nb, nb), BitMatrix(nb, nb), std::vector<bool>(nb, false)};
  BitMatrix& sub = out.sub;
  for (int i = 0; i < nb; ++i) sub.set(i, i);
  for (const auto& ax : tbox)
    if (ax.kind == Axiom::Kind::CI && !ax.rhs.neg) sub.set(ax.lhs.index(nc), ax.rhs.base.index(nc));
  for (int s = 0; s < role_sub.rows(); ++s)
    for (int t = 0; t < role_sub.cols(); ++t)
      if (role_sub(s, t)) sub.set(nc + s, nc + t);
  sub.transitive_close();

  BitMatrix& disj = out.disj;
  for (const auto& ax : tbox) {
    if (ax.kind != Axiom::Kind::CI || !ax.rhs.neg) continue;
    int b = ax.lhs.index(nc), c = ax.rhs.base.index(nc);
    for (int x = 0; x < nb; ++x) {
      if (!sub(x, b)) continue;
      for (int y = 0; y < nb; ++y)
        if (sub(y, c)) {
          disj.set(x, y);
          disj.set(y, x);
        }
    }
  }

  auto& unsat = out.unsat;
  for (int x = 0; x < nb; ++x) unsat[x] = disj(x, x);
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < nb; ++x) {
      if (!unsat[x]) continue;
      if (x >= nc) {
        int partner = nc + ((x - nc) ^ 1);
        if (!unsat[partner]) unsat[partner] = changed = true;
      }
      for (int y = 0; y < nb; ++y)
        if (sub(y, x) && !unsat[y]) unsat[y] = changed = true;
    }
  }
  for (int x = 0; x < nb; ++x) {
    if (!unsat[x]) continue;
    for (int y = 0; y < nb; ++y) {
      sub.set(x, y);
      disj.set(x, y);
      disj.set(y, x);
    }
  }
  return out;
}

void membership_closure(const KnowledgeBase& kb, Closure& cl) {
  const int ni = kb.sig.num_individuals();
  const int nc = cl.nc;
  const int nb = cl.nb();
  cl.role_member.assign(cl.nr, BitMatrix(ni, ni));
  BitMatrix seed(ni, nb);
  for (const auto& ax : kb.abox) {
    if (ax.kind == Axiom::Kind::ConceptAssertion) {
      seed.set(ax.a, ax.cls.index(nc));
      continue;
    }
    Axiom n = normalize_axiom(ax);
    seed.set(n.a, Basic::exists(n.role).index(nc));
    seed.set(n.b, Basic::exists(n.role.inverse()).index(nc));
    for (int t = 0; t < 2 * cl.nr; ++t) {
      if (!cl.role_sub(n.role.index(), t)) continue;
      Role tr = Role::from_index(t);
      if (tr.inv)
        cl.role_member[tr.name].set(n.b, n.a);
      else
        cl.role_member[tr.name].set(n.a, n.b);
    }
  }
  cl.member = BitMatrix(ni, nb);
  for (int a = 0; a < ni; ++a)
    for (int x = 0; x < nb; ++x) {
      if (!seed(a, x)) continue;
      for (int y = 0; y < nb; ++y)
        if (cl.sub(x, y)) cl.member.set(a, y);
    }
  cl.satisfiable = true;
  for (int a = 0; a < ni && cl.satisfiable; ++a)
    for (int x = 0; x < nb && cl.satisfiable; ++x) {
      if (!cl.member(a, x)) continue;
      for (int y = x; y < nb; ++y)
        if (cl.member(a, y) && cl.disj(x, y)) {
          cl.satisfiable = false;
          break;
        }
    }
}

Closure compute_closure(const KnowledgeBase& kb) {
  Closure cl;
  cl.nc = kb.sig.num_concepts();
  cl.nr = kb.sig.num_roles();
  cl.ni = kb.sig.num_individuals();
  cl.role_sub = role_closure(kb.sig, kb.tbox);
  auto cc = concept_closure(kb.sig, kb.tbox, cl.role_sub);
  cl.sub = std::move(cc.sub);
  cl.disj = std::move(cc.disj);
  cl.unsat = std::move(cc.unsat);
  membership_closure(kb, cl);
  return cl;
}

bool is_satisfiable(const Closure& cl) { return cl.satisfiable; }
bool is_satisfiable(const KnowledgeBase& kb) { return compute_closure(kb).satisfiable; }

bool entails(const Closure& cl, const Axiom& ax) {
  if (!cl.satisfiable) throw UnsatKB("entailment queried on an unsatisfiable knowledge base");
  switch (ax.kind) {
    case Axiom::Kind::CI:
      return ax.rhs.neg ? cl.disjoint(ax.lhs, ax.rhs.base) : cl.subsumes(ax.lhs, ax.rhs.base);
    case Axiom::Kind::RI:
      return cl.role_subsumes(ax.sub, ax.sup) || cl.is_unsat(Basic::exists(ax.sub));
    case Axiom::Kind::ConceptAssertion:
      return cl.has(ax.a, ax.cls);
    case Axiom::Kind::RoleAssertion:
      return cl.has_role(ax.role, ax.a, ax.b);
  }
  return false;
}

bool entails(const KnowledgeBase& kb, const Axiom& ax) { return entails(compute_closure(kb), ax); }

bool concept_satisfiable(const Closure& cl, Basic d, Basic e) {
  if (!cl.satisfiable) throw UnsatKB("satisfiability of a concept queried on an unsatisfiable knowledge base");
  return !cl.is_unsat(d) && !cl.is_unsat(e) && !cl.disjoint(d, e);
}

bool concept_satisfiable(const KnowledgeBase& kb, Basic d, Basic e) {
  return concept_satisfiable(compute_closure(kb), d, e);
}

bool is_consistent_with(const KnowledgeBase& kb, const Axiom& ax) {
  KnowledgeBase ext = kb;
  (ax.is_tbox() ? ext.tbox : ext.abox).push_back(normalize_axiom(ax));
  return is_satisfiable(ext);
}

bool is_consistent_with(const KnowledgeBase& kb, const Closure& cl, const Axiom& ax) {
  if (!cl.satisfiable) return false;
  if (ax.is_tbox()) return is_consistent_with(kb, ax);
  const int nb = cl.nb();
  auto clash = [&](std::vector<bool>& have) {
    for (int x = 0; x < nb; ++x) {
      if (!have[x]) continue;
      for (int y = x; y < nb; ++y)
        if (have[y] && cl.disj(x, y)) return true;
    }
    return false;
  };
  auto with = [&](int a, std::vector<bool>& have, int seed) {
    for (int y = 0; y < nb; ++y)
      if (cl.member(a, y) || cl.sub(seed, y)) have[y] = true;
  };
  if (ax.kind == Axiom::Kind::ConceptAssertion) {
    std::vector<bool> have(nb, false);
    with(ax.a, have, ax.cls.index(cl.nc));
    return !clash(have);
  }
  Axiom n = normalize_axiom(ax);
  int fwd = Basic::exists(n.role).index(cl.nc), bwd = Basic::exists(n.role.inverse()).index(cl.nc);
  std::vector<bool> ha(nb, false), hb(nb, false);
  with(n.a, ha, fwd);
  with(n.b, hb, bwd);
  if (n.a == n.b) {
    for (int y = 0; y < nb; ++y) ha[y] = ha[y] || hb[y];
    return !clash(ha);
  }
  return !clash(ha) && !clash(hb);
}

std::vector<bool> Interpretation::extension(Basic b) const {
  const int n = size();
  if (b.is_atomic()) return concept_ext[b.id];
  std::vector<bool> out(n, false);
  const BitMatrix& m = role_ext[b.id];
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (b.inv ? m(y, x) : m(x, y)) {
        out[x] = true;
        break;
      }
  return out;
}

Interpretation canonical_model(const KnowledgeBase& kb, Witness witness) {
  return canonical_model(kb, compute_closure(kb), witness);
}

Interpretation canonical_model(const KnowledgeBase& kb, const Closure& cl, Witness witness) {
  if (!cl.satisfiable) throw UnsatKB("canonical model requested for an unsatisfiable knowledge base");
  const Signature& sig = kb.sig;
  const int nc = cl.nc, nb = cl.nb(), ni = cl.ni;
  Interpretation I;
  I.sig = sig;
  for (int a = 0; a < ni; ++a) {
    Element el;
    el.individual = a;
    I.elements.push_back(el);
    I.element_names.push_back(sig.individuals()[a]);
    I.individual_map.push_back(a);
  }
  // witness element for each satisfiable ∃S, indexed by Role::index
  std::vector<int> exists_elem(2 * cl.nr, -1);
  auto add_witness = [&](int x, int y) {
    Element el;
    el.kind = Element::Kind::Witness;
    el.d = Basic::from_index(nc, x);
    el.e = Basic::from_index(nc, y);
    std::string name = "c_" + to_string(sig, el.d);
    if (y != x) name += "&" + to_string(sig, el.e);
    I.elements.push_back(el);
    I.element_names.push_back(name);
  };
  for (int x = 0; x < nb; ++x) {
    if (cl.unsat[x]) continue;
    if (witness == Witness::Reduced && x < nc) continue;
    if (x >= nc) exists_elem[x - nc] = static_cast<int>(I.elements.size());
    add_witness(x, x);
  }
  if (witness == Witness::Full)
    for (int x = 0; x < nb; ++x)
      for (int y = x + 1; y < nb; ++y)
        if (!cl.unsat[x] && !cl.unsat[y] && !cl.disj(x, y)) add_witness(x, y);

  const int n = I.size();
  // K ⊨ D ⊑ X for the witness of element w
  auto wsub = [&](int w, int x) {
    const Element& el = I.elements[w];
    return cl.sub(el.d.index(nc), x) || cl.sub(el.e.index(nc), x);
  };

  I.concept_ext.assign(sig.num_concepts(), std::vector<bool>(n, false));
  for (int c = 0; c < sig.num_concepts(); ++c)
    for (int w = 0; w < n; ++w)
      I.concept_ext[c][w] = w < ni ? cl.member(w, c) : wsub(w, c);

  I.role_ext.assign(cl.nr, BitMatrix(n, n));
  for (int r = 0; r < cl.nr; ++r) {
    BitMatrix& m = I.role_ext[r];
    const int R = Role{r, false}.index();
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < ni; ++b)
        if (cl.role_member[r](a, b)) m.set(a, b);
    for (int s = 0; s < 2 * cl.nr; ++s) {
      int cs = exists_elem[s];
      if (cs < 0) continue;
      const int sbar = s ^ 1;
      const int exists_sbar = nc + sbar;
      const bool sbar_sub = cl.role_sub(sbar, R);
      const bool s_sub = cl.role_sub(s, R);
      for (int a = 0; a < ni; ++a) {
        if (!cl.member(a, exists_sbar)) continue;
        if (sbar_sub) m.set(a, cs);
        if (s_sub) m.set(cs, a);
      }
      if (s_sub && exists_elem[sbar] >= 0) m.set(cs, exists_elem[sbar]);
      for (int w = ni; w < n; ++w) {
        if (!wsub(w, exists_sbar)) continue;
        if (sbar_sub) m.set(w, cs);
        if (s_sub) m.set(cs, w);
      }
    }
  }
  return I;
}

bool model_check(const Interpretation& I, const Axiom& ax) {
  const int n = I.size();
  switch (ax.kind) {
    case Axiom::Kind::CI: {
      auto l = I.extension(ax.lhs), r = I.extension(ax.rhs.base);
      for (int x = 0; x < n; ++x)
        if (l[x] && r[x] == ax.rhs.neg) return false;
      return true;
    }
    case Axiom::Kind::RI:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (I.in_role(ax.sub, x, y) && !I.in_role(ax.sup, x, y)) return false;
      return true;
    case Axiom::Kind::ConceptAssertion:
      return I.extension(ax.cls)[I.individual_map[ax.a]];
    case Axiom::Kind::RoleAssertion:
      return I.in_role(ax.role, I.individual_map[ax.a], I.individual_map[ax.b]);
  }
  return false;
}

bool model_check(const Interpretation& I, const KnowledgeBase& kb) {
  for (const auto& ax : kb.tbox)
    if (!model_check(I, ax)) return false;
  for (const auto& ax : kb.abox)
    if (!model_check(I, ax)) return false;
  return true;
}

std::vector<Axiom> infer_test_assertions(const KnowledgeBase& kb) {
  Closure cl = compute_closure(kb);
  if (!cl.satisfiable) throw UnsatKB("cannot infer assertions from an unsatisfiable knowledge base");
  const int ni = cl.ni;
  std::vector<BitMatrix> stated(cl.nr, BitMatrix(ni, ni));
  for (const auto& ax : kb.abox)
    if (ax.kind == Axiom::Kind::RoleAssertion) {
      Axiom n = normalize_axiom(ax);
      stated[n.role.name].set(n.a, n.b);
    }
  std::vector<Axiom> out;
  for (int r = 0; r < cl.nr; ++r)
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < ni; ++b)
        if (cl.role_member[r](a, b) && !stated[r](a, b)) out.push_back(Axiom::ra({r, false}, a, b));
  return out;
}

std::vector<Axiom> axiom_space(const Signature& sig) {
  std::vector<Axiom> out;
  auto basics = enumerate_basic_concepts(sig);
  for (Basic l : basics)
    for (Basic r : basics) {
      out.push_back(Axiom::ci(l, {r, false}));
      out.push_back(Axiom::ci(l, {r, true}));
    }
  for (int s = 0; s < 2 * sig.num_roles(); ++s)
    for (int t = 0; t < 2 * sig.num_roles(); ++t) out.push_back(Axiom::ri(Role::from_index(s), Role::from_index(t)));
  for (Basic d : basics)
    for (int a = 0; a < sig.num_individuals(); ++a) out.push_back(Axiom::ca(d, a));
  for (int r = 0; r < sig.num_roles(); ++r)
    for (int a = 0; a < sig.num_individuals(); ++a)
      for (int b = 0; b < sig.num_individuals(); ++b) out.push_back(Axiom::ra({r, false}, a, b));
  return out;
}

std::string dump_interpretation(const Interpretation& I) {
  std::ostringstream os;
  os << "domain";
  for (const auto& n : I.element_names) os << " " << n;
  os << "\n";
  for (int a = 0; a < I.sig.num_individuals(); ++a)
    os << "individual " << I.sig.individuals()[a] << " " << I.element_names[I.individual_map[a]] << "\n";
  for (int c = 0; c < I.sig.num_concepts(); ++c) {
    os << "concept " << I.sig.concepts()[c];
    for (int x = 0; x < I.size(); ++x)
      if (I.concept_ext[c][x]) os << " " << I.element_names[x];
    os << "\n";
  }
  for (int r = 0; r < I.sig.num_roles(); ++r) {
    os << "role " << I.sig.roles()[r];
    for (int x = 0; x < I.size(); ++x)
      for (int y = 0; y < I.size(); ++y)
        if (I.role_ext[r](x, y)) os << " (" << I.element_names[x] << "," << I.element_names[y] << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace boxlite
