#include "boxlite/analytic.hpp"

#include <algorithm>

#include "boxlite/errors.hpp"

namespace boxlite {

namespace {

using Interval = std::pair<double, double>;
using CB = ConstantBank;

void put(Box& b, int i, Interval v) {
  b.lower[i] = v.first;
  b.upper[i] = v.second;
}

Interval shrink(Interval v, double m) { return {v.first + m, v.second - m}; }

}  // namespace

BoxInterpretation embed_interpretation(const Interpretation& I, double eps, EmbedDiagnostics* diag) {
  if (!(eps > 0) || eps > CB::eps_max) throw Error("analytic embeddings need 0 < eps <= 0.25");
  const Signature& sig = I.sig;
  const int nc = sig.num_concepts(), nr = sig.num_roles(), ni = sig.num_individuals();
  const int nb = sig.num_basic(), n = I.size();
  DimensionPlan plan{nb, nr, n};
  const int d = plan.total();

  std::vector<std::vector<bool>> ext(nb);
  std::vector<bool> nonempty(nb, false);
  for (int b = 0; b < nb; ++b) {
    ext[b] = I.extension(Basic::from_index(nc, b));
    for (bool x : ext[b]) nonempty[b] = nonempty[b] || x;
  }
  BitMatrix subset(nb, nb), meets(nb, nb);
  for (int x = 0; x < nb; ++x)
    for (int y = 0; y < nb; ++y) {
      bool sub = true, meet = false;
      for (int e = 0; e < n; ++e) {
        if (ext[x][e] && !ext[y][e]) sub = false;
        if (ext[x][e] && ext[y][e]) meet = true;
      }
      subset.set(x, y, sub);
      meets.set(x, y, meet);
    }
  // box of a nonempty D in the dimension reserved for C
  auto case_box = [&](int D, int C) -> Interval {
    if (!nonempty[C]) return CB::icap;
    bool dc = subset(D, C), cd = subset(C, D);
    if (dc && cd) return CB::seq;
    if (dc) return CB::isub;
    if (cd) return CB::isup;
    if (!meets(D, C)) return CB::inotsup;
    return CB::icap;
  };

  // role-dimension flags: true = large
  std::vector<std::vector<bool>> head_large(2 * nr, std::vector<bool>(d, false));
  std::vector<std::vector<bool>> atom_large(nc, std::vector<bool>(d, false));
  EmbedDiagnostics local;
  local.plan = plan;
  std::vector<bool> fl(nb);
  for (int q = 0; q < nr; ++q)
    for (int c = 0; c < n; ++c) {
      const int dim = plan.role_dim(q, c);
      for (int x = 0; x < 2 * nr; ++x) {
        Role X = Role::from_index(x);
        bool small = true;
        for (int e = 0; e < n && small; ++e)
          if (I.in_role(X, c, e) && !I.role_ext[q](c, e)) small = false;
        fl[nc + x] = !small;
      }
      for (int a = 0; a < nc; ++a) {
        fl[a] = false;
        for (int x = nc; x < nb; ++x)
          if (nonempty[x] && fl[x] && subset(x, a)) fl[a] = true;
      }
      bool monotone = true;
      for (int x = 0; x < nb && monotone; ++x) {
        if (!nonempty[x]) continue;
        for (int y = 0; y < nb; ++y)
          if (nonempty[y] && subset(x, y) && fl[x] && !fl[y]) {
            monotone = false;
            break;
          }
      }
      if (!monotone) {
        local.collapsed.push_back({q, c});
        std::fill(fl.begin(), fl.end(), true);
      }
      for (int x = 0; x < 2 * nr; ++x) head_large[x][dim] = fl[nc + x];
      for (int a = 0; a < nc; ++a) atom_large[a][dim] = fl[a];
    }

  BoxInterpretation eta;
  eta.config = {d, CB::s_world, eps};
  eta.sig = sig;
  eta.pos.assign(ni, std::vector<double>(d, 0.0));
  eta.bump.assign(ni, std::vector<double>(d, 0.0));
  for (int a = 0; a < ni; ++a) {
    const int e = I.individual_map[a];
    for (int C = 0; C < nb; ++C) {
      eta.pos[a][plan.concept_dim(C)] = ext[C][e] ? CB::p_in : CB::p_out;
      eta.bump[a][plan.concept_dim(C)] = CB::b_concept;
    }
    for (int q = 0; q < nr; ++q)
      for (int c = 0; c < n; ++c) {
        eta.pos[a][plan.role_dim(q, c)] = e == c ? CB::p_self : CB::p_other;
        eta.bump[a][plan.role_dim(q, c)] = I.role_ext[q](c, e) ? CB::b_in : CB::b_out;
      }
  }

  eta.concept_box.assign(nc, Box::empty_box(d));
  for (int A = 0; A < nc; ++A) {
    if (!nonempty[A]) continue;
    Box& b = eta.concept_box[A];
    for (int C = 0; C < nb; ++C) put(b, plan.concept_dim(C), case_box(A, C));
    for (int dim = nb; dim < d; ++dim) put(b, dim, atom_large[A][dim] ? CB::exists_large : CB::exists_small);
  }

  eta.role_boxes.assign(nr, {Box::empty_box(d), Box::empty_box(d), Box::empty_box(d)});
  for (int r = 0; r < nr; ++r) {
    const int fwd = Role{r, false}.index(), bwd = Role{r, true}.index();
    if (!nonempty[nc + fwd]) continue;
    RoleBoxes& rb = eta.role_boxes[r];
    for (int C = 0; C < nb; ++C) {
      const int dim = plan.concept_dim(C);
      put(rb.head, dim, shrink(case_box(nc + fwd, C), CB::head_margin));
      put(rb.tail, dim, shrink(case_box(nc + bwd, C), CB::head_margin));
      put(rb.bump, dim, {-CB::head_margin, CB::head_margin});
    }
    for (int dim = nb; dim < d; ++dim) {
      put(rb.head, dim, head_large[fwd][dim] ? CB::head_large : CB::head_small);
      put(rb.tail, dim, head_large[bwd][dim] ? CB::head_large : CB::head_small);
      put(rb.bump, dim, CB::role_bump);
    }
  }
  if (diag) *diag = std::move(local);
  return eta;
}

BoxInterpretation faithful_embedding(const KnowledgeBase& kb, Witness witness, double eps, EmbedDiagnostics* diag) {
  Closure cl = compute_closure(kb);
  if (!cl.satisfiable) throw UnsatKB("no faithful embedding exists for an unsatisfiable knowledge base");
  return embed_interpretation(canonical_model(kb, cl, witness), eps, diag);
}

int d_min(const Signature& sig, DminMode mode) {
  const int nc = sig.num_concepts(), nr = sig.num_roles(), ni = sig.num_individuals();
  if (mode == DminMode::TBox) return nc + 3 * nr;
  return nc + nr * (2 + ni + 2 * nr);
}

BoxInterpretation pad_dimensions(const BoxInterpretation& eta, int target_d) {
  const int d = eta.config.d;
  if (target_d < d)
    throw InvalidTarget("cannot pad from " + std::to_string(d) + " down to " + std::to_string(target_d) + " dimensions");
  BoxInterpretation out = eta;
  out.config.d = target_d;
  auto grow = [&](std::vector<double>& v) {
    const double last = v.empty() ? 0.0 : v.back();
    v.resize(target_d, last);
  };
  for (auto& v : out.pos) grow(v);
  for (auto& v : out.bump) grow(v);
  auto grow_box = [&](Box& b) {
    grow(b.lower);
    grow(b.upper);
  };
  for (auto& b : out.concept_box) grow_box(b);
  for (auto& rb : out.role_boxes) {
    grow_box(rb.head);
    grow_box(rb.tail);
    grow_box(rb.bump);
  }
  return out;
}

std::vector<double> analytic_start(const KnowledgeBase& kb, const VariableLayout& lay) {
  const double k = lay.cfg.s_world / CB::s_world;
  const double eps = std::min(CB::eps_max, lay.cfg.eps / k);
  BoxInterpretation eta = pad_dimensions(faithful_embedding(kb, Witness::Reduced, eps), lay.cfg.d);
  auto scale = [&](std::vector<double>& v) {
    for (double& x : v) x *= k;
  };
  for (auto& v : eta.pos) scale(v);
  for (auto& v : eta.bump) scale(v);
  for (auto& b : eta.concept_box) {
    scale(b.lower);
    scale(b.upper);
  }
  for (auto& rb : eta.role_boxes)
    for (Box* b : {&rb.head, &rb.tail, &rb.bump}) {
      scale(b->lower);
      scale(b->upper);
    }
  eta.config = lay.cfg;
  return pack(lay, eta);
}

AuditReport audit_faithfulness(const BoxInterpretation& eta, const KnowledgeBase& kb, double tol) {
  Closure cl = compute_closure(kb);
  if (!cl.satisfiable) throw UnsatKB("faithfulness audit on an unsatisfiable knowledge base");
  align(eta, kb.sig);
  AuditReport rep;
  for (const auto* box : {&kb.tbox, &kb.abox})
    for (const auto& ax : *box)
      if (!satisfies(eta, ax, tol)) {
        rep.kb_model = false;
        rep.violations.push_back("not satisfied, stated: " + to_string(kb.sig, ax));
      }
  rep.box_consistent = is_box_consistent(eta);
  if (!rep.box_consistent) rep.violations.push_back("box inconsistent");
  for (const auto& ax : axiom_space(kb.sig)) {
    bool sat = satisfies(eta, ax, tol);
    if (!sat && entails(cl, ax)) {
      rep.kb_entailed = false;
      rep.violations.push_back("not satisfied, entailed: " + to_string(kb.sig, ax));
    }
    if (sat && !is_consistent_with(kb, cl, ax)) {
      rep.weakly_faithful = false;
      rep.violations.push_back("satisfied, inconsistent with the KB: " + to_string(kb.sig, ax));
    }
  }
  return rep;
}

}  // namespace boxlite
