#include "boxlite/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "boxlite/errors.hpp"
#include "boxlite/reasoner.hpp"

namespace boxlite {

using json = nlohmann::json;

VariableLayout build_layout(const Signature& sig, const WorldConfig& cfg) {
  VariableLayout lay;
  lay.cfg = cfg;
  lay.ni = sig.num_individuals();
  lay.nc = sig.num_concepts();
  lay.nr = sig.num_roles();
  lay.n = (2 * lay.ni + 2 * lay.nc + 6 * lay.nr) * cfg.d;
  return lay;
}

namespace {

DimAffine var(int base) { return {{{base, 1.0}}, 0.0}; }

DimAffine minus(const DimAffine& a, const DimAffine& b) {
  DimAffine out = a;
  for (auto [base, coef] : b.terms) out.terms.push_back({base, -coef});
  out.c -= b.c;
  return out;
}

DimAffine negate_plus(double k, const DimAffine& a) {
  DimAffine out;
  for (auto [base, coef] : a.terms) out.terms.push_back({base, -coef});
  out.c = k - a.c;
  return out;
}

}  // namespace

BoxExpr box_expr(const VariableLayout& lay, Role r, int part) {
  if (part < 2 && r.inv) part = 1 - part;
  return {var(lay.role_lower(r.name, part)), var(lay.role_upper(r.name, part))};
}

BoxExpr box_expr(const VariableLayout& lay, Concept c) {
  BoxExpr b;
  if (c.base.is_atomic()) {
    b = {var(lay.concept_lower(c.base.id)), var(lay.concept_upper(c.base.id))};
  } else {
    Role r = c.base.role();
    BoxExpr h = box_expr(lay, r, 0), bb = box_expr(lay, r, 2);
    b = {minus(h.lower, bb.upper), minus(h.upper, bb.lower)};
  }
  if (!c.neg) return b;
  const double s = lay.cfg.s_world;
  return {negate_plus(-s, b.lower), negate_plus(s, b.upper)};
}

namespace {

// x[i] - y[i] <= k with repeated indices merged
LinearConstraint row(const DimAffine& x, const DimAffine& y, int i, double k = 0.0) {
  std::map<int, double> acc;
  for (auto [base, coef] : x.terms) acc[base + i] += coef;
  for (auto [base, coef] : y.terms) acc[base + i] -= coef;
  LinearConstraint out;
  for (auto [idx, coef] : acc)
    if (coef != 0.0) out.coeffs.push_back({idx, coef});
  out.rhs = k - x.c + y.c;
  return out;
}

}  // namespace

std::pair<std::vector<LinearConstraint>, ConstraintTally> compile_constraints(const KnowledgeBase& kb,
                                                                              const WorldConfig& cfg) {
  validate(kb);
  const Signature& sig = kb.sig;
  const int d = cfg.d, nc = sig.num_concepts();
  if (d < sig.num_basic())
    throw CompileError("d = " + std::to_string(d) + " is below |N_C| + 2|N_R| = " + std::to_string(sig.num_basic()));
  VariableLayout lay = build_layout(sig, cfg);
  if (lay.n == 0) throw CompileError("empty signature, nothing to compile");
  const double s = cfg.s_world, eps = cfg.eps;
  std::vector<LinearConstraint> out;
  ConstraintTally tally;
  const DimAffine zero;

  for (Basic b : enumerate_basic_concepts(sig)) {
    BoxExpr e = box_expr(lay, Concept{b, false});
    int i = b.index(nc);
    DimAffine sum = e.lower;
    for (auto t : e.upper.terms) sum.terms.push_back(t);
    sum.c += e.upper.c;
    out.push_back(row(sum, zero, i, -s));
    ++tally.consistency;
  }

  std::vector<BoxExpr> stored;
  for (int c = 0; c < nc; ++c) stored.push_back(box_expr(lay, Concept{Basic::atomic(c), false}));
  for (int r = 0; r < sig.num_roles(); ++r)
    for (int part = 0; part < 3; ++part) stored.push_back(box_expr(lay, Role{r, false}, part));
  for (const auto& b : stored)
    for (int i = 0; i < d; ++i) {
      out.push_back(row(b.lower, b.upper, i, 0.0));
      out.push_back(row(b.upper, b.lower, i, 2 * s));
      tally.width += 2;
    }

  for (int a = 0; a < sig.num_individuals(); ++a)
    for (int base : {lay.pos(a), lay.bump(a)})
      for (int i = 0; i < d; ++i) {
        out.push_back(row(var(base), zero, i, s - eps));
        out.push_back(row(zero, var(base), i, s - eps));
        tally.universe += 2;
      }

  for (const auto& ax : kb.tbox) {
    if (ax.kind == Axiom::Kind::CI) {
      BoxExpr l = box_expr(lay, Concept{ax.lhs, false}), r = box_expr(lay, ax.rhs);
      for (int i = 0; i < d; ++i) {
        out.push_back(row(r.lower, l.lower, i));
        out.push_back(row(l.upper, r.upper, i));
        tally.ci += 2;
      }
    } else {
      for (int part = 0; part < 3; ++part) {
        BoxExpr sb = box_expr(lay, ax.sub, part), tb = box_expr(lay, ax.sup, part);
        for (int i = 0; i < d; ++i) {
          out.push_back(row(tb.lower, sb.lower, i));
          out.push_back(row(sb.upper, tb.upper, i));
          tally.ri += 2;
        }
      }
    }
  }
  return {std::move(out), tally};
}

ObjectiveSpec compile_objective(const KnowledgeBase& kb, const WorldConfig& cfg, double l1, double l2, double l3,
                                bool exclude_entailed_negatives) {
  if (l1 < 0 || l2 < 0 || l3 < 0) throw Error("objective weights must be nonnegative");
  const Signature& sig = kb.sig;
  VariableLayout lay = build_layout(sig, cfg);
  ObjectiveSpec obj;
  obj.l1 = l1;
  obj.l2 = l2;
  obj.l3 = l3;
  const int ni = sig.num_individuals();
  std::vector<std::vector<bool>> asserted(sig.num_basic(), std::vector<bool>(ni, false));
  for (const auto& ax : kb.abox) {
    if (ax.kind == Axiom::Kind::ConceptAssertion) {
      asserted[ax.cls.index(sig.num_concepts())][ax.a] = true;
      obj.assertion_terms.push_back({ax, {{box_expr(lay, Concept{ax.cls, false}), var(lay.pos(ax.a))}}});
      continue;
    }
    Axiom n = normalize_axiom(ax);
    DimAffine ab = var(lay.pos(n.a)), ba = var(lay.pos(n.b));
    ab.terms.push_back({lay.bump(n.b), 1.0});
    ba.terms.push_back({lay.bump(n.a), 1.0});
    BoxExpr bump = box_expr(lay, n.role, 2);
    obj.assertion_terms.push_back({n,
                                   {{box_expr(lay, n.role, 0), ab},
                                    {box_expr(lay, n.role, 1), ba},
                                    {bump, var(lay.bump(n.a))},
                                    {bump, var(lay.bump(n.b))}}});
  }
  Closure cl;
  if (exclude_entailed_negatives) cl = compute_closure(kb);
  for (Basic b : enumerate_basic_concepts(sig))
    for (int a = 0; a < ni; ++a) {
      if (asserted[b.index(sig.num_concepts())][a]) continue;
      if (exclude_entailed_negatives && cl.satisfiable && cl.has(a, b)) continue;
      obj.negative_terms.push_back({Axiom::ca(b, a), {{box_expr(lay, Concept{b, true}), var(lay.pos(a))}}});
    }
  for (int c = 0; c < sig.num_concepts(); ++c)
    obj.width_terms_cr.push_back({sig.concepts()[c], box_expr(lay, Concept{Basic::atomic(c), false})});
  for (int r = 0; r < sig.num_roles(); ++r) {
    obj.width_terms_cr.push_back({sig.roles()[r] + ".head", box_expr(lay, Role{r, false}, 0)});
    obj.width_terms_cr.push_back({sig.roles()[r] + ".tail", box_expr(lay, Role{r, false}, 1)});
    obj.width_terms_bump.push_back({sig.roles()[r] + ".bump", box_expr(lay, Role{r, false}, 2)});
  }
  return obj;
}

CompiledProblem compile_problem(const KnowledgeBase& kb, const CompileOptions& opts) {
  opts.cfg.validate();
  CompiledProblem p;
  p.sig = kb.sig;
  p.layout = build_layout(kb.sig, opts.cfg);
  auto [cons, tally] = compile_constraints(kb, opts.cfg);
  p.constraints = std::move(cons);
  p.tally = tally;
  p.objective = compile_objective(kb, opts.cfg, opts.l1, opts.l2, opts.l3, opts.exclude_entailed_negatives);
  for (int i = 0; i < kb.sig.num_basic(); ++i) p.concept_dim.push_back(i);
  return p;
}

double evaluate_dist(const DistTerm& t, const std::vector<double>& z, int d, double eps) {
  std::vector<double> y(2 * d);
  for (int i = 0; i < d; ++i) {
    double x = t.point.at(z, i);
    y[i] = t.box.lower.at(z, i) + eps - x;
    y[d + i] = x - t.box.upper.at(z, i) + eps;
  }
  return sdist_neg_orthant(y);
}

double evaluate_loss(const LossTerm& t, const std::vector<double>& z, int d, double eps) {
  double best = -INFINITY;
  for (const auto& part : t.parts) best = std::max(best, evaluate_dist(part, z, d, eps));
  return best;
}

double evaluate_norm(const NormTerm& t, const std::vector<double>& z, int d) {
  double sq = 0;
  for (int i = 0; i < d; ++i) {
    double w = t.box.upper.at(z, i) - t.box.lower.at(z, i);
    sq += w * w;
  }
  return std::sqrt(sq);
}

namespace {

void check_size(const CompiledProblem& p, const std::vector<double>& z) {
  if (static_cast<int>(z.size()) != p.layout.n)
    throw DimensionMismatch("vector has " + std::to_string(z.size()) + " entries, problem has " +
                            std::to_string(p.layout.n));
}

double max_loss(const std::vector<LossTerm>& ts, const std::vector<double>& z, int d, double eps) {
  if (ts.empty()) return 0.0;
  double best = -INFINITY;
  for (const auto& t : ts) best = std::max(best, evaluate_loss(t, z, d, eps));
  return best;
}

double sum_norms(const std::vector<NormTerm>& ts, const std::vector<double>& z, int d) {
  double s = 0;
  for (const auto& t : ts) s += evaluate_norm(t, z, d);
  return s;
}

}  // namespace

double evaluate_objective(const CompiledProblem& p, const std::vector<double>& z) {
  check_size(p, z);
  const int d = p.layout.cfg.d;
  const double eps = p.layout.cfg.eps;
  const auto& o = p.objective;
  double f = max_loss(o.assertion_terms, z, d, eps);
  if (o.l1 != 0) f += o.l1 * max_loss(o.negative_terms, z, d, eps);
  if (o.l2 != 0) f += o.l2 * sum_norms(o.width_terms_cr, z, d);
  if (o.l3 != 0) f += o.l3 * sum_norms(o.width_terms_bump, z, d);
  return f;
}

double feasibility_residual(const std::vector<LinearConstraint>& cons, const std::vector<double>& z) {
  double r = 0;
  for (const auto& c : cons) {
    double v = -c.rhs;
    for (auto [idx, coef] : c.coeffs) v += coef * z[idx];
    r = std::max(r, v);
  }
  return r;
}

double feasibility_residual(const CompiledProblem& p, const std::vector<double>& z) {
  check_size(p, z);
  return feasibility_residual(p.constraints, z);
}

BoxInterpretation extract_interpretation(const CompiledProblem& p, const std::vector<double>& z, double tol) {
  double res = feasibility_residual(p, z);
  if (res > tol) throw InfeasiblePoint("residual " + std::to_string(res) + " exceeds tolerance " + std::to_string(tol));
  const VariableLayout& lay = p.layout;
  const int d = lay.cfg.d;
  const double s = lay.cfg.s_world;
  auto slice = [&](int base) { return std::vector<double>(z.begin() + base, z.begin() + base + d); };
  auto box = [&](int lo, int hi) {
    Box b(slice(lo), slice(hi));
    for (int i = 0; i < d; ++i) {
      double w = b.upper[i] - b.lower[i];
      if (w < 0 && w >= -tol) b.upper[i] = b.lower[i];
      if (w > 2 * s && w <= 2 * s + tol) b.upper[i] = b.lower[i] + 2 * s;
    }
    return b;
  };
  BoxInterpretation eta;
  eta.config = lay.cfg;
  eta.sig = p.sig;
  for (int a = 0; a < lay.ni; ++a) {
    eta.pos.push_back(slice(lay.pos(a)));
    eta.bump.push_back(slice(lay.bump(a)));
  }
  for (int c = 0; c < lay.nc; ++c) eta.concept_box.push_back(box(lay.concept_lower(c), lay.concept_upper(c)));
  for (int r = 0; r < lay.nr; ++r)
    eta.role_boxes.push_back({box(lay.role_lower(r, 0), lay.role_upper(r, 0)),
                              box(lay.role_lower(r, 1), lay.role_upper(r, 1)),
                              box(lay.role_lower(r, 2), lay.role_upper(r, 2))});
  return eta;
}

std::vector<double> pack(const VariableLayout& lay, const BoxInterpretation& eta) {
  const int d = lay.cfg.d;
  if (eta.config.d != d) throw DimensionMismatch("embedding has d = " + std::to_string(eta.config.d) +
                                                 ", layout expects " + std::to_string(d));
  if (eta.sig.num_individuals() != lay.ni || eta.sig.num_concepts() != lay.nc || eta.sig.num_roles() != lay.nr)
    throw UnknownSymbol("embedding signature does not match the layout");
  std::vector<double> z(lay.n);
  auto put = [&](int base, const std::vector<double>& v) { std::copy(v.begin(), v.end(), z.begin() + base); };
  for (int a = 0; a < lay.ni; ++a) {
    put(lay.pos(a), eta.pos[a]);
    put(lay.bump(a), eta.bump[a]);
  }
  for (int c = 0; c < lay.nc; ++c) {
    put(lay.concept_lower(c), eta.concept_box[c].lower);
    put(lay.concept_upper(c), eta.concept_box[c].upper);
  }
  for (int r = 0; r < lay.nr; ++r) {
    const Box* parts[] = {&eta.role_boxes[r].head, &eta.role_boxes[r].tail, &eta.role_boxes[r].bump};
    for (int k = 0; k < 3; ++k) {
      put(lay.role_lower(r, k), parts[k]->lower);
      put(lay.role_upper(r, k), parts[k]->upper);
    }
  }
  return z;
}

// ---- JSON ----

namespace {

json affine_json(const DimAffine& a) {
  json terms = json::array();
  for (auto [base, coef] : a.terms) terms.push_back({base, coef});
  return {{"terms", terms}, {"c", a.c}};
}

DimAffine affine_from(const json& j) {
  DimAffine a;
  for (const auto& t : j.at("terms")) a.terms.push_back({t.at(0).get<int>(), t.at(1).get<double>()});
  a.c = j.at("c").get<double>();
  return a;
}

json box_json(const BoxExpr& b) { return {{"lower", affine_json(b.lower)}, {"upper", affine_json(b.upper)}}; }
BoxExpr box_from(const json& j) { return {affine_from(j.at("lower")), affine_from(j.at("upper"))}; }

json loss_json(const Signature& sig, const LossTerm& t) {
  json parts = json::array();
  for (const auto& p : t.parts) parts.push_back({{"box", box_json(p.box)}, {"point", affine_json(p.point)}});
  return {{"axiom", to_string(sig, t.axiom)}, {"parts", parts}};
}

LossTerm loss_from(const Signature& sig, const json& j) {
  LossTerm t;
  t.axiom = parse_axiom(sig, j.at("axiom").get<std::string>());
  for (const auto& p : j.at("parts")) t.parts.push_back({box_from(p.at("box")), affine_from(p.at("point"))});
  return t;
}

json norm_json(const NormTerm& t) { return {{"label", t.label}, {"box", box_json(t.box)}}; }
NormTerm norm_from(const json& j) { return {j.at("label").get<std::string>(), box_from(j.at("box"))}; }

}  // namespace

std::string problem_to_json(const CompiledProblem& p) {
  const auto& lay = p.layout;
  json j;
  j["format"] = "boxlite-problem v1";
  j["config"] = {{"d", lay.cfg.d}, {"s_world", lay.cfg.s_world}, {"eps", lay.cfg.eps}};
  j["signature"] = {{"concepts", p.sig.concepts()}, {"roles", p.sig.roles()}, {"individuals", p.sig.individuals()}};
  json offsets = json::object();
  for (int a = 0; a < lay.ni; ++a) {
    offsets["pos(" + p.sig.individuals()[a] + ")"] = lay.pos(a);
    offsets["bump(" + p.sig.individuals()[a] + ")"] = lay.bump(a);
  }
  for (int c = 0; c < lay.nc; ++c) {
    offsets["L(" + p.sig.concepts()[c] + ")"] = lay.concept_lower(c);
    offsets["U(" + p.sig.concepts()[c] + ")"] = lay.concept_upper(c);
  }
  const char* parts[] = {"head", "tail", "bump"};
  for (int r = 0; r < lay.nr; ++r)
    for (int k = 0; k < 3; ++k) {
      offsets[std::string("L_") + parts[k] + "(" + p.sig.roles()[r] + ")"] = lay.role_lower(r, k);
      offsets[std::string("U_") + parts[k] + "(" + p.sig.roles()[r] + ")"] = lay.role_upper(r, k);
    }
  j["layout"] = {{"n", lay.n}, {"offsets", offsets}};
  j["concept_dims"] = p.concept_dim;
  j["tally"] = {{"consistency", p.tally.consistency}, {"width", p.tally.width}, {"universe", p.tally.universe},
                {"ci", p.tally.ci}, {"ri", p.tally.ri}};
  json cons = json::array();
  for (const auto& c : p.constraints) {
    json idx = json::array(), val = json::array();
    for (auto [i, v] : c.coeffs) {
      idx.push_back(i);
      val.push_back(v);
    }
    cons.push_back({{"idx", idx}, {"coef", val}, {"rhs", c.rhs}});
  }
  j["constraints"] = cons;
  const auto& o = p.objective;
  json obj = {{"l1", o.l1}, {"l2", o.l2}, {"l3", o.l3}};
  for (auto [key, list] : {std::pair{"assertion_terms", &o.assertion_terms}, {"negative_terms", &o.negative_terms}}) {
    json arr = json::array();
    for (const auto& t : *list) arr.push_back(loss_json(p.sig, t));
    obj[key] = arr;
  }
  for (auto [key, list] : {std::pair{"width_terms_cr", &o.width_terms_cr}, {"width_terms_bump", &o.width_terms_bump}}) {
    json arr = json::array();
    for (const auto& t : *list) arr.push_back(norm_json(t));
    obj[key] = arr;
  }
  j["objective"] = obj;
  return j.dump();
}

CompiledProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    if (j.at("format") != "boxlite-problem v1") throw FormatError("not a boxlite-problem v1 document");
    CompiledProblem p;
    WorldConfig cfg{j.at("config").at("d").get<int>(), j.at("config").at("s_world").get<double>(),
                    j.at("config").at("eps").get<double>()};
    const auto& s = j.at("signature");
    p.sig = Signature(s.at("concepts").get<std::vector<std::string>>(), s.at("roles").get<std::vector<std::string>>(),
                      s.at("individuals").get<std::vector<std::string>>());
    p.layout = build_layout(p.sig, cfg);
    if (p.layout.n != j.at("layout").at("n").get<int>()) throw FormatError("layout size does not match the signature");
    p.concept_dim = j.at("concept_dims").get<std::vector<int>>();
    const auto& t = j.at("tally");
    p.tally = {t.at("consistency").get<int>(), t.at("width").get<int>(), t.at("universe").get<int>(),
               t.at("ci").get<int>(), t.at("ri").get<int>()};
    for (const auto& c : j.at("constraints")) {
      LinearConstraint lc;
      const auto& idx = c.at("idx");
      const auto& val = c.at("coef");
      for (size_t k = 0; k < idx.size(); ++k) lc.coeffs.push_back({idx[k].get<int>(), val[k].get<double>()});
      lc.rhs = c.at("rhs").get<double>();
      p.constraints.push_back(std::move(lc));
    }
    const auto& o = j.at("objective");
    p.objective.l1 = o.at("l1").get<double>();
    p.objective.l2 = o.at("l2").get<double>();
    p.objective.l3 = o.at("l3").get<double>();
    for (const auto& x : o.at("assertion_terms")) p.objective.assertion_terms.push_back(loss_from(p.sig, x));
    for (const auto& x : o.at("negative_terms")) p.objective.negative_terms.push_back(loss_from(p.sig, x));
    for (const auto& x : o.at("width_terms_cr")) p.objective.width_terms_cr.push_back(norm_from(x));
    for (const auto& x : o.at("width_terms_bump")) p.objective.width_terms_bump.push_back(norm_from(x));
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("problem JSON: ") + e.what());
  }
}

}  // namespace boxlite
