#include "boxlite/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "boxlite/errors.hpp"

namespace boxlite {

int project_polyhedron(std::vector<double>& z, const std::vector<LinearConstraint>& cons, int passes, double tol) {
  int done = 0;
  for (; done < passes; ++done) {
    if (feasibility_residual(cons, z) <= tol) break;
    for (const auto& c : cons) {
      double v = -c.rhs, nn = 0;
      for (auto [idx, coef] : c.coeffs) {
        v += coef * z[idx];
        nn += coef * coef;
      }
      if (v <= 0 || nn == 0) continue;
      const double step = v / nn;
      for (auto [idx, coef] : c.coeffs) z[idx] -= step * coef;
    }
  }
  return done;
}

namespace {

struct Scratch {
  std::vector<double> y;
};

// adds weight * d sdist(y(z)) / dz to g
void dist_grad(const DistTerm& t, const std::vector<double>& z, int d, double eps, double weight,
               std::vector<double>& g, Scratch& s) {
  s.y.assign(2 * d, 0.0);
  for (int i = 0; i < d; ++i) {
    double x = t.point.at(z, i);
    s.y[i] = t.box.lower.at(z, i) + eps - x;
    s.y[d + i] = x - t.box.upper.at(z, i) + eps;
  }
  double norm = 0;
  for (double v : s.y)
    if (v > 0) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<double>& w = s.y;
  if (norm > 0) {
    for (double& v : w) v = v > 0 ? v / norm : 0.0;
  } else {
    int arg = 0;
    for (int k = 1; k < 2 * d; ++k)
      if (w[k] > w[arg]) arg = k;
    std::fill(w.begin(), w.end(), 0.0);
    w[arg] = 1.0;
  }
  for (int i = 0; i < d; ++i) {
    const double lo = w[i] * weight, hi = w[d + i] * weight;
    if (lo == 0 && hi == 0) continue;
    for (auto [base, coef] : t.box.lower.terms) g[base + i] += lo * coef;
    for (auto [base, coef] : t.point.terms) g[base + i] += (hi - lo) * coef;
    for (auto [base, coef] : t.box.upper.terms) g[base + i] -= hi * coef;
  }
}

void max_grad(const std::vector<LossTerm>& ts, const std::vector<double>& z, int d, double eps, double weight,
              std::vector<double>& g, Scratch& s) {
  const DistTerm* arg = nullptr;
  double best = -INFINITY;
  for (const auto& t : ts)
    for (const auto& part : t.parts) {
      double v = evaluate_dist(part, z, d, eps);
      if (v > best) {
        best = v;
        arg = &part;
      }
    }
  if (arg) dist_grad(*arg, z, d, eps, weight, g, s);
}

void norm_grad(const NormTerm& t, const std::vector<double>& z, int d, double weight, std::vector<double>& g) {
  double n = evaluate_norm(t, z, d);
  if (n == 0) return;
  for (int i = 0; i < d; ++i) {
    double w = (t.box.upper.at(z, i) - t.box.lower.at(z, i)) / n * weight;
    for (auto [base, coef] : t.box.upper.terms) g[base + i] += w * coef;
    for (auto [base, coef] : t.box.lower.terms) g[base + i] -= w * coef;
  }
}

}  // namespace

std::vector<double> subgradient(const CompiledProblem& p, const std::vector<double>& z) {
  const int d = p.layout.cfg.d;
  const double eps = p.layout.cfg.eps;
  const auto& o = p.objective;
  std::vector<double> g(z.size(), 0.0);
  Scratch s;
  max_grad(o.assertion_terms, z, d, eps, 1.0, g, s);
  if (o.l1 != 0) max_grad(o.negative_terms, z, d, eps, o.l1, g, s);
  if (o.l2 != 0)
    for (const auto& t : o.width_terms_cr) norm_grad(t, z, d, o.l2, g);
  if (o.l3 != 0)
    for (const auto& t : o.width_terms_bump) norm_grad(t, z, d, o.l3, g);
  return g;
}

SolveResult solve(const CompiledProblem& p, const SolveOptions& opts) {
  const int n = p.layout.n;
  const double s = p.layout.cfg.s_world;
  std::vector<double> z;
  if (!opts.warm_start.empty()) {
    if (static_cast<int>(opts.warm_start.size()) != n)
      throw DimensionMismatch("warm start has " + std::to_string(opts.warm_start.size()) + " entries, problem has " +
                              std::to_string(n));
    z = opts.warm_start;
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(-s / 2, s / 2);
    z.resize(n);
    for (double& v : z) v = u(rng);
  }
  project_polyhedron(z, p.constraints, std::max(opts.projection_passes, 1) * 10, opts.tol_feas);
  double res = feasibility_residual(p.constraints, z);
  if (res > opts.tol_feas)
    throw InfeasibleDetected("projection stalled at residual " + std::to_string(res) + " before the first step");

  SolveResult out;
  std::vector<double> best = z;
  double fbest = evaluate_objective(p, z);
  const double c = opts.step_c > 0 ? opts.step_c : s / 10;
  int stall = 0;
  out.diag.stop_reason = "iteration limit";
  out.diag.iteration_limit = true;
  int k = 0;
  while (k < opts.max_iters) {
    if (opts.target_objective && fbest <= *opts.target_objective) {
      out.diag.stop_reason = "target reached";
      out.diag.iteration_limit = false;
      break;
    }
    std::vector<double> g = subgradient(p, z);
    double gn = 0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (gn == 0) {
      out.diag.stop_reason = "zero subgradient";
      out.diag.iteration_limit = false;
      break;
    }
    ++k;
    const double step = c / std::sqrt(static_cast<double>(k)) / gn;
    for (int i = 0; i < n; ++i) z[i] -= step * g[i];
    project_polyhedron(z, p.constraints, opts.projection_passes, opts.tol_feas * 0.1);
    if (feasibility_residual(p.constraints, z) <= opts.tol_feas) {
      double f = evaluate_objective(p, z);
      if (f < fbest - opts.tol_obj) {
        stall = 0;
      } else {
        ++stall;
      }
      if (f < fbest) {
        fbest = f;
        best = z;
      }
    } else {
      ++stall;
    }
    out.diag.trace.push_back(fbest);
    if (opts.stall_patience > 0 && stall >= opts.stall_patience) {
      out.diag.stop_reason = "stalled";
      out.diag.iteration_limit = false;
      break;
    }
  }
  if (k == opts.max_iters && opts.target_objective && fbest <= *opts.target_objective) {
    out.diag.stop_reason = "target reached";
    out.diag.iteration_limit = false;
  }
  if (opts.polish) {
    std::vector<double> pz = best;
    project_polyhedron(pz, p.constraints, std::max(opts.projection_passes, 1) * 10, 1e-12);
    if (feasibility_residual(p.constraints, pz) <= feasibility_residual(p.constraints, best)) best = std::move(pz);
  }
  out.diag.iterations = k;
  out.diag.residual = feasibility_residual(p.constraints, best);
  out.diag.objective = evaluate_objective(p, best);
  out.z = std::move(best);
  return out;
}

// ---- SOCP ----

namespace {

std::vector<AffineRow> expand(const DimAffine& a, int d) {
  std::vector<AffineRow> rows(d);
  for (int i = 0; i < d; ++i) {
    rows[i].c = a.c;
    for (auto [base, coef] : a.terms) rows[i].coeffs.push_back({base + i, coef});
  }
  return rows;
}

AffineRow combine(const AffineRow& x, double kx, const AffineRow& y, double ky) {
  AffineRow out;
  out.c = kx * x.c + ky * y.c;
  for (auto [i, v] : x.coeffs) out.coeffs.push_back({i, kx * v});
  for (auto [i, v] : y.coeffs) out.coeffs.push_back({i, ky * v});
  std::sort(out.coeffs.begin(), out.coeffs.end());
  std::vector<std::pair<int, double>> merged;
  for (auto [i, v] : out.coeffs) {
    if (!merged.empty() && merged.back().first == i)
      merged.back().second += v;
    else
      merged.push_back({i, v});
  }
  out.coeffs.clear();
  for (auto [i, v] : merged)
    if (v != 0.0) out.coeffs.push_back({i, v});
  return out;
}

AffineRow single(int idx, double coef = 1.0) { return {{{idx, coef}}, 0.0}; }

// expr <= 0
LinearConstraint leq_zero(const AffineRow& r) { return {r.coeffs, -r.c}; }

double eval_row(const AffineRow& r, const std::vector<double>& x) {
  double v = r.c;
  for (auto [i, c] : r.coeffs) v += c * x[i];
  return v;
}

std::vector<AffineRow> sdist_argument(const DistTerm& t, int d, double eps) {
  auto lo = expand(t.box.lower, d), hi = expand(t.box.upper, d), x = expand(t.point, d);
  std::vector<AffineRow> y;
  for (int i = 0; i < d; ++i) {
    AffineRow r = combine(lo[i], 1.0, x[i], -1.0);
    r.c += eps;
    y.push_back(r);
  }
  for (int i = 0; i < d; ++i) {
    AffineRow r = combine(x[i], 1.0, hi[i], -1.0);
    r.c += eps;
    y.push_back(r);
  }
  return y;
}

}  // namespace

SocpProgram export_socp(const CompiledProblem& p) {
  SocpProgram s;
  const int d = p.layout.cfg.d;
  const double eps = p.layout.cfg.eps;
  const auto& o = p.objective;
  s.num_z = p.layout.n;
  s.num_vars = s.num_z;
  s.linear = p.constraints;
  auto fresh = [&](int count) {
    int at = s.num_vars;
    s.num_vars += count;
    return at;
  };

  auto add_sdist_group = [&](const DistTerm& t, int epi) {
    SdistGroup g;
    g.epigraph = epi;
    g.y = sdist_argument(t, d, eps);
    const int m = static_cast<int>(g.y.size());
    g.w = fresh(m);
    g.t1 = fresh(1);
    g.t2 = fresh(1);
    // t1 + t2 - t <= 0
    s.linear.push_back({{{g.t1, 1.0}, {g.t2, 1.0}, {epi, -1.0}}, 0.0});
    ConeBlock cone;
    cone.rows.push_back(single(g.t1));
    for (int k = 0; k < m; ++k) cone.rows.push_back(single(g.w + k));
    s.cones.push_back(std::move(cone));
    for (int k = 0; k < m; ++k) {
      AffineRow yw = g.y[k];
      yw.coeffs.push_back({g.w + k, -1.0});
      AffineRow r1 = yw;
      r1.coeffs.push_back({g.t2, -1.0});
      s.linear.push_back(leq_zero(r1));
      s.linear.push_back(leq_zero(yw));
    }
    s.sdist_groups.push_back(std::move(g));
  };

  auto add_max_group = [&](const std::vector<LossTerm>& ts, double weight) {
    const int epi = fresh(1);
    s.objective.push_back({epi, weight});
    for (const auto& t : ts)
      for (const auto& part : t.parts) add_sdist_group(part, epi);
    return epi;
  };
  if (!o.assertion_terms.empty()) s.t_assert = add_max_group(o.assertion_terms, 1.0);
  if (o.l1 != 0 && !o.negative_terms.empty()) s.t_neg = add_max_group(o.negative_terms, o.l1);

  auto add_norms = [&](const std::vector<NormTerm>& ts, double weight) {
    if (weight == 0) return;
    for (const auto& t : ts) {
      NormGroup g;
      g.t = fresh(1);
      auto lo = expand(t.box.lower, d), hi = expand(t.box.upper, d);
      for (int i = 0; i < d; ++i) g.v.push_back(combine(hi[i], 1.0, lo[i], -1.0));
      ConeBlock cone;
      cone.rows.push_back(single(g.t));
      for (const auto& r : g.v) cone.rows.push_back(r);
      s.cones.push_back(std::move(cone));
      s.objective.push_back({g.t, weight});
      s.norm_groups.push_back(std::move(g));
    }
  };
  add_norms(o.width_terms_cr, o.l2);
  add_norms(o.width_terms_bump, o.l3);
  return s;
}

std::string socp_to_text(const SocpProgram& s) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto terms = [&](const std::vector<std::pair<int, double>>& cs) {
    std::string t;
    for (auto [i, v] : cs) t += " " + std::to_string(i) + ":" + num(v);
    return t;
  };
  out << "boxlite-socp v1\n";
  out << "VARS " << s.num_vars << "\n";
  out << "ZVARS " << s.num_z << "\n";
  out << "OBJ" << terms(s.objective) << "\n";
  out << "LIN " << s.linear.size() << "\n";
  for (const auto& c : s.linear) out << terms(c.coeffs) << " <= " << num(c.rhs) << "\n";
  out << "SOC " << s.cones.size() << "\n";
  for (const auto& cone : s.cones) {
    out << "dim " << cone.rows.size() << "\n";
    for (const auto& r : cone.rows) out << num(r.c) << terms(r.coeffs) << "\n";
  }
  return out.str();
}

std::vector<double> complete_auxiliaries(const SocpProgram& s, const std::vector<double>& z, double tol) {
  if (static_cast<int>(z.size()) != s.num_z)
    throw DimensionMismatch("vector has " + std::to_string(z.size()) + " entries, program has " +
                            std::to_string(s.num_z));
  double res = 0;
  for (size_t k = 0; k < s.linear.size(); ++k) {
    bool only_z = true;
    for (auto [i, v] : s.linear[k].coeffs) only_z = only_z && i < s.num_z;
    if (!only_z) continue;
    double v = -s.linear[k].rhs;
    for (auto [i, c] : s.linear[k].coeffs) v += c * z[i];
    res = std::max(res, v);
  }
  if (res > tol) throw InfeasiblePoint("residual " + std::to_string(res) + " exceeds tolerance " + std::to_string(tol));
  std::vector<double> x(s.num_vars, 0.0);
  std::copy(z.begin(), z.end(), x.begin());
  if (s.t_assert >= 0) x[s.t_assert] = -INFINITY;
  if (s.t_neg >= 0) x[s.t_neg] = -INFINITY;
  for (const auto& g : s.sdist_groups) {
    const int m = static_cast<int>(g.y.size());
    std::vector<double> y(m);
    bool exterior = false;
    for (int k = 0; k < m; ++k) {
      y[k] = eval_row(g.y[k], x);
      exterior = exterior || y[k] > 0;
    }
    double nn = 0, t2 = -INFINITY;
    for (int k = 0; k < m; ++k) {
      double w = exterior ? std::max(y[k], 0.0) : 0.0;
      x[g.w + k] = w;
      nn += w * w;
      t2 = std::max(t2, y[k] - w);
    }
    x[g.t1] = std::sqrt(nn);
    x[g.t2] = t2;
    x[g.epigraph] = std::max(x[g.epigraph], x[g.t1] + x[g.t2]);
  }
  for (const auto& g : s.norm_groups) {
    double nn = 0;
    for (const auto& r : g.v) {
      double v = eval_row(r, x);
      nn += v * v;
    }
    x[g.t] = std::sqrt(nn);
  }
  return x;
}

double socp_objective(const SocpProgram& s, const std::vector<double>& x) {
  double v = 0;
  for (auto [i, c] : s.objective) v += c * x[i];
  return v;
}

double socp_violation(const SocpProgram& s, const std::vector<double>& x) {
  double worst = feasibility_residual(s.linear, x);
  for (const auto& cone : s.cones) {
    double head = eval_row(cone.rows[0], x), nn = 0;
    for (size_t k = 1; k < cone.rows.size(); ++k) {
      double v = eval_row(cone.rows[k], x);
      nn += v * v;
    }
    worst = std::max(worst, std::sqrt(nn) - head);
  }
  return worst;
}

bool verify_socp_equivalence(const CompiledProblem& p, const SocpProgram& s, const std::vector<double>& z,
                             double tol) {
  std::vector<double> x = complete_auxiliaries(s, z, 1e-9);
  if (socp_violation(s, x) > tol) return false;
  const double f = evaluate_objective(p, z), g = socp_objective(s, x);
  return std::abs(f - g) <= tol * std::max(1.0, std::abs(f));
}

}  // namespace boxlite
