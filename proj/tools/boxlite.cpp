#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "boxlite/analytic.hpp"
#include "boxlite/data.hpp"
#include "boxlite/errors.hpp"
#include "boxlite/eval.hpp"
#include "boxlite/pipeline.hpp"
#include "boxlite/problem.hpp"
#include "boxlite/reasoner.hpp"
#include "boxlite/solver.hpp"

using namespace boxlite;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

KnowledgeBase load_kb(const std::string& path) {
  try {
    return parse_kb(read_file(path));
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.line(), e.column(), path + ": " + e.what());
  }
}

// assertion lines in the DSL, resolved against sig
std::vector<Axiom> load_assertions(const std::string& path, const Signature& sig) {
  std::vector<Axiom> out;
  std::istringstream in(read_file(path));
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      out.push_back(parse_axiom(sig, line));
    } catch (const SyntaxError& e) {
      throw SyntaxError(no, e.column(), path + ": " + e.what());
    }
  }
  return out;
}

std::string assertions_text(const Signature& sig, const std::vector<Axiom>& xs) {
  std::string s;
  for (const auto& ax : xs) s += to_string(sig, ax) + "\n";
  return s;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("BOXLITE_SEED");
  return env ? std::strtoull(env, nullptr, 10) : 0;
}

struct WorldFlags {
  int d = 32;
  double s_world = 1.0;
  double eps = 1e-2;
  double l1 = 0, l2 = 0, l3 = 0;
  bool exclude_entailed = false;

  void add(CLI::App* app, bool weights = true) {
    app->add_option("--d", d, "embedding dimension");
    app->add_option("--s-world", s_world, "half-width of the world box");
    app->add_option("--eps", eps, "membership margin");
    if (weights) {
      app->add_option("--l1", l1, "weight of the negative-sample term");
      app->add_option("--l2", l2, "weight of the concept/head/tail widths");
      app->add_option("--l3", l3, "weight of the bump widths");
    }
    app->add_flag("--exclude-entailed", exclude_entailed, "drop entailed D(a) from the negatives");
  }
  CompileOptions options() const { return {{d, s_world, eps}, l1, l2, l3, exclude_entailed}; }
};

struct SolverFlags {
  SolveOptions o;
  bool have_seed = false;
  double target = 0;

  void add(CLI::App* app) {
    app->add_option("--max-iters", o.max_iters);
    app->add_option("--tol-feas", o.tol_feas);
    app->add_option("--tol-obj", o.tol_obj);
    app->add_option("--step", o.step_c, "step constant c in c/sqrt(k)");
    app->add_option("--projection-passes", o.projection_passes);
    app->add_option("--stall", o.stall_patience, "stop after this many non-improving iterations");
    app->add_option("--target", target, "stop once the objective reaches this value");
    app->add_option("--seed", o.seed)->each([this](const std::string&) { have_seed = true; });
  }
  SolveOptions finish(CLI::App* app) {
    if (!have_seed) o.seed = default_seed();
    if (app->count("--target")) o.target_objective = target;
    return o;
  }
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

std::string diag_json(const SolveDiagnostics& d, double compile_s, double solve_s) {
  nlohmann::json j = {{"iterations", d.iterations},      {"objective", d.objective},
                      {"residual", d.residual},          {"iteration_limit", d.iteration_limit},
                      {"stop_reason", d.stop_reason},    {"compile_seconds", format_seconds(compile_s)},
                      {"solve_seconds", format_seconds(solve_s)}};
  return j.dump(2) + "\n";
}

double since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boxlite: DL-Lite knowledge bases, box embeddings and their convex training problem"};
  app.set_config("--config", "", "key = value file mirroring the flags");
  app.require_subcommand(1);

  // compile
  auto* c_compile = app.add_subcommand("compile", "compile a KB into the constrained problem (JSON)");
  std::string kb_path, out_path, problem_path, emb_path;
  WorldFlags wf_compile;
  c_compile->add_option("--kb", kb_path)->required();
  c_compile->add_option("--out", out_path);
  wf_compile.add(c_compile);

  // solve
  auto* c_solve = app.add_subcommand("solve", "solve a compiled problem and write the embedding");
  WorldFlags wf_solve;
  SolverFlags sf_solve;
  std::string warm, diag_path;
  c_solve->add_option("--problem", problem_path);
  c_solve->add_option("--kb", kb_path, "compile this KB instead of reading --problem");
  c_solve->add_option("--warm-start", warm, "'analytic' (needs --kb) or an embedding dump");
  c_solve->add_option("--out", out_path);
  c_solve->add_option("--diag", diag_path, "write solver diagnostics JSON here");
  wf_solve.add(c_solve);
  sf_solve.add(c_solve);

  // export-socp
  auto* c_socp = app.add_subcommand("export-socp", "write the equivalent second-order cone program");
  c_socp->add_option("--problem", problem_path)->required();
  c_socp->add_option("--out", out_path);

  // embed-analytic
  auto* c_embed = app.add_subcommand("embed-analytic", "closed-form embedding of a KB's canonical model");
  std::string witness = "reduced";
  double embed_eps = 0.1;
  int pad = 0;
  c_embed->add_option("--kb", kb_path)->required();
  c_embed->add_option("--witness", witness)->check(CLI::IsMember({"full", "reduced"}));
  c_embed->add_option("--eps", embed_eps);
  c_embed->add_option("--pad", pad, "pad to this many dimensions");
  c_embed->add_option("--out", out_path);

  // check-faithfulness
  auto* c_check = app.add_subcommand("check-faithfulness", "audit an embedding against a KB");
  std::string report_kind = "text";
  double check_tol = 0.0;
  c_check->add_option("--kb", kb_path)->required();
  c_check->add_option("--embedding", emb_path)->required();
  c_check->add_option("--report", report_kind)->check(CLI::IsMember({"json", "text"}));
  c_check->add_option("--tol", check_tol);

  // reason
  auto* c_reason = app.add_subcommand("reason", "entailment, satisfiability and canonical models");
  std::string query;
  bool want_sat = false, want_canon = false, reduced = false;
  c_reason->add_option("--kb", kb_path)->required();
  c_reason->add_option("--query", query, "one axiom line");
  c_reason->add_flag("--satisfiable", want_sat);
  c_reason->add_flag("--canonical", want_canon);
  c_reason->add_flag("--reduced", reduced);

  // eval
  auto* c_eval = app.add_subcommand("eval", "filtered ranking of test assertions");
  std::string test_path, valid_path, filter = "train,valid,test", ks_text = "1,3,10";
  bool pessimistic = false;
  c_eval->add_option("--kb", kb_path, "training KB")->required();
  c_eval->add_option("--embedding", emb_path)->required();
  c_eval->add_option("--test", test_path)->required();
  c_eval->add_option("--valid", valid_path);
  c_eval->add_option("--filter", filter, "sets treated as known true");
  c_eval->add_option("--ks", ks_text);
  c_eval->add_flag("--pessimistic", pessimistic, "count ties against the target");
  c_eval->add_option("--out", out_path, "report.json or report.csv");

  // sample
  auto* c_sample = app.add_subcommand("sample", "forest-fire sample and train/valid/test split");
  std::string abox_path, tbox_path, out_dir;
  SampleConfig scfg;
  std::uint64_t split_seed = 0;
  bool have_seed = false;
  c_sample->add_option("--abox", abox_path)->required();
  c_sample->add_option("--tbox", tbox_path, "defaults to the family TBox");
  c_sample->add_option("--k", scfg.k)->required();
  c_sample->add_option("--pf", scfg.pf);
  c_sample->add_option("--bf", scfg.bf);
  c_sample->add_option("--seed", scfg.seed)->each([&](const std::string&) { have_seed = true; });
  c_sample->add_option("--split-seed", split_seed);
  c_sample->add_option("--out-dir", out_dir)->required();

  // sweep
  auto* c_sweep = app.add_subcommand("sweep", "compile once, solve and validate over a lambda grid");
  WorldFlags wf_sweep;
  SolverFlags sf_sweep;
  std::string g1 = "0", g2 = "0", g3 = "0", report_path, best_path;
  int jobs = 1;
  bool sweep_warm = false;
  c_sweep->add_option("--kb", kb_path, "training KB")->required();
  c_sweep->add_option("--valid", valid_path)->required();
  c_sweep->add_option("--test", test_path, "also ranked with the best point");
  c_sweep->add_option("--l1-grid", g1);
  c_sweep->add_option("--l2-grid", g2);
  c_sweep->add_option("--l3-grid", g3);
  c_sweep->add_option("--ks", ks_text);
  c_sweep->add_option("--jobs", jobs);
  c_sweep->add_flag("--analytic-warm-start", sweep_warm);
  c_sweep->add_option("--out", out_path, "sweep report JSON");
  c_sweep->add_option("--best-embedding", best_path);
  c_sweep->add_option("--test-report", report_path);
  wf_sweep.add(c_sweep, false);
  sf_sweep.add(c_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto ks_from = [&]() {
    std::vector<int> ks;
    for (double v : parse_list(ks_text)) ks.push_back(static_cast<int>(v));
    return ks;
  };

  try {
    if (*c_compile) {
      KnowledgeBase kb = load_kb(kb_path);
      auto t0 = std::chrono::steady_clock::now();
      CompiledProblem p = compile_problem(kb, wf_compile.options());
      std::cerr << "compiled n = " << p.layout.n << ", constraints = " << p.constraints.size() << " in "
                << format_seconds(since(t0)) << " s\n";
      write_file(out_path, problem_to_json(p) + "\n");
    } else if (*c_solve) {
      auto t0 = std::chrono::steady_clock::now();
      CompiledProblem p;
      KnowledgeBase kb;
      if (!kb_path.empty()) {
        kb = load_kb(kb_path);
        p = compile_problem(kb, wf_solve.options());
      } else if (!problem_path.empty()) {
        p = problem_from_json(read_file(problem_path));
      } else {
        std::cerr << "solve needs --problem or --kb\n";
        return 2;
      }
      const double compile_s = since(t0);
      SolveOptions o = sf_solve.finish(c_solve);
      if (warm == "analytic") {
        if (kb_path.empty()) {
          std::cerr << "--warm-start analytic needs --kb\n";
          return 2;
        }
        o.warm_start = analytic_start(kb, p.layout);
      } else if (!warm.empty()) {
        o.warm_start = pack(p.layout, align(parse_embedding(read_file(warm)), p.sig));
      }
      auto t1 = std::chrono::steady_clock::now();
      SolveResult r = solve(p, o);
      const double solve_s = since(t1);
      std::cerr << "objective " << r.diag.objective << ", residual " << r.diag.residual << ", " << r.diag.iterations
                << " iterations (" << r.diag.stop_reason << ")\n";
      if (!diag_path.empty()) write_file(diag_path, diag_json(r.diag, compile_s, solve_s));
      write_file(out_path, dump_embedding(extract_interpretation(p, r.z, std::max(o.tol_feas, r.diag.residual))));
    } else if (*c_socp) {
      CompiledProblem p = problem_from_json(read_file(problem_path));
      write_file(out_path, socp_to_text(export_socp(p)));
    } else if (*c_embed) {
      KnowledgeBase kb = load_kb(kb_path);
      EmbedDiagnostics diag;
      BoxInterpretation eta =
          faithful_embedding(kb, witness == "full" ? Witness::Full : Witness::Reduced, embed_eps, &diag);
      if (pad > 0) eta = pad_dimensions(eta, pad);
      std::cerr << "d = " << eta.config.d << ", collapsed role dimensions: " << diag.collapsed.size() << "\n";
      write_file(out_path, dump_embedding(eta));
    } else if (*c_check) {
      KnowledgeBase kb = load_kb(kb_path);
      BoxInterpretation eta = align(parse_embedding(read_file(emb_path)), kb.sig);
      AuditReport rep = audit_faithfulness(eta, kb, check_tol);
      if (report_kind == "json") {
        nlohmann::json j = {{"kb_model", rep.kb_model},
                            {"box_consistent", rep.box_consistent},
                            {"kb_entailed", rep.kb_entailed},
                            {"weakly_faithful", rep.weakly_faithful},
                            {"violations", rep.violations}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "kb_model " << rep.kb_model << "\nbox_consistent " << rep.box_consistent << "\nkb_entailed "
                  << rep.kb_entailed << "\nweakly_faithful " << rep.weakly_faithful << "\n";
        for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
      }
      return rep.all() ? 0 : 1;
    } else if (*c_reason) {
      KnowledgeBase kb = load_kb(kb_path);
      if (want_sat) std::cout << (is_satisfiable(kb) ? "sat" : "unsat") << "\n";
      if (!query.empty()) {
        Axiom ax = parse_axiom(kb.sig, query);
        if (!is_satisfiable(kb))
          std::cout << "unsat-kb\n";
        else
          std::cout << (entails(kb, ax) ? "entailed" : "not-entailed") << "\n";
      }
      if (want_canon) std::cout << dump_interpretation(canonical_model(kb, reduced ? Witness::Reduced : Witness::Full));
      if (!want_sat && query.empty() && !want_canon) {
        std::cerr << "reason needs --query, --satisfiable or --canonical\n";
        return 2;
      }
    } else if (*c_eval) {
      KnowledgeBase kb = load_kb(kb_path);
      BoxInterpretation eta = align(parse_embedding(read_file(emb_path)), kb.sig);
      std::vector<Axiom> test = load_assertions(test_path, kb.sig), valid;
      if (!valid_path.empty()) valid = load_assertions(valid_path, kb.sig);
      std::vector<std::vector<Axiom>> extra;
      KnowledgeBase train = kb;
      if (filter.find("train") == std::string::npos) train.abox.clear();
      if (filter.find("valid") != std::string::npos) extra.push_back(valid);
      if (filter.find("test") != std::string::npos) extra.push_back(test);
      std::set<Axiom> known = known_true_set(train, extra);
      EvalReport rep = compute_metrics(
          rank_filtered(eta, test, known, pessimistic ? TiePolicy::Pessimistic : TiePolicy::Optimistic), ks_from());
      const bool csv = out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".csv";
      write_file(out_path, csv ? report_to_csv(kb.sig, rep) : report_to_json(kb.sig, rep) + "\n");
      std::cerr << "MRR " << rep.mrr;
      for (auto [k, v] : rep.hits) std::cerr << ", H@" << k << " " << v;
      std::cerr << "\n";
    } else if (*c_sample) {
      KnowledgeBase abox = load_kb(abox_path);
      KnowledgeBase tbox = tbox_path.empty() ? family_tbox() : load_kb(tbox_path);
      if (!have_seed) scfg.seed = default_seed();
      DatasetBundle b = make_bundle(merge(tbox, abox), scfg, split_seed);
      const std::string dir = out_dir.empty() ? "." : out_dir;
      write_file(dir + "/train.kb", serialize_kb(b.train_kb));
      write_file(dir + "/valid.assertions", assertions_text(b.train_kb.sig, b.valid));
      write_file(dir + "/test.assertions", assertions_text(b.train_kb.sig, b.test));
      std::cerr << "train " << b.train_kb.abox.size() << ", valid " << b.valid.size() << ", test " << b.test.size()
                << ", individuals " << b.train_kb.sig.num_individuals() << "\n";
    } else if (*c_sweep) {
      KnowledgeBase kb = load_kb(kb_path);
      std::vector<Axiom> valid = load_assertions(valid_path, kb.sig), test;
      if (!test_path.empty()) test = load_assertions(test_path, kb.sig);
      RunConfig rc;
      rc.world = {wf_sweep.d, wf_sweep.s_world, wf_sweep.eps};
      rc.exclude_entailed_negatives = wf_sweep.exclude_entailed;
      rc.l1 = parse_list(g1);
      rc.l2 = parse_list(g2);
      rc.l3 = parse_list(g3);
      rc.solver = sf_sweep.finish(c_sweep);
      rc.analytic_warm_start = sweep_warm;
      rc.ks = ks_from();
      rc.jobs = jobs;
      std::set<Axiom> known = known_true_set(kb, {valid, test});
      SweepResult r = run_sweep(kb, valid, known, rc);
      std::cerr << "1 compile (" << format_seconds(r.compile_seconds) << " s), " << r.points.size() << " solves\n";
      for (const auto& pt : r.points)
        std::cerr << "  l = (" << pt.l1 << ", " << pt.l2 << ", " << pt.l3 << "): valid MRR " << pt.valid.mrr
                  << ", solve " << format_seconds(pt.solve_seconds) << " s\n";
      write_file(out_path, sweep_to_json(r) + "\n");
      const SweepPoint& best = r.points[r.best];
      if (!best_path.empty() || !test.empty()) {
        CompileOptions co{rc.world, best.l1, best.l2, best.l3, rc.exclude_entailed_negatives};
        CompiledProblem p = compile_problem(kb, co);
        BoxInterpretation eta = extract_interpretation(p, best.z, std::max(rc.solver.tol_feas, best.diag.residual));
        if (!best_path.empty()) write_file(best_path, dump_embedding(eta));
        if (!test.empty()) {
          EvalReport rep = compute_metrics(rank_filtered(eta, test, known), rc.ks);
          if (!report_path.empty()) write_file(report_path, report_to_json(kb.sig, rep) + "\n");
          std::cerr << "best point test MRR " << rep.mrr << "\n";
        }
      }
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownSymbol& e) {
    std::cerr << "unknown symbol: " << e.what() << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    std::cerr << "dimension mismatch: " << e.what() << "\n";
    return 2;
  } catch (const DisjointnessViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NamedFormViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
