#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("boxlite_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

void put(const std::string& name, const std::string& text) { std::ofstream(path(name)) << text; }

std::string get(const std::string& name) {
  std::ifstream in(path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// exit code of `boxlite args`, stdout to out.txt and stderr to err.txt
int run(const std::string& args) {
  std::string cmd = std::string(BOXLITE_BIN) + " " + args + " >" + path("out.txt") + " 2>" + path("err.txt");
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const char* kTiny = "ci A exists(R)\nci exists(inv(R)) B\nci B not(A)\nca A a\nra R a b\n";

}  // namespace

TEST_CASE("reason") {
  put("fam.kb", "ri hasFather hasParent\nri hasParent relative\nra hasFather a b\n");
  CHECK(run("reason --kb " + path("fam.kb") + " --query 'ra relative a b'") == 0);
  CHECK(get("out.txt") == "entailed\n");
  CHECK(run("reason --kb " + path("fam.kb") + " --query 'ra relative b a'") == 0);
  CHECK(get("out.txt") == "not-entailed\n");
  CHECK(run("reason --kb " + path("fam.kb") + " --satisfiable") == 0);
  CHECK(get("out.txt") == "sat\n");
  CHECK(run("reason --kb " + path("fam.kb")) == 2);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("reason --kb " + path("missing.kb") + " --satisfiable") == 2);
  put("bad.kb", "ci A\n");
  CHECK(run("reason --kb " + path("bad.kb") + " --satisfiable") == 2);
  CHECK(get("err.txt").find("line 1") != std::string::npos);
  CHECK(run("no-such-command") == 2);
  CHECK(run("compile") == 2);
}

TEST_CASE("embed-analytic then check-faithfulness") {
  put("tiny.kb", kTiny);
  CHECK(run("embed-analytic --kb " + path("tiny.kb") + " --out " + path("tiny.emb")) == 0);
  CHECK(run("check-faithfulness --report json --kb " + path("tiny.kb") + " --embedding " + path("tiny.emb")) == 0);
  auto j = nlohmann::json::parse(get("out.txt"));
  CHECK(j["kb_model"] == true);
  CHECK(j["weakly_faithful"] == true);
  CHECK(run("check-faithfulness --report text --kb " + path("tiny.kb") + " --embedding " + path("tiny.emb")) == 0);
  CHECK(get("out.txt").rfind("kb_model 1\n", 0) == 0);
  // the same boxes against a KB with an extra assertion fail the audit
  put("more.kb", std::string(kTiny) + "ra R b b\n");
  CHECK(run("check-faithfulness --kb " + path("more.kb") + " --embedding " + path("tiny.emb")) == 1);
  CHECK(run("check-faithfulness --kb " + path("tiny.kb") + " --embedding " + path("tiny.kb")) == 2);
}

TEST_CASE("compile, solve, export-socp, eval") {
  put("tiny.kb", kTiny);
  CHECK(run("compile --kb " + path("tiny.kb") + " --d 8 --s-world 4 --eps 0.1 --out " + path("tiny.json")) == 0);
  auto p = nlohmann::json::parse(get("tiny.json"));
  CHECK(p.is_object());
  CHECK(run("solve --problem " + path("tiny.json") + " --target -1e-3 --max-iters 50000 --seed 3 --out " +
            path("solved.emb") + " --diag " + path("diag.json")) == 0);
  auto d = nlohmann::json::parse(get("diag.json"));
  CHECK(d["objective"].get<double>() <= -1e-3);
  CHECK(d["residual"].get<double>() <= 1e-6);
  CHECK(run("check-faithfulness --kb " + path("tiny.kb") + " --embedding " + path("solved.emb")) == 0);
  CHECK(run("export-socp --problem " + path("tiny.json") + " --out " + path("tiny.socp")) == 0);
  CHECK(get("tiny.socp").rfind("boxlite-socp v1\n", 0) == 0);
  put("test.assertions", "ra R a b\n");
  CHECK(run("eval --kb " + path("tiny.kb") + " --embedding " + path("solved.emb") + " --test " +
            path("test.assertions") + " --out " + path("report.csv")) == 0);
  CHECK(get("report.csv").rfind("assertion,direction,rank,score\n", 0) == 0);
  CHECK(run("eval --kb " + path("tiny.kb") + " --embedding " + path("solved.emb") + " --test " +
            path("test.assertions") + " --out " + path("report.json")) == 0);
  auto r = nlohmann::json::parse(get("report.json"));
  CHECK(r["mrr"].get<double>() > 0);
  CHECK(run("solve --kb " + path("tiny.kb") + " --d 8 --s-world 4 --eps 0.1 --warm-start analytic --out " +
            path("warm.emb")) == 0);
}

TEST_CASE("sample and sweep") {
  std::string facts;
  // two generations of a small family, enough edges for k = 12
  const char* lines[] = {"ra spouse f1 m1", "ra spouse m1 f1", "ra hasFather c1 f1", "ra hasMother c1 m1",
                         "ra hasFather c2 f1", "ra hasMother c2 m1", "ra hasSibling c1 c2", "ra hasSibling c2 c1",
                         "ra spouse c1 w1", "ra spouse w1 c1", "ra hasFather g1 c1", "ra hasMother g1 w1",
                         "ra hasFather g2 c1", "ra hasMother g2 w1", "ra hasChild f1 c1", "ra hasChild m1 c2"};
  for (const char* l : lines) facts += std::string(l) + "\n";
  put("abox.kb", facts);
  fs::create_directories(path("split"));
  CHECK(run("sample --abox " + path("abox.kb") + " --k 12 --pf 0.9 --bf 0.5 --seed 1 --out-dir " + path("split")) ==
        0);
  REQUIRE(fs::exists(path("split/train.kb")));
  REQUIRE(fs::exists(path("split/valid.assertions")));
  CHECK(run("sweep --kb " + path("split/train.kb") + " --valid " + path("split/valid.assertions") + " --test " +
            path("split/test.assertions") +
            " --d 24 --s-world 1 --eps 0.01 --l1-grid 0,0.1 --l2-grid 0 --l3-grid 0,0.01 --max-iters 300 --out " +
            path("sweep.json") + " --best-embedding " + path("best.emb")) == 0);
  auto j = nlohmann::json::parse(get("sweep.json"));
  CHECK(j["compiles"] == 1);
  CHECK(j["points"].size() == 4);
  CHECK(fs::exists(path("best.emb")));
}
