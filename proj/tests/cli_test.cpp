// End-to-end tests that drive the installed CLI binary through a shell.
// The binary path arrives in REX_CLI_BIN (set by the test harness).
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "rex/generator.hpp"
#include "rex/serialize.hpp"
#include "support.hpp"

using namespace rex;
using namespace rex::test;

namespace {

struct CmdResult {
  int status = -1;
  std::string output;  // stdout and stderr combined
};

const std::string& cli_bin() {
  static std::string bin = [] {
    const char* env = std::getenv("REX_CLI_BIN");
    REQUIRE_MESSAGE(env != nullptr, "REX_CLI_BIN must point at the CLI binary");
    return std::string(env);
  }();
  return bin;
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + cli_bin() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, got);
  int rc = pclose(pipe);
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

const std::filesystem::path& work_dir() {
  static std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("rex_cli_test_" + std::to_string(getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  auto path = work_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.flush();
  REQUIRE(out.good());
  return path.string();
}

const std::string& tg1_path() {
  static std::string path = write_file("tg1.tsv", kTg1);
  return path;
}

}  // namespace

TEST_CASE("explain ranks the direct edge first under size") {
  CmdResult r = run_cli("explain --kb " + tg1_path() + " --start A --end B --measure size");
  CHECK(r.status == 0);
  CHECK(r.output.find("#1 score=(-2) size=2") != std::string::npos);
  CHECK(r.output.find("start -[spouse]- end") != std::string::npos);
  CHECK(r.output.find("instance: start=A end=B") != std::string::npos);
}

TEST_CASE("explain emits parseable structured output") {
  CmdResult r = run_cli("explain --kb " + tg1_path() +
                        " --start A --end B --measure size --format structured");
  REQUIRE(r.status == 0);
  json j = json::parse(r.output);
  CHECK(j["start"] == "A");
  CHECK(j["measure"] == "size");
  REQUIRE(j["items"].size() == 4);
  CHECK(j["items"][0]["score"] == std::vector<double>{-2.0});

  KnowledgeBase kb = make_kb(kTg1);
  Pattern direct = pattern_from_json(kb, j["items"][0]["pattern"]);
  CHECK(direct ==
        Pattern(2, {{kStartVar, kEndVar, kb.find_label("spouse").value(), false}}));
}

TEST_CASE("unknown entities fail with the offending name") {
  CmdResult r = run_cli("explain --kb " + tg1_path() + " --start nosuch --end B");
  CHECK(r.status == 1);
  CHECK(r.output.find("error:") != std::string::npos);
  CHECK(r.output.find("nosuch") != std::string::npos);
}

TEST_CASE("explicit pruning is refused for measures it cannot support") {
  CmdResult r = run_cli("explain --kb " + tg1_path() +
                        " --start A --end B --measure count --prune");
  CHECK(r.status == 1);
  CHECK(r.output.find("--prune is not supported") != std::string::npos);

  CmdResult ok = run_cli("explain --kb " + tg1_path() +
                         " --start A --end B --measure count --no-prune");
  CHECK(ok.status == 0);
  // default (no flag at all) silently falls back instead of failing
  CmdResult silent =
      run_cli("explain --kb " + tg1_path() + " --start A --end B --measure count");
  CHECK(silent.status == 0);
}

TEST_CASE("a disconnected pair reports no explanations and succeeds") {
  std::string path = write_file("split.tsv", "x\tr\ty\tU\np\tr\tq\tU\n");
  CmdResult r = run_cli("explain --kb " + path + " --start x --end p");
  CHECK(r.status == 0);
  CHECK(r.output.find("no explanations found") != std::string::npos);
}

TEST_CASE("enumerate verifies and lists every minimal explanation") {
  CmdResult r = run_cli("enumerate --kb " + tg1_path() + " --start A --end B --verify");
  CHECK(r.status == 0);
  CHECK(r.output.find("verified 4 explanations") != std::string::npos);
  CHECK(r.output.find("found 4 explanations") != std::string::npos);

  CmdResult s = run_cli("enumerate --kb " + tg1_path() +
                        " --start A --end B --format structured");
  REQUIRE(s.status == 0);
  json j = json::parse(s.output);
  CHECK(j["count"] == 4);
  CHECK(j["items"][0]["size"] == 2);
}

TEST_CASE("gen writes the library output byte for byte") {
  CmdResult r = run_cli("gen --nodes 60 --labels 4 --seed 9 --out -");
  REQUIRE(r.status == 0);
  GenSpec spec;
  spec.nodes = 60;
  spec.labels = 4;
  spec.seed = 9;
  CHECK(r.output == generate_kb_text(spec));
  CmdResult again = run_cli("gen --nodes 60 --labels 4 --seed 9 --out -");
  CHECK(again.output == r.output);

  std::string path = (work_dir() / "gen.tsv").string();
  CmdResult to_file = run_cli("gen --nodes 60 --labels 4 --seed 9 --out " + path);
  CHECK(to_file.status == 0);
  CHECK(load_kb(path).entity_count() == 60);
}

TEST_CASE("eval scores a label file") {
  std::string all2 = write_file("all2.txt", "2\n2\n2\n2\n2\n2\n2\n2\n2\n2\n");
  CmdResult r = run_cli("eval " + all2);
  CHECK(r.status == 0);
  CHECK(r.output == "100\n");
  std::string all0 = write_file("all0.txt", "0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n");
  CHECK(run_cli("eval " + all0).output == "0\n");
  std::string bad = write_file("bad.txt", "2\n2\n");
  CHECK(run_cli("eval " + bad).status == 1);
}

TEST_CASE("bench prints the csv header and consistent rows") {
  std::string path = (work_dir() / "bench.tsv").string();
  REQUIRE(run_cli("gen --nodes 120 --labels 4 --avg-degree 5 --seed 3 --out " + path).status ==
          0);
  CmdResult r = run_cli("bench --kb " + path +
                        " --pairs 1 --seed 5 --strategies naive+basic,prioritized+prune "
                        "--max-size 4 --budget-ms 30000");
  CHECK(r.status == 0);
  CHECK(r.output.find("pair,class,strategy,wall_ms,paths,merges,explanations,duplicates") !=
        std::string::npos);
  CHECK(r.output.find("naive+basic") != std::string::npos);
  CHECK(r.output.find("prioritized+prune") != std::string::npos);
}

TEST_CASE("the explanation cap from the environment is honored") {
  CmdResult r = run_cli("explain --kb " + tg1_path() + " --start A --end B",
                        "REX_MAX_EXPLANATIONS=1 ");
  CHECK(r.status == 1);
  CHECK(r.output.find("error:") != std::string::npos);

  CmdResult bad = run_cli("explain --kb " + tg1_path() + " --start A --end B",
                          "REX_MAX_EXPLANATIONS=abc ");
  CHECK(bad.status == 1);
  CHECK(bad.output.find("REX_MAX_EXPLANATIONS") != std::string::npos);

  CmdResult roomy = run_cli("explain --kb " + tg1_path() + " --start A --end B",
                            "REX_MAX_EXPLANATIONS=1000 ");
  CHECK(roomy.status == 0);
}
