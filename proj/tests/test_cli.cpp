#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "toollink/corpus.hpp"

using namespace toollink;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = TOOLLINK_FIXTURES_DIR;
const std::string kCli = TOOLLINK_CLI_PATH;

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("toollink_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  return fs::exists(p) ? read_text_file(p) : std::string{};
}

CmdResult run_cli(const fs::path& dir, const std::string& args) {
  fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  std::string cmd = kCli + " " + args + " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

// Gold-mention replay over the fixture corpus with the given strategy;
// output lands in "out" relative to wherever the config file is written.
nlohmann::json gold_replay_config(const std::string& strategy) {
  nlohmann::json cfg;
  cfg["kb"] = nlohmann::json::array(
      {{{"source", "bioconda"}, {"path", (kFixtures / "kb" / "bioconda.jsonl").string()}}});
  cfg["ner"] = {{"mode", "import"}, {"predictions", (kFixtures / "corpus").string()}};
  cfg["link"] = strategy;
  cfg["corpus"] = (kFixtures / "corpus" / "manifest.tsv").string();
  cfg["gold"] = (kFixtures / "gold").string();
  cfg["output"] = "out";
  return cfg;
}

}  // namespace

TEST_CASE("kb build writes a manifest with the record count") {
  auto dir = fresh_dir("kbbuild");
  auto r = run_cli(dir, "kb build --snapshot bioconda=" +
                            (kFixtures / "kb" / "example3.jsonl").string() +
                            " --out " + (dir / "idx").string());
  CHECK(r.exit_code == 0);
  std::string manifest = slurp(dir / "idx" / "bioconda.manifest.json");
  CHECK(manifest.find("\"records\": 3") != std::string::npos);

  SUBCASE("rebuilding identical inputs is byte-identical") {
    std::string index1 = slurp(dir / "idx" / "bioconda.kb.jsonl");
    auto again = run_cli(dir, "kb build --snapshot bioconda=" +
                                  (kFixtures / "kb" / "example3.jsonl").string() +
                                  " --out " + (dir / "idx2").string());
    CHECK(again.exit_code == 0);
    CHECK(slurp(dir / "idx2" / "bioconda.kb.jsonl") == index1);
    CHECK(slurp(dir / "idx2" / "bioconda.manifest.json") == manifest);
  }
  fs::remove_all(dir);
}

TEST_CASE("kb build names the corrupt line") {
  auto dir = fresh_dir("kbcorrupt");
  std::string snapshot;
  for (int i = 1; i <= 6; ++i)
    snapshot += "{\"id\":\"t" + std::to_string(i) + "\",\"name\":\"t" +
                std::to_string(i) + "\",\"aliases\":[\"t" + std::to_string(i) +
                "\"]}\n";
  snapshot += "{broken\n";
  write_text_file(dir / "bad.jsonl", snapshot);
  auto r = run_cli(dir, "kb build --snapshot x=" + (dir / "bad.jsonl").string() +
                            " --out " + (dir / "idx").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("line 7") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("extract produces one document per process plus the section") {
  auto dir = fresh_dir("extract");
  auto r = run_cli(dir, "extract --inputs " + (kFixtures / "raw" / "inputs.tsv").string() +
                            " --out " + (dir / "corpus").string());
  CHECK(r.exit_code == 0);
  CorpusManifest manifest = load_corpus_manifest(dir / "corpus" / "manifest.tsv");
  REQUIRE(manifest.docs.size() == 4);
  int articles = 0, code = 0;
  for (const auto& doc : manifest.docs)
    (doc.modality == Modality::article ? articles : code) += 1;
  CHECK(articles == 1);
  CHECK(code == 3);
  // The extracted section text carries the tool mentions.
  std::string section = slurp(manifest.docs[0].txt_path);
  CHECK(section.find("CircularMapper") != std::string::npos);
  CHECK(section.find("Introduction") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("extract records skipped articles and keeps going") {
  auto dir = fresh_dir("extractskip");
  write_text_file(dir / "inputs.tsv",
                  "article\twfX\t" + (kFixtures / "raw" / "no_heading.txt").string() +
                      "\ncode\twfX\t" + (kFixtures / "raw" / "wf1.nf").string() + "\n");
  auto r = run_cli(dir, "extract --inputs " + (dir / "inputs.tsv").string() +
                            " --out " + (dir / "corpus").string());
  CHECK(r.exit_code == 0);  // a skip is a warning, not a failure
  CHECK(r.err.find("no methods-type heading") != std::string::npos);
  std::string manifest = slurp(dir / "corpus" / "manifest.tsv");
  CHECK(manifest.find("# skipped\twfX") != std::string::npos);
  CHECK(load_corpus_manifest(dir / "corpus" / "manifest.tsv").docs.size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("extract of an empty manifest succeeds with an empty corpus") {
  auto dir = fresh_dir("extractempty");
  write_text_file(dir / "inputs.tsv", "");
  auto r = run_cli(dir, "extract --inputs " + (dir / "inputs.tsv").string() +
                            " --out " + (dir / "corpus").string());
  CHECK(r.exit_code == 0);
  CHECK(load_corpus_manifest(dir / "corpus" / "manifest.tsv").docs.empty());
  fs::remove_all(dir);
}

TEST_CASE("eval ner scores an identity import perfectly") {
  auto dir = fresh_dir("evalner");
  auto r = run_cli(dir, "eval ner --corpus " +
                            (kFixtures / "corpus" / "manifest.tsv").string() +
                            " --pred " + (kFixtures / "corpus").string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("1.0000  1.0000  1.0000") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run replays gold mentions with exact linking at the fixture score") {
  auto dir = fresh_dir("runexact");
  write_text_file(dir / "run.json", gold_replay_config("exact").dump(2));
  auto r = run_cli(dir, "run --config " + (dir / "run.json").string());
  CHECK(r.exit_code == 0);
  // 1 exact link + 2 correct unlinked records over 10 predicted / 9 gold.
  CHECK(r.out.find("     3      7      6") != std::string::npos);

  SUBCASE("a second run is byte-identical") {
    std::string report = slurp(dir / "out" / "report.jsonl");
    std::string links = slurp(dir / "out" / "links" / "wf1.tsv");
    auto again = run_cli(dir, "run --config " + (dir / "run.json").string());
    CHECK(again.exit_code == 0);
    CHECK(slurp(dir / "out" / "report.jsonl") == report);
    CHECK(slurp(dir / "out" / "links" / "wf1.tsv") == links);
  }
  fs::remove_all(dir);
}

TEST_CASE("run rejects an invalid config before doing any work") {
  auto dir = fresh_dir("runbad");
  write_text_file(dir / "run.json", gold_replay_config("warp(9)").dump(2));
  auto r = run_cli(dir, "run --config " + (dir / "run.json").string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("warp") != std::string::npos);
  CHECK(!fs::exists(dir / "out"));
  fs::remove_all(dir);
}

TEST_CASE("link replays manifest annotations directly") {
  auto dir = fresh_dir("linkgold");
  auto link = run_cli(dir, "link --corpus " +
                               (kFixtures / "corpus" / "manifest.tsv").string() +
                               " --strategy exact --out " + (dir / "links").string());
  REQUIRE(link.exit_code == 0);
  auto eval = run_cli(dir, "eval links --gold " + (kFixtures / "gold").string() +
                               " --pred " + (dir / "links").string() + " --macro");
  REQUIRE(eval.exit_code == 0);
  CHECK(eval.out.find("     3      7      6") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("the full command chain reproduces the gold links") {
  auto dir = fresh_dir("chain");
  std::string kb_args =
      " --kb bioconda=" + (kFixtures / "kb" / "bioconda.jsonl").string() +
      " --kb bioweb=" + (kFixtures / "kb" / "bioweb.jsonl").string();

  auto extract = run_cli(dir, "extract --inputs " +
                                  (kFixtures / "raw" / "inputs.tsv").string() +
                                  " --out " + (dir / "corpus").string());
  REQUIRE(extract.exit_code == 0);

  auto ner = run_cli(dir, "ner --corpus " + (dir / "corpus" / "manifest.tsv").string() +
                              kb_args + " --out " + (dir / "anns").string());
  REQUIRE(ner.exit_code == 0);

  auto link = run_cli(dir, "link --corpus " + (dir / "anns" / "manifest.tsv").string() +
                               " --strategy \"kb_bridge(bioconda,bioweb)\"" + kb_args +
                               " --out " + (dir / "links").string());
  REQUIRE(link.exit_code == 0);

  auto eval = run_cli(dir, "eval links --gold " + (kFixtures / "gold").string() +
                               " --pred " + (dir / "links").string() + " --out " +
                               (dir / "report.jsonl").string());
  REQUIRE(eval.exit_code == 0);
  // Dictionary NER misses schmutzi/bgzip and adds a spurious krona pair.
  CHECK(eval.out.find("     7      1      2") != std::string::npos);
  fs::remove_all(dir);
}
