#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "toollink/errors.hpp"
#include "toollink/linker.hpp"
#include "toollink/text.hpp"

using namespace toollink;

namespace {

std::string random_word(std::mt19937& rng, int max_len) {
  static const char alphabet[] = "abcdefgh";
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> pick(0, 7);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
  return s;
}

std::set<std::string> random_tools(std::mt19937& rng, int count) {
  std::set<std::string> tools;
  for (int i = 0; i < count; ++i) {
    std::string w = random_word(rng, 8);
    if (!w.empty()) tools.insert(w);
  }
  return tools;
}

KnowledgeBase kb_with(std::vector<std::pair<std::string, std::vector<std::string>>> specs,
                      std::string source = "bioconda") {
  std::vector<ToolEntry> entries;
  for (auto& [id, aliases] : specs) {
    ToolEntry e;
    e.entry_id = id;
    e.source = source;
    e.primary_name = aliases.front();
    for (auto& a : aliases) e.aliases.insert(normalize_name(a));
    entries.push_back(std::move(e));
  }
  return KnowledgeBase(std::move(source), std::move(entries));
}

}  // namespace

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("abc", "abc") == 0);
  // Derived from the full-matrix oracle.
  CHECK(oracles::levenshtein_dp("kitten", "sitting") == 3);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(oracles::levenshtein_dp("barrnap", "barnap") == 1);
  CHECK(levenshtein("barrnap", "barnap") == 1);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
}

TEST_CASE("levenshtein equals the oracle and satisfies metric axioms") {
  std::mt19937 rng(31337);
  for (int round = 0; round < 500; ++round) {
    std::string a = random_word(rng, 12);
    std::string b = random_word(rng, 12);
    std::string c = random_word(rng, 12);
    int ab = levenshtein(a, b);
    CAPTURE(a);
    CAPTURE(b);
    CHECK(ab == oracles::levenshtein_dp(a, b));
    CHECK(ab == levenshtein(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(ab <= levenshtein(a, c) + levenshtein(c, b));
  }
}

TEST_CASE("link_exact links names present on both sides") {
  LinkSet links = link_exact("wf", {"barrnap"}, {"barrnap"});
  REQUIRE(links.size() == 1);
  CHECK(links.records()[0].article_tool == "barrnap");
  CHECK(links.records()[0].code_tool == "barrnap");
  CHECK(links.records()[0].strategy == "exact");
}

TEST_CASE("link_exact finds nothing across different names") {
  CHECK(link_exact("wf", {"schmutzi"}, {"bgzip"}).size() == 0);
  CHECK(link_exact("wf", {}, {}).size() == 0);
}

TEST_CASE("link_levenshtein at zero equals link_exact") {
  std::mt19937 rng(7);
  for (int round = 0; round < 50; ++round) {
    auto a = random_tools(rng, 10);
    auto c = random_tools(rng, 10);
    CHECK(link_levenshtein("wf", a, c, 0).pairs() == link_exact("wf", a, c).pairs());
  }
}

TEST_CASE("link_levenshtein links within the threshold") {
  CHECK(link_levenshtein("wf", {"samtool"}, {"samtools"}, 1).size() == 1);
  CHECK(link_levenshtein("wf", {"cm"}, {"bwa"}, 1).size() == 0);
}

TEST_CASE("link_levenshtein pair sets grow with the threshold") {
  std::mt19937 rng(8);
  for (int round = 0; round < 30; ++round) {
    auto a = random_tools(rng, 8);
    auto c = random_tools(rng, 8);
    for (int n = 0; n < 3; ++n) {
      auto smaller = link_levenshtein("wf", a, c, n).pairs();
      auto larger = link_levenshtein("wf", a, c, n + 1).pairs();
      CHECK(std::includes(larger.begin(), larger.end(), smaller.begin(),
                          smaller.end()));
    }
  }
}

TEST_CASE("link_prefix_suffix follows the shorter-contained rule") {
  // rsem is a prefix of rsem-prepare-reference and long enough.
  CHECK(link_prefix_suffix("wf", {"rsem"}, {"rsem-prepare-reference"}, 3).size() == 1);
  // map is neither a prefix nor a suffix of circularmapper.
  CHECK(link_prefix_suffix("wf", {"map"}, {"circularmapper"}, 3).size() == 0);
  // mapper is a suffix of circularmapper.
  CHECK(link_prefix_suffix("wf", {"mapper"}, {"circularmapper"}, 3).size() == 1);
  // Identical strings are the degenerate prefix case.
  CHECK(link_prefix_suffix("wf", {"bwa"}, {"bwa"}, 3).size() == 1);
  // Below the overlap threshold nothing links.
  CHECK(link_prefix_suffix("wf", {"cm"}, {"cmtool"}, 3).size() == 0);
}

TEST_CASE("exact pairs are a subset of prefix_suffix pairs") {
  std::mt19937 rng(9);
  for (int round = 0; round < 30; ++round) {
    auto a = random_tools(rng, 8);
    auto c = random_tools(rng, 8);
    std::size_t shortest = SIZE_MAX;
    for (const auto& t : a) shortest = std::min(shortest, t.size());
    for (const auto& t : c) shortest = std::min(shortest, t.size());
    if (shortest == SIZE_MAX || shortest < 1) continue;
    auto exact = link_exact("wf", a, c).pairs();
    auto affix = link_prefix_suffix("wf", a, c, static_cast<int>(shortest)).pairs();
    CHECK(std::includes(affix.begin(), affix.end(), exact.begin(), exact.end()));
  }
}

TEST_CASE("link_kb_bridge pivots through a shared entry") {
  KnowledgeBase kb = kb_with({
      {"circularmapper", {"circularmapper", "circulargenerator", "realignsamfile"}},
  });
  LinkSet links = link_kb_bridge("wf", {"circularmapper"},
                                 {"circulargenerator", "realignsamfile"}, kb);
  auto pairs = links.pairs();
  REQUIRE(pairs.size() == 2);
  CHECK(pairs.count({"circularmapper", "circulargenerator"}) == 1);
  CHECK(pairs.count({"circularmapper", "realignsamfile"}) == 1);
  for (const LinkRecord& r : links.records()) {
    CHECK(r.pivot == "circularmapper");
    CHECK(r.strategy == "kb_bridge(bioconda)");
  }
}

TEST_CASE("link_kb_bridge handles underscored binary names") {
  KnowledgeBase kb = kb_with({
      {"metabat2", {"metabat2", "jgi_summarize_bam_contig_depths", "contigOverlaps"}},
  });
  CHECK(link_kb_bridge("wf", {"metabat2"}, {"jgi_summarize_bam_contig_depths"}, kb)
            .size() == 1);
}

TEST_CASE("link_kb_bridge yields nothing for unknown tools") {
  KnowledgeBase kb = kb_with({{"x", {"x"}}});
  CHECK(link_kb_bridge("wf", {"unknowntool"}, {"otherunknown"}, kb).size() == 0);
}

TEST_CASE("link_kb_bridge ignores entry and alias order") {
  std::vector<std::pair<std::string, std::vector<std::string>>> forward = {
      {"a", {"tool1", "alias1"}}, {"b", {"tool2", "alias1", "alias2"}}};
  auto reversed = forward;
  std::reverse(reversed.begin(), reversed.end());
  for (auto& [id, aliases] : reversed) std::reverse(aliases.begin(), aliases.end());

  KnowledgeBase kb1 = kb_with(forward, "s");
  KnowledgeBase kb2 = kb_with(reversed, "s");
  std::set<std::string> a = {"tool1", "alias2"};
  std::set<std::string> c = {"alias1", "tool2"};
  CHECK(link_kb_bridge("wf", a, c, kb1).pairs() ==
        link_kb_bridge("wf", a, c, kb2).pairs());
}

TEST_CASE("combine unions pair sets") {
  LinkSet exact = link_exact("wf", {"barrnap"}, {"barrnap"});
  KnowledgeBase kb = kb_with({{"cm", {"circularmapper", "circulargenerator"}}});
  LinkSet bridge = link_kb_bridge("wf", {"circularmapper"}, {"circulargenerator"}, kb);

  LinkSet merged = combine({exact, bridge});
  auto pairs = merged.pairs();
  CHECK(pairs.size() == 2);
  CHECK(pairs.count({"barrnap", "barrnap"}) == 1);
  CHECK(pairs.count({"circularmapper", "circulargenerator"}) == 1);
}

TEST_CASE("combine is idempotent and keeps identity") {
  LinkSet s = link_exact("wf", {"a", "b"}, {"a", "b"});
  LinkSet empty("wf");
  CHECK(combine({s, empty}).pairs() == s.pairs());
  CHECK(combine({s, s}).pairs() == s.pairs());
}

TEST_CASE("combine is associative and commutative on pair sets") {
  std::mt19937 rng(10);
  auto a = random_tools(rng, 6), c = random_tools(rng, 6);
  LinkSet s1 = link_exact("wf", a, c);
  LinkSet s2 = link_levenshtein("wf", a, c, 1);
  LinkSet s3 = link_prefix_suffix("wf", a, c, 2);
  CHECK(combine({combine({s1, s2}), s3}).pairs() ==
        combine({s1, combine({s2, s3})}).pairs());
  CHECK(combine({s1, s2}).pairs() == combine({s2, s1}).pairs());
}

TEST_CASE("combine merges strategy tags of duplicate pairs") {
  LinkSet s1 = link_exact("wf", {"bwa"}, {"bwa"});
  LinkSet s2 = link_levenshtein("wf", {"bwa"}, {"bwa"}, 1);
  LinkSet merged = combine({s1, s2});
  REQUIRE(merged.size() == 1);
  CHECK(merged.records()[0].strategy == "exact+levenshtein1");
}

TEST_CASE("combine rejects mismatched workflow ids") {
  LinkSet s1("wf1"), s2("wf2");
  s1.add({std::string("a"), std::nullopt, "unlinked", std::nullopt});
  s2.add({std::string("b"), std::nullopt, "unlinked", std::nullopt});
  CHECK_THROWS_AS(combine({s1, s2}), UsageError);
}

TEST_CASE("complete_unlinked emits explicit unlinked records") {
  std::set<std::string> article = {"schmutzi", "barrnap"};
  std::set<std::string> code = {"barrnap", "bgzip"};
  LinkSet links = link_exact("wf", article, code);
  LinkSet completed = complete_unlinked(links, article, code);

  auto pairs = completed.pairs();
  REQUIRE(pairs.size() == 3);
  CHECK(pairs.count({"schmutzi", "_"}) == 1);
  CHECK(pairs.count({"_", "bgzip"}) == 1);
  CHECK(pairs.count({"barrnap", "barrnap"}) == 1);
}

TEST_CASE("complete_unlinked leaves fully linked sets unchanged") {
  std::set<std::string> tools = {"a", "b"};
  LinkSet links = link_exact("wf", tools, tools);
  CHECK(complete_unlinked(links, tools, tools).pairs() == links.pairs());
}

TEST_CASE("after completion every tool is linked or unlinked, never both") {
  std::mt19937 rng(12);
  for (int round = 0; round < 50; ++round) {
    auto article = random_tools(rng, 8);
    auto code = random_tools(rng, 8);
    LinkSet links = link_levenshtein("wf", article, code, 1);
    LinkSet completed = complete_unlinked(links, article, code);

    std::set<std::string> linked_a, unlinked_a;
    for (const LinkRecord& r : completed.records()) {
      if (r.is_link())
        linked_a.insert(*r.article_tool);
      else if (r.article_tool)
        unlinked_a.insert(*r.article_tool);
    }
    for (const std::string& tool : article) {
      CHECK((linked_a.count(tool) + unlinked_a.count(tool)) >= 1);
      CHECK(!(linked_a.count(tool) && unlinked_a.count(tool)));
    }
  }
}

TEST_CASE("complete_unlinked is idempotent") {
  std::set<std::string> article = {"x", "y"};
  std::set<std::string> code = {"y", "z"};
  LinkSet once = complete_unlinked(link_exact("wf", article, code), article, code);
  LinkSet twice = complete_unlinked(once, article, code);
  CHECK(once.pairs() == twice.pairs());
}

TEST_CASE("linkset serializes to canonical two-column TSV") {
  std::set<std::string> article = {"schmutzi", "barrnap"};
  std::set<std::string> code = {"barrnap", "bgzip"};
  LinkSet completed =
      complete_unlinked(link_exact("wf", article, code), article, code);
  CHECK(linkset_to_tsv(completed) ==
        "_\tbgzip\n"
        "barrnap\tbarrnap\n"
        "schmutzi\t_\n");
  std::string with_tags = linkset_to_tsv(completed, /*with_strategy=*/true);
  CHECK(with_tags.find("barrnap\tbarrnap\texact\n") != std::string::npos);
  CHECK(with_tags.find("schmutzi\t_\tunlinked\n") != std::string::npos);
}

TEST_CASE("linkset TSV parsing normalizes and deduplicates") {
  std::string tsv = "Barrnap\tbarrnap\nbarrnap\tBARRNAP\nSchmutzi\t_\n";
  LinkSet links = linkset_from_tsv(tsv, "wf");
  CHECK(links.workflow_id() == "wf");
  auto pairs = links.pairs();
  CHECK(pairs.size() == 2);
  CHECK(pairs.count({"barrnap", "barrnap"}) == 1);
  CHECK(pairs.count({"schmutzi", "_"}) == 1);
}

TEST_CASE("linkset TSV parsing rejects bad rows") {
  CHECK_THROWS_AS(linkset_from_tsv("_\t_\n", "wf"), ParseError);
  CHECK_THROWS_AS(linkset_from_tsv("loner\n", "wf"), ParseError);
}

TEST_CASE("linkset round-trips through its TSV form") {
  std::mt19937 rng(13);
  for (int round = 0; round < 50; ++round) {
    auto article = random_tools(rng, 6);
    auto code = random_tools(rng, 6);
    LinkSet completed = complete_unlinked(
        link_levenshtein("wf", article, code, 1), article, code);
    std::string tsv = linkset_to_tsv(completed);
    LinkSet back = linkset_from_tsv(tsv, "wf");
    CHECK(back.pairs() == completed.pairs());
    CHECK(linkset_to_tsv(back) == tsv);
  }
}
