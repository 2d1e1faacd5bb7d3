#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "toollink/brat.hpp"
#include "toollink/kb.hpp"
#include "toollink/linker.hpp"
#include "toollink/ner.hpp"
#include "toollink/text.hpp"

using namespace toollink;

namespace {

std::string synthetic_name(std::mt19937& rng, int min_len = 3, int max_len = 14) {
  static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789-_";
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> pick(0, sizeof(alphabet) - 2);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
  return s;
}

KnowledgeBase synthetic_kb(int entry_count, int aliases_per_entry) {
  std::mt19937 rng(42);
  std::vector<ToolEntry> entries;
  entries.reserve(entry_count);
  for (int i = 0; i < entry_count; ++i) {
    ToolEntry e;
    e.entry_id = "e" + std::to_string(i);
    e.source = "bench";
    e.primary_name = synthetic_name(rng);
    e.aliases.insert(normalize_name(e.primary_name));
    for (int k = 1; k < aliases_per_entry; ++k)
      e.aliases.insert(synthetic_name(rng));
    entries.push_back(std::move(e));
  }
  return KnowledgeBase("bench", std::move(entries));
}

std::string synthetic_text(const KnowledgeBase& kb, int words) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> plant(0, 9);
  std::uniform_int_distribution<std::size_t> entry(0, kb.size() - 1);
  std::string text;
  for (int i = 0; i < words; ++i) {
    if (plant(rng) == 0)
      text += *kb.entries()[entry(rng)].aliases.begin();
    else
      text += synthetic_name(rng);
    text += (i % 12 == 11) ? '\n' : ' ';
  }
  return text;
}

}  // namespace

static void BM_normalize_name(benchmark::State& state) {
  std::string raw = "  BAsic Rapid\tRibosomal   RNA Predictor ";
  for (auto _ : state) benchmark::DoNotOptimize(normalize_name(raw));
}
BENCHMARK(BM_normalize_name);

static void BM_levenshtein(benchmark::State& state) {
  std::string a = "circularmapper", b = "circulargenerator";
  for (auto _ : state) benchmark::DoNotOptimize(levenshtein(a, b));
}
BENCHMARK(BM_levenshtein);

static void BM_matcher_build(benchmark::State& state) {
  KnowledgeBase kb = synthetic_kb(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    DictionaryMatcher matcher(kb);
    benchmark::DoNotOptimize(&matcher);
  }
  state.SetItemsProcessed(state.iterations() * kb.size());
}
BENCHMARK(BM_matcher_build)->Arg(1000)->Arg(10000);

static void BM_dictionary_match(benchmark::State& state) {
  KnowledgeBase kb = synthetic_kb(static_cast<int>(state.range(0)), 3);
  DictionaryMatcher matcher(kb);
  AnnotatedDocument doc;
  doc.doc_id = "bench";
  doc.text = synthetic_text(kb, 2000);
  NerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(matcher.match(doc, cfg));
  state.SetBytesProcessed(state.iterations() * doc.text.size());
}
BENCHMARK(BM_dictionary_match)->Arg(1000)->Arg(10000);

static void BM_fuse(benchmark::State& state) {
  KnowledgeBase a = synthetic_kb(static_cast<int>(state.range(0)), 4);
  KnowledgeBase b = synthetic_kb(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(fuse({&a, &b}));
}
BENCHMARK(BM_fuse)->Arg(500)->Arg(5000);

static void BM_parse_brat(benchmark::State& state) {
  std::mt19937 rng(11);
  std::string text;
  for (int i = 0; i < 500; ++i) text += synthetic_name(rng) + " ";
  auto offsets = codepoint_offsets(text);
  AnnotatedDocument doc;
  doc.doc_id = "bench";
  doc.text = text;
  std::uniform_int_distribution<std::size_t> cp(0, offsets.size() - 2);
  for (int k = 0; k < 100; ++k) {
    std::size_t s = cp(rng), e = cp(rng);
    if (s == e) continue;
    Mention m;
    m.mention_id = "T" + std::to_string(k + 1);
    m.label = "Tool";
    m.start = std::min(s, e);
    m.end = std::max(s, e);
    m.surface = text.substr(offsets[m.start], offsets[m.end] - offsets[m.start]);
    m.doc_id = "bench";
    doc.mentions.push_back(std::move(m));
  }
  std::string ann = write_brat(doc);
  for (auto _ : state)
    benchmark::DoNotOptimize(parse_brat(text, ann, "bench", Modality::article));
  state.SetItemsProcessed(state.iterations() * doc.mentions.size());
}
BENCHMARK(BM_parse_brat);

static void BM_link_levenshtein(benchmark::State& state) {
  std::mt19937 rng(5);
  std::set<std::string> article, code;
  for (int i = 0; i < 120; ++i) {
    article.insert(synthetic_name(rng));
    code.insert(synthetic_name(rng));
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(link_levenshtein("wf", article, code, 1));
}
BENCHMARK(BM_link_levenshtein);

BENCHMARK_MAIN();
