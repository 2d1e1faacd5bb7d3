#include "toollink/ner.hpp"

#include <algorithm>
#include <fstream>
#include <queue>

#include "toollink/brat.hpp"
#include "toollink/errors.hpp"
#include "toollink/text.hpp"

namespace toollink {

BoundaryMode boundary_mode_from_string(std::string_view s) {
  if (s == "token_boundary") return BoundaryMode::token_boundary;
  if (s == "substring") return BoundaryMode::substring;
  throw UsageError("unknown boundary mode '" + std::string(s) +
                   "' (expected token_boundary or substring)");
}

std::string to_string(BoundaryMode m) {
  return m == BoundaryMode::token_boundary ? "token_boundary" : "substring";
}

// Aho-Corasick over codepoints of the normalized aliases. The classic
// goto/fail construction; matching follows fail links, so scanning is
// O(text * fail-chain + matches), plenty for article sections and process
// bodies.
struct DictionaryMatcher::Automaton {
  struct Node {
    std::vector<std::pair<char32_t, std::int32_t>> children;  // sorted by cp
    std::int32_t fail = 0;
    std::int32_t dict_suffix = -1;  // nearest suffix node ending a pattern
    std::int32_t pattern = -1;      // pattern ending exactly here
  };

  std::vector<Node> nodes;
  std::vector<std::vector<char32_t>> patterns;  // normalized alias codepoints
  std::vector<std::string> pattern_keys;        // normalized alias strings

  std::int32_t child(std::int32_t node, char32_t cp) const {
    const auto& kids = nodes[node].children;
    auto it = std::lower_bound(
        kids.begin(), kids.end(), cp,
        [](const auto& pair, char32_t c) { return pair.first < c; });
    return (it != kids.end() && it->first == cp) ? it->second : -1;
  }

  std::int32_t ensure_child(std::int32_t node, char32_t cp) {
    std::int32_t existing = child(node, cp);
    if (existing >= 0) return existing;
    std::int32_t fresh = static_cast<std::int32_t>(nodes.size());
    auto& kids = nodes[node].children;
    kids.insert(std::upper_bound(kids.begin(), kids.end(), cp,
                                 [](char32_t c, const auto& pair) {
                                   return c < pair.first;
                                 }),
                {cp, fresh});
    nodes.emplace_back();
    return fresh;
  }

  void add_pattern(const std::string& key) {
    std::vector<char32_t> cps = utf8_decode(key);
    std::int32_t node = 0;
    for (char32_t cp : cps) node = ensure_child(node, cp);
    if (nodes[node].pattern >= 0) return;  // aliases are pre-deduplicated
    nodes[node].pattern = static_cast<std::int32_t>(patterns.size());
    patterns.push_back(std::move(cps));
    pattern_keys.push_back(key);
  }

  void build_links() {
    std::queue<std::int32_t> queue;
    for (auto& [cp, kid] : nodes[0].children) {
      nodes[kid].fail = 0;
      queue.push(kid);
    }
    while (!queue.empty()) {
      std::int32_t node = queue.front();
      queue.pop();
      nodes[node].dict_suffix = nodes[nodes[node].fail].pattern >= 0
                                    ? nodes[node].fail
                                    : nodes[nodes[node].fail].dict_suffix;
      for (auto& [cp, kid] : nodes[node].children) {
        std::int32_t f = nodes[node].fail;
        std::int32_t target = child(f, cp);
        while (f != 0 && target < 0) {
          f = nodes[f].fail;
          target = child(f, cp);
        }
        nodes[kid].fail = target >= 0 ? target : 0;
        queue.push(kid);
      }
    }
  }

  // All (end position, pattern) hits over a folded text.
  struct Hit {
    std::size_t end;  // exclusive, folded codepoints
    std::int32_t pattern;
  };

  std::vector<Hit> scan(const std::vector<char32_t>& folded) const {
    std::vector<Hit> hits;
    std::int32_t node = 0;
    for (std::size_t i = 0; i < folded.size(); ++i) {
      char32_t cp = folded[i];
      std::int32_t next = child(node, cp);
      while (node != 0 && next < 0) {
        node = nodes[node].fail;
        next = child(node, cp);
      }
      node = next >= 0 ? next : 0;
      for (std::int32_t n =
               nodes[node].pattern >= 0 ? node : nodes[node].dict_suffix;
           n >= 0; n = nodes[n].dict_suffix)
        hits.push_back({i + 1, nodes[n].pattern});
    }
    return hits;
  }
};

DictionaryMatcher::DictionaryMatcher(const KnowledgeBase& kb)
    : automaton_(std::make_unique<Automaton>()) {
  automaton_->nodes.emplace_back();
  for (const auto& [alias, ids] : kb.alias_index()) automaton_->add_pattern(alias);
  automaton_->build_links();
}

DictionaryMatcher::~DictionaryMatcher() = default;
DictionaryMatcher::DictionaryMatcher(DictionaryMatcher&&) noexcept = default;
DictionaryMatcher& DictionaryMatcher::operator=(DictionaryMatcher&&) noexcept =
    default;

namespace {

struct Candidate {
  std::size_t start;  // original codepoints
  std::size_t end;
  std::int32_t pattern;
};

}  // namespace

std::vector<Mention> DictionaryMatcher::match(const AnnotatedDocument& doc,
                                              const NerConfig& cfg) const {
  if (cfg.min_match_length < 1)
    throw UsageError("min_match_length must be >= 1");

  const std::vector<char32_t> original = utf8_decode(doc.text);
  const FoldedText folded = FoldedText::build(original);

  std::vector<Candidate> candidates;
  for (const auto& hit : automaton_->scan(folded.folded)) {
    const auto& pattern = automaton_->patterns[hit.pattern];
    if (static_cast<int>(pattern.size()) < cfg.min_match_length) continue;
    if (cfg.stoplist.count(automaton_->pattern_keys[hit.pattern])) continue;

    std::size_t fold_begin = hit.end - pattern.size();
    std::size_t fold_end = hit.end;
    std::size_t orig_begin = folded.spans[fold_begin].first;
    std::size_t orig_end = folded.spans[fold_end - 1].second;

    if (cfg.boundary_mode == BoundaryMode::token_boundary) {
      if (orig_begin > 0 && is_word_cp(original[orig_begin - 1])) continue;
      if (orig_end < original.size() && is_word_cp(original[orig_end])) continue;
    }
    candidates.push_back({orig_begin, orig_end, hit.pattern});
  }

  // Longest span first, leftmost on ties; greedy non-overlap selection.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              std::size_t la = a.end - a.start, lb = b.end - b.start;
              if (la != lb) return la > lb;
              return a.start < b.start;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Candidate& a, const Candidate& b) {
                                 return a.start == b.start && a.end == b.end;
                               }),
                   candidates.end());

  std::vector<Candidate> chosen;
  for (const Candidate& c : candidates) {
    bool overlaps = false;
    for (const Candidate& k : chosen)
      if (c.start < k.end && k.start < c.end) {
        overlaps = true;
        break;
      }
    if (!overlaps) chosen.push_back(c);
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.start, a.end) < std::tie(b.start, b.end);
            });

  const std::vector<std::size_t> offsets = codepoint_offsets(doc.text);
  std::vector<Mention> mentions;
  mentions.reserve(chosen.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    Mention m;
    m.mention_id = "T" + std::to_string(i + 1);
    m.label = "Tool";
    m.start = chosen[i].start;
    m.end = chosen[i].end;
    m.surface = doc.text.substr(offsets[m.start], offsets[m.end] - offsets[m.start]);
    m.doc_id = doc.doc_id;
    mentions.push_back(std::move(m));
  }
  return mentions;
}

std::vector<Mention> dictionary_ner(const AnnotatedDocument& doc,
                                    const KnowledgeBase& kb,
                                    const NerConfig& cfg) {
  return DictionaryMatcher(kb).match(doc, cfg);
}

std::map<std::string, std::vector<Mention>> import_predictions(
    const CorpusManifest& manifest, const std::filesystem::path& ann_dir) {
  std::vector<std::string> missing;
  for (const CorpusDoc& doc : manifest.docs)
    if (!std::filesystem::exists(ann_dir / (doc.doc_id + ".ann")))
      missing.push_back(doc.doc_id);
  if (!missing.empty()) {
    std::string msg = "missing prediction files in " + ann_dir.string() + ":";
    for (const std::string& id : missing) msg += " " + id;
    throw UsageError(msg);
  }

  std::map<std::string, std::vector<Mention>> result;
  for (const CorpusDoc& doc : manifest.docs) {
    std::string text = read_text_file(doc.txt_path);
    std::string ann = read_text_file(ann_dir / (doc.doc_id + ".ann"));
    AnnotatedDocument parsed = parse_brat(text, ann, doc.doc_id, doc.modality);
    result[doc.doc_id] = std::move(parsed.mentions);
  }
  return result;
}

std::set<std::string> load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stoplist: " + path.string());
  std::set<std::string> stoplist;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    stoplist.insert(normalize_name(line));
  }
  return stoplist;
}

}  // namespace toollink
