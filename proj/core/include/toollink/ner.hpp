#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "toollink/corpus.hpp"
#include "toollink/kb.hpp"

namespace toollink {

enum class BoundaryMode { token_boundary, substring };

BoundaryMode boundary_mode_from_string(std::string_view s);
std::string to_string(BoundaryMode m);

struct NerConfig {
  int min_match_length = 2;        // codepoints of the normalized alias
  std::set<std::string> stoplist;  // normalized names excluded from matching
  BoundaryMode boundary_mode = BoundaryMode::token_boundary;
};

// Multi-pattern matcher over the normalized aliases of one knowledge base.
// Build once, match many documents; matching is const and thread-safe.
//
// Candidates are found case-insensitively with whitespace runs collapsed;
// overlaps resolve to the longest original span, ties to the leftmost start.
// In token_boundary mode a match must not be flanked by a letter or digit.
class DictionaryMatcher {
 public:
  explicit DictionaryMatcher(const KnowledgeBase& kb);
  ~DictionaryMatcher();
  DictionaryMatcher(DictionaryMatcher&&) noexcept;
  DictionaryMatcher& operator=(DictionaryMatcher&&) noexcept;

  std::vector<Mention> match(const AnnotatedDocument& doc,
                             const NerConfig& cfg) const;

 private:
  struct Automaton;
  std::unique_ptr<Automaton> automaton_;
};

// Convenience wrapper: builds a matcher for one document. Prefer holding a
// DictionaryMatcher when processing a corpus.
std::vector<Mention> dictionary_ner(const AnnotatedDocument& doc,
                                    const KnowledgeBase& kb,
                                    const NerConfig& cfg);

// Reads one prediction .ann file per manifest document from ann_dir
// (<doc_id>.ann), validated against the manifest text. Missing files are
// reported together in one error.
std::map<std::string, std::vector<Mention>> import_predictions(
    const CorpusManifest& manifest, const std::filesystem::path& ann_dir);

std::set<std::string> load_stoplist(const std::filesystem::path& path);

}  // namespace toollink
