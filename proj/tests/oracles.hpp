#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive and shares no code with core/.
namespace oracles {

// Full-matrix edit distance (the library uses a rolling two-row variant).
int levenshtein_dp(const std::string& a, const std::string& b);

// Connected components by breadth-first search over an adjacency list.
// Returned partition is canonical: sets of node indexes, sorted by minimum.
std::vector<std::set<int>> components_bfs(
    int node_count, const std::vector<std::pair<int, int>>& edges);

// ASCII-only reference normalizer: trim, lowercase, collapse blanks.
std::string ascii_normalize(const std::string& raw);

struct OracleSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string alias;

  bool operator==(const OracleSpan&) const = default;
};

// Naive gazetteer matcher for ASCII texts: enumerate every alias occurrence
// by scanning each position (case-insensitive; a space in the alias consumes
// a whole whitespace run), filter, then keep the longest span with leftmost
// ties until no non-overlapping candidate remains.
std::vector<OracleSpan> dictionary_matches(const std::string& text,
                                           const std::set<std::string>& aliases,
                                           int min_match_length,
                                           const std::set<std::string>& stoplist,
                                           bool token_boundary);

}  // namespace oracles
