#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace toollink {

// UTF-8 decoding. Invalid byte sequences decode to U+FFFD, one byte at a time,
// so decoding never fails and offsets stay monotone.
std::vector<char32_t> utf8_decode(std::string_view s);
void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(const std::vector<char32_t>& cps);

bool is_space_cp(char32_t cp);
// Letter or digit. Letter coverage is ASCII plus Latin-1 and Latin Extended-A;
// underscore and punctuation are boundaries.
bool is_word_cp(char32_t cp);
// Lowercase fold for ASCII, Latin-1 and Latin Extended-A. Other codepoints
// pass through unchanged.
char32_t fold_cp(char32_t cp);
// Canonical composition of base + combining mark pairs for the precomposed
// Latin-1 repertoire (plus a few Extended-A letters). Pairs with no
// precomposed form are left as-is.
std::vector<char32_t> compose_cps(const std::vector<char32_t>& cps);

// Canonical form used for all name keys: compose, case-fold, trim, collapse
// internal whitespace runs to single spaces. Idempotent; empty in, empty out.
std::string normalize_name(std::string_view raw);

// Byte offset of each codepoint start, with one trailing sentinel equal to
// the byte length. Index i..j of codepoints maps to bytes offsets[i]..offsets[j].
std::vector<std::size_t> codepoint_offsets(std::string_view s);

// A case-folded, whitespace-collapsed view of a text, with a map back to the
// original codepoint positions. Used by the dictionary matcher so that alias
// occurrences can be located case-insensitively and across whitespace runs
// while mentions still carry offsets into the original text.
struct FoldedText {
  std::vector<char32_t> folded;
  // For each folded codepoint, the [start, end) range of original codepoints
  // it covers. A collapsed whitespace run covers the whole run; a composed
  // pair covers two original codepoints.
  std::vector<std::pair<std::size_t, std::size_t>> spans;

  static FoldedText build(const std::vector<char32_t>& original);
};

}  // namespace toollink
