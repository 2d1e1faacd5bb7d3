#include "toollink/text.hpp"

#include <algorithm>
#include <array>

namespace toollink {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one codepoint at byte offset i. Returns the number of bytes
// consumed; invalid sequences yield U+FFFD and consume exactly one byte.
std::size_t decode_one(std::string_view s, std::size_t i, char32_t& cp) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  std::size_t len;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    cp = kReplacement;
    return 1;
  }
  if (i + len > s.size()) {
    cp = kReplacement;
    return 1;
  }
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      cp = kReplacement;
      return 1;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    cp = kReplacement;
    return 1;
  }
  return len;
}

// Precomposed Latin forms for base + combining mark, both cases. Covers the
// Latin-1 Supplement repertoire and the Extended-A letters that show up in
// European names. Marks: grave U+0300, acute U+0301, circumflex U+0302,
// tilde U+0303, macron U+0304, diaeresis U+0308, ring U+030A, caron U+030C,
// cedilla U+0327.
struct Composition {
  char32_t base;
  char32_t mark;
  char32_t composed;
};

constexpr Composition kCompositions[] = {
    {U'A', 0x0300, 0x00C0}, {U'A', 0x0301, 0x00C1}, {U'A', 0x0302, 0x00C2},
    {U'A', 0x0303, 0x00C3}, {U'A', 0x0308, 0x00C4}, {U'A', 0x030A, 0x00C5},
    {U'C', 0x0327, 0x00C7}, {U'E', 0x0300, 0x00C8}, {U'E', 0x0301, 0x00C9},
    {U'E', 0x0302, 0x00CA}, {U'E', 0x0308, 0x00CB}, {U'I', 0x0300, 0x00CC},
    {U'I', 0x0301, 0x00CD}, {U'I', 0x0302, 0x00CE}, {U'I', 0x0308, 0x00CF},
    {U'N', 0x0303, 0x00D1}, {U'O', 0x0300, 0x00D2}, {U'O', 0x0301, 0x00D3},
    {U'O', 0x0302, 0x00D4}, {U'O', 0x0303, 0x00D5}, {U'O', 0x0308, 0x00D6},
    {U'U', 0x0300, 0x00D9}, {U'U', 0x0301, 0x00DA}, {U'U', 0x0302, 0x00DB},
    {U'U', 0x0308, 0x00DC}, {U'Y', 0x0301, 0x00DD},
    {U'a', 0x0300, 0x00E0}, {U'a', 0x0301, 0x00E1}, {U'a', 0x0302, 0x00E2},
    {U'a', 0x0303, 0x00E3}, {U'a', 0x0308, 0x00E4}, {U'a', 0x030A, 0x00E5},
    {U'c', 0x0327, 0x00E7}, {U'e', 0x0300, 0x00E8}, {U'e', 0x0301, 0x00E9},
    {U'e', 0x0302, 0x00EA}, {U'e', 0x0308, 0x00EB}, {U'i', 0x0300, 0x00EC},
    {U'i', 0x0301, 0x00ED}, {U'i', 0x0302, 0x00EE}, {U'i', 0x0308, 0x00EF},
    {U'n', 0x0303, 0x00F1}, {U'o', 0x0300, 0x00F2}, {U'o', 0x0301, 0x00F3},
    {U'o', 0x0302, 0x00F4}, {U'o', 0x0303, 0x00F5}, {U'o', 0x0308, 0x00F6},
    {U'u', 0x0300, 0x00F9}, {U'u', 0x0301, 0x00FA}, {U'u', 0x0302, 0x00FB},
    {U'u', 0x0308, 0x00FC}, {U'y', 0x0301, 0x00FD}, {U'y', 0x0308, 0x00FF},
    {U'Y', 0x0308, 0x0178},
    {U'A', 0x0304, 0x0100}, {U'a', 0x0304, 0x0101}, {U'C', 0x0301, 0x0106},
    {U'c', 0x0301, 0x0107}, {U'C', 0x030C, 0x010C}, {U'c', 0x030C, 0x010D},
    {U'E', 0x0304, 0x0112}, {U'e', 0x0304, 0x0113}, {U'I', 0x0304, 0x012A},
    {U'i', 0x0304, 0x012B}, {U'N', 0x0301, 0x0143}, {U'n', 0x0301, 0x0144},
    {U'N', 0x030C, 0x0147}, {U'n', 0x030C, 0x0148}, {U'O', 0x0304, 0x014C},
    {U'o', 0x0304, 0x014D}, {U'S', 0x0301, 0x015A}, {U's', 0x0301, 0x015B},
    {U'S', 0x030C, 0x0160}, {U's', 0x030C, 0x0161}, {U'U', 0x0304, 0x016A},
    {U'u', 0x0304, 0x016B}, {U'U', 0x030A, 0x016E}, {U'u', 0x030A, 0x016F},
    {U'Z', 0x0301, 0x0179}, {U'z', 0x0301, 0x017A}, {U'Z', 0x030C, 0x017D},
    {U'z', 0x030C, 0x017E},
};

char32_t compose_pair(char32_t base, char32_t mark) {
  for (const auto& c : kCompositions)
    if (c.base == base && c.mark == mark) return c.composed;
  return 0;
}

}  // namespace

std::vector<char32_t> utf8_decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp;
    i += decode_one(s, i, cp);
    out.push_back(cp);
  }
  return out;
}

void utf8_append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string utf8_encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) utf8_append(out, cp);
  return out;
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\f':
    case U'\v':
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

char32_t fold_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  // Latin-1 Supplement uppercase, skipping multiplication sign U+00D7.
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp == 0x0178) return 0x00FF;  // Y with diaeresis
  if (cp == 0x0130) return U'i';    // dotted capital I
  // Latin Extended-A pairs alternate uppercase/lowercase.
  if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
  return cp;
}

bool is_word_cp(char32_t cp) {
  if ((cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') ||
      (cp >= U'A' && cp <= U'Z'))
    return true;
  if (cp >= 0x00C0 && cp <= 0x00FF && cp != 0x00D7 && cp != 0x00F7) return true;
  if (cp >= 0x0100 && cp <= 0x017F) return true;
  return false;
}

std::vector<char32_t> compose_cps(const std::vector<char32_t>& cps) {
  std::vector<char32_t> out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    if (!out.empty() && cp >= 0x0300 && cp <= 0x036F) {
      if (char32_t composed = compose_pair(out.back(), cp)) {
        out.back() = composed;
        continue;
      }
    }
    out.push_back(cp);
  }
  return out;
}

std::string normalize_name(std::string_view raw) {
  std::vector<char32_t> cps = compose_cps(utf8_decode(raw));
  std::vector<char32_t> out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    if (is_space_cp(cp)) {
      if (!out.empty() && out.back() != U' ') out.push_back(U' ');
    } else {
      out.push_back(fold_cp(cp));
    }
  }
  if (!out.empty() && out.back() == U' ') out.pop_back();
  return utf8_encode(out);
}

std::vector<std::size_t> codepoint_offsets(std::string_view s) {
  std::vector<std::size_t> offsets;
  offsets.reserve(s.size() + 1);
  std::size_t i = 0;
  while (i < s.size()) {
    offsets.push_back(i);
    char32_t cp;
    i += decode_one(s, i, cp);
  }
  offsets.push_back(s.size());
  return offsets;
}

FoldedText FoldedText::build(const std::vector<char32_t>& original) {
  FoldedText ft;
  ft.folded.reserve(original.size());
  ft.spans.reserve(original.size());
  std::size_t i = 0;
  const std::size_t n = original.size();
  while (i < n) {
    if (is_space_cp(original[i])) {
      std::size_t j = i;
      while (j < n && is_space_cp(original[j])) ++j;
      ft.folded.push_back(U' ');
      ft.spans.emplace_back(i, j);
      i = j;
      continue;
    }
    char32_t cp = original[i];
    std::size_t end = i + 1;
    if (end < n && original[end] >= 0x0300 && original[end] <= 0x036F) {
      if (char32_t composed = compose_pair(cp, original[end])) {
        cp = composed;
        ++end;
      }
    }
    ft.folded.push_back(fold_cp(cp));
    ft.spans.emplace_back(i, end);
    i = end;
  }
  return ft;
}

}  // namespace toollink
