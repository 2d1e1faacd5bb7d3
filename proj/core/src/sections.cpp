#include "toollink/sections.hpp"

#include <algorithm>
#include <cctype>

#include "toollink/text.hpp"

namespace toollink {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// "2.", "2.1", "IV." style enumeration prefixes.
std::string_view strip_enumeration(std::string_view s) {
  std::size_t i = 0;
  auto is_enum_char = [](char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == 'I' || c == 'V' ||
           c == 'X' || c == 'i' || c == 'v' || c == 'x';
  };
  while (i < s.size() && is_enum_char(s[i])) ++i;
  // Only treat it as enumeration when it ends with '.' or is followed by space.
  if (i > 0 && i < s.size() && (s[i - 1] == '.' || s[i] == ' ')) {
    s.remove_prefix(i);
    return trim(s);
  }
  return s;
}

std::string canonical_heading(std::string_view line) {
  std::string_view t = strip_enumeration(trim(line));
  if (!t.empty() && (t.back() == ':' || t.back() == '.')) t.remove_suffix(1);
  return normalize_name(t);
}

bool is_allcaps_heading(std::string_view line) {
  std::string_view t = trim(line);
  if (t.empty() || t.size() > 64) return false;
  bool has_letter = false;
  for (char c : t) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::islower(u)) return false;
    if (std::isupper(u)) has_letter = true;
  }
  return has_letter;
}

bool matches_any(const std::string& canonical,
                 const std::vector<std::string>& headings) {
  return std::find(headings.begin(), headings.end(), canonical) !=
         headings.end();
}

}  // namespace

SectionConfig SectionConfig::defaults() {
  SectionConfig cfg;
  cfg.section_headings = {"materials and methods", "material and methods",
                          "methods", "implementation"};
  cfg.stop_headings = {"abstract",
                       "introduction",
                       "background",
                       "results",
                       "results and discussion",
                       "discussion",
                       "conclusion",
                       "conclusions",
                       "references",
                       "bibliography",
                       "acknowledgements",
                       "acknowledgments",
                       "availability",
                       "data availability",
                       "code availability",
                       "availability and requirements",
                       "supplementary information",
                       "supplementary material",
                       "abbreviations",
                       "funding",
                       "author contributions",
                       "authors contributions",
                       "competing interests",
                       "conflicts of interest",
                       "declarations",
                       "ethics approval"};
  return cfg;
}

std::optional<SectionSpan> extract_methods_section(std::string_view full_text,
                                                   const SectionConfig& config) {
  struct Line {
    std::size_t begin;  // byte offset of line start
    std::size_t end;    // byte offset past the line (after '\n' when present)
    std::string_view content;
  };
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < full_text.size()) {
    std::size_t eol = full_text.find('\n', pos);
    std::size_t end = eol == std::string_view::npos ? full_text.size() : eol + 1;
    std::size_t content_end = eol == std::string_view::npos ? full_text.size() : eol;
    lines.push_back({pos, end, full_text.substr(pos, content_end - pos)});
    pos = end;
  }

  auto is_heading = [&](std::string_view content) {
    std::string canonical = canonical_heading(content);
    if (canonical.empty()) return false;
    if (matches_any(canonical, config.section_headings)) return true;
    if (matches_any(canonical, config.stop_headings)) return true;
    return config.allcaps_stops && is_allcaps_heading(content);
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string canonical = canonical_heading(lines[i].content);
    if (!matches_any(canonical, config.section_headings)) continue;

    std::size_t body_begin = lines[i].end;
    std::size_t body_end = full_text.size();
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (is_heading(lines[j].content)) {
        body_end = lines[j].begin;
        break;
      }
    }
    SectionSpan span;
    span.offset = body_begin;
    span.text = std::string(full_text.substr(body_begin, body_end - body_begin));
    return span;
  }
  return std::nullopt;
}

}  // namespace toollink
