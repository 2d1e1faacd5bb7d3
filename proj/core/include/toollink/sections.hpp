#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toollink {

// Heading inventory for rule-based section extraction. Lines are compared
// case-insensitively after trimming, stripping leading enumeration ("2.",
// "2.1", "IV.") and a trailing ':' or '.'. Any heading (section or stop)
// terminates a section; short all-caps lines also count as stop headings
// when allcaps_stops is set.
struct SectionConfig {
  std::vector<std::string> section_headings;
  std::vector<std::string> stop_headings;
  bool allcaps_stops = true;

  static SectionConfig defaults();
};

struct SectionSpan {
  std::string text;    // contiguous substring of the input
  std::size_t offset;  // byte offset of text within the input
};

// Returns the body between the first matching section heading line and the
// next heading line (or end of input), excluding both heading lines.
// std::nullopt when no heading matches.
std::optional<SectionSpan> extract_methods_section(
    std::string_view full_text,
    const SectionConfig& config = SectionConfig::defaults());

}  // namespace toollink
