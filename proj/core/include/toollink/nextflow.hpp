#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toollink {

// One workflow process. body is the brace-delimited block including the
// braces; body_start is its codepoint offset within the file. script_stanza
// is recorded when the body carries an explicit script:/shell:/exec: label.
struct ProcessBlock {
  std::string process_name;
  std::string body;
  std::string source_path;
  std::size_t body_start = 0;
  std::optional<std::string> script_stanza;
};

// Finds top-level `process <name> { ... }` declarations (DSL1 and DSL2).
// Brace counting skips single-, double- and triple-quoted strings and
// comments. Throws ParseError when a process block is still open at end of
// file. Duplicate names are allowed; blocks come back in source order.
std::vector<ProcessBlock> extract_processes(std::string_view nextflow_source,
                                            std::string source_path);

}  // namespace toollink
