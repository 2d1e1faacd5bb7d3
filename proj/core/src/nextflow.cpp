#include "toollink/nextflow.hpp"

#include <algorithm>

#include "toollink/errors.hpp"
#include "toollink/text.hpp"

namespace toollink {

namespace {

bool is_ident_start(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || c == U'_';
}

bool is_ident_char(char32_t c) {
  return is_ident_start(c) || (c >= U'0' && c <= U'9');
}

// Codepoint cursor that skips string literals and comments so that brace
// counting only sees structural braces.
class Scanner {
 public:
  explicit Scanner(const std::vector<char32_t>& cps) : cps_(cps) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= cps_.size(); }
  char32_t at(std::size_t i) const { return cps_[i]; }
  char32_t current() const { return cps_[pos_]; }

  bool looking_at(std::string_view ascii) const {
    for (std::size_t k = 0; k < ascii.size(); ++k)
      if (pos_ + k >= cps_.size() ||
          cps_[pos_ + k] != static_cast<char32_t>(ascii[k]))
        return false;
    return true;
  }

  // Advances one token: a string literal, a comment, or a single codepoint.
  // Returns the codepoint when it was structural, 0 otherwise.
  char32_t step() {
    if (looking_at("//")) {
      while (!done() && current() != U'\n') ++pos_;
      return 0;
    }
    if (looking_at("/*")) {
      pos_ += 2;
      while (!done() && !looking_at("*/")) ++pos_;
      if (!done()) pos_ += 2;
      return 0;
    }
    if (looking_at("\"\"\"") || looking_at("'''")) {
      const char32_t quote = current();
      pos_ += 3;
      while (!done()) {
        if (current() == U'\\' && pos_ + 1 < cps_.size()) {
          pos_ += 2;
          continue;
        }
        if (current() == quote && looking_at(quote == U'"' ? "\"\"\"" : "'''")) {
          pos_ += 3;
          return 0;
        }
        ++pos_;
      }
      return 0;
    }
    if (current() == U'"' || current() == U'\'') {
      const char32_t quote = current();
      ++pos_;
      while (!done()) {
        if (current() == U'\\' && pos_ + 1 < cps_.size()) {
          pos_ += 2;
          continue;
        }
        if (current() == quote) {
          ++pos_;
          return 0;
        }
        if (current() == U'\n') {
          // Plain quoted literals are single-line; an unterminated one must
          // not swallow the rest of the file.
          ++pos_;
          return 0;
        }
        ++pos_;
      }
      return 0;
    }
    char32_t c = current();
    ++pos_;
    return c;
  }

 private:
  const std::vector<char32_t>& cps_;
  std::size_t pos_ = 0;
};

// Word match for the `process` keyword: preceded by start-of-file or a
// non-identifier codepoint.
bool keyword_boundary_before(const std::vector<char32_t>& cps, std::size_t i) {
  return i == 0 || !is_ident_char(cps[i - 1]);
}

const std::string_view kScriptLabels[] = {"script:", "shell:", "exec:"};
const std::string_view kOtherLabels[] = {"input:",  "output:", "when:",
                                         "stub:",   "tag:",    "label:"};

bool at_label(const std::vector<char32_t>& cps, std::size_t i,
              std::string_view label) {
  if (!keyword_boundary_before(cps, i)) return false;
  for (std::size_t k = 0; k < label.size(); ++k)
    if (i + k >= cps.size() || cps[i + k] != static_cast<char32_t>(label[k]))
      return false;
  return true;
}

std::optional<std::string> find_script_stanza(const std::vector<char32_t>& cps,
                                              std::size_t body_begin,
                                              std::size_t body_end) {
  // Scan the block interior at depth 1 for an explicit script-like label.
  Scanner scan(cps);
  while (scan.pos() < body_begin) scan.step();

  int depth = 0;
  std::optional<std::size_t> stanza_begin;
  std::size_t stanza_end = body_end - 1;  // exclusive of the closing brace
  while (!scan.done() && scan.pos() < body_end) {
    std::size_t here = scan.pos();
    if (depth == 1 && !stanza_begin) {
      for (std::string_view label : kScriptLabels) {
        if (at_label(cps, here, label)) {
          stanza_begin = here + label.size();
          break;
        }
      }
    } else if (depth == 1 && stanza_begin && here >= *stanza_begin) {
      bool hit_next_label = false;
      for (std::string_view label : kOtherLabels) {
        if (at_label(cps, here, label)) {
          stanza_end = here;
          hit_next_label = true;
          break;
        }
      }
      if (hit_next_label) break;
    }
    char32_t c = scan.step();
    if (c == U'{') ++depth;
    if (c == U'}') --depth;
  }
  if (!stanza_begin || *stanza_begin >= stanza_end) return std::nullopt;
  std::vector<char32_t> slice(cps.begin() + *stanza_begin,
                              cps.begin() + stanza_end);
  return utf8_encode(slice);
}

}  // namespace

std::vector<ProcessBlock> extract_processes(std::string_view nextflow_source,
                                            std::string source_path) {
  const std::vector<char32_t> cps = utf8_decode(nextflow_source);
  std::vector<ProcessBlock> blocks;

  Scanner scan(cps);
  int depth = 0;
  while (!scan.done()) {
    std::size_t here = scan.pos();
    if (depth == 0 && scan.looking_at("process") &&
        keyword_boundary_before(cps, here)) {
      // Possible declaration: process <name> {
      std::size_t i = here + 7;
      if (i < cps.size() && !is_ident_char(cps[i])) {
        while (i < cps.size() && is_space_cp(cps[i])) ++i;
        std::size_t name_begin = i;
        while (i < cps.size() && is_ident_char(cps[i])) ++i;
        std::size_t name_end = i;
        while (i < cps.size() && is_space_cp(cps[i])) ++i;
        if (name_end > name_begin && i < cps.size() && cps[i] == U'{') {
          std::vector<char32_t> name_cps(cps.begin() + name_begin,
                                         cps.begin() + name_end);
          std::string name = utf8_encode(name_cps);
          std::size_t body_begin = i;

          // Fast-forward the scanner to the opening brace, then count.
          while (scan.pos() < body_begin) scan.step();
          int body_depth = 0;
          std::size_t body_end = 0;
          while (!scan.done()) {
            char32_t c = scan.step();
            if (c == U'{') ++body_depth;
            if (c == U'}') {
              --body_depth;
              if (body_depth == 0) {
                body_end = scan.pos();
                break;
              }
            }
          }
          if (body_depth != 0)
            throw ParseError(source_path + ": process '" + name +
                             "' has an unclosed block at end of file");

          ProcessBlock block;
          block.process_name = std::move(name);
          block.source_path = source_path;
          block.body_start = body_begin;
          std::vector<char32_t> body_cps(cps.begin() + body_begin,
                                         cps.begin() + body_end);
          block.body = utf8_encode(body_cps);
          block.script_stanza = find_script_stanza(cps, body_begin, body_end);
          blocks.push_back(std::move(block));
          continue;
        }
      }
    }
    char32_t c = scan.step();
    if (c == U'{') ++depth;
    if (c == U'}') --depth;
  }
  return blocks;
}

}  // namespace toollink
