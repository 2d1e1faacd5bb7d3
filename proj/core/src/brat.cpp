#include "toollink/brat.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "toollink/errors.hpp"
#include "toollink/text.hpp"

namespace toollink {

namespace {

std::string with_line(std::size_t line_no, const std::string& msg) {
  return "ann line " + std::to_string(line_no) + ": " + msg;
}

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string newlines_to_spaces(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

}  // namespace

AnnotatedDocument parse_brat(std::string_view text_content,
                             std::string_view ann_content, std::string doc_id,
                             Modality modality) {
  AnnotatedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.modality = modality;
  doc.text = std::string(text_content);

  const std::vector<std::size_t> offsets = codepoint_offsets(doc.text);
  const std::size_t text_len = offsets.size() - 1;

  std::set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= ann_content.size()) {
    std::size_t eol = ann_content.find('\n', pos);
    std::string_view line = ann_content.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? ann_content.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line[0] != 'T') continue;  // attributes, relations, events, notes

    std::size_t tab1 = line.find('\t');
    if (tab1 == std::string_view::npos)
      throw ParseError(with_line(line_no, "text-bound line has no tab"));
    std::size_t tab2 = line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos)
      throw ParseError(with_line(line_no, "text-bound line has no surface field"));

    std::string_view id = line.substr(0, tab1);
    std::string_view mid = line.substr(tab1 + 1, tab2 - tab1 - 1);
    std::string_view surface = line.substr(tab2 + 1);

    if (id.size() < 2 ||
        !std::all_of(id.begin() + 1, id.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      throw ParseError(with_line(line_no, "malformed annotation id '" +
                                              std::string(id) + "'"));

    if (mid.find(';') != std::string_view::npos)
      throw ParseError(with_line(
          line_no, "discontinuous spans are not supported (id " +
                       std::string(id) + ")"));

    std::size_t sp1 = mid.find(' ');
    std::size_t sp2 = mid.rfind(' ');
    if (sp1 == std::string_view::npos || sp2 == sp1)
      throw ParseError(with_line(line_no, "expected '<label> <start> <end>'"));

    Mention m;
    m.mention_id = std::string(id);
    m.label = std::string(mid.substr(0, sp1));
    m.doc_id = doc.doc_id;
    if (m.label.empty())
      throw ParseError(with_line(line_no, "empty label"));
    if (!parse_size(mid.substr(sp1 + 1, sp2 - sp1 - 1), m.start) ||
        !parse_size(mid.substr(sp2 + 1), m.end))
      throw ParseError(with_line(line_no, "non-numeric span offsets"));

    if (m.start >= m.end || m.end > text_len)
      throw ParseError(with_line(
          line_no, "span " + std::to_string(m.start) + ".." +
                       std::to_string(m.end) + " out of range (text length " +
                       std::to_string(text_len) + ")"));

    m.surface = doc.text.substr(offsets[m.start], offsets[m.end] - offsets[m.start]);
    if (newlines_to_spaces(m.surface) != surface)
      throw IntegrityError("annotation " + m.mention_id + " in " + doc.doc_id +
                           ": surface \"" + std::string(surface) +
                           "\" does not match text \"" + m.surface + "\"");

    if (!seen_ids.insert(m.mention_id).second)
      throw ParseError(with_line(line_no, "duplicate annotation id " + m.mention_id));

    doc.mentions.push_back(std::move(m));
  }
  return doc;
}

std::string write_brat(const AnnotatedDocument& doc) {
  std::vector<const Mention*> sorted;
  sorted.reserve(doc.mentions.size());
  for (const Mention& m : doc.mentions) sorted.push_back(&m);
  std::sort(sorted.begin(), sorted.end(), [](const Mention* a, const Mention* b) {
    return std::tie(a->start, a->end, a->label) <
           std::tie(b->start, b->end, b->label);
  });

  std::string out;
  std::size_t n = 0;
  for (const Mention* m : sorted) {
    out += 'T';
    out += std::to_string(++n);
    out += '\t';
    out += m->label;
    out += ' ';
    out += std::to_string(m->start);
    out += ' ';
    out += std::to_string(m->end);
    out += '\t';
    out += newlines_to_spaces(m->surface);
    out += '\n';
  }
  return out;
}

}  // namespace toollink
