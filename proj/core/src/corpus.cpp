#include "toollink/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "toollink/brat.hpp"
#include "toollink/errors.hpp"
#include "toollink/text.hpp"

namespace toollink {

std::string to_string(Modality m) {
  return m == Modality::article ? "article" : "code";
}

Modality modality_from_string(std::string_view s) {
  if (s == "article") return Modality::article;
  if (s == "code") return Modality::code;
  throw ParseError("unknown modality '" + std::string(s) + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path.string());
  out << content;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              std::string_view rel) {
  std::filesystem::path p{std::string(rel)};
  return p.is_absolute() ? p : base / p;
}

}  // namespace

CorpusManifest load_corpus_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus manifest: " + path.string());

  CorpusManifest manifest;
  manifest.base_dir = path.parent_path();

  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 5)
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": expected 5 tab-separated fields, got " +
                       std::to_string(fields.size()));
    CorpusDoc doc;
    doc.doc_id = std::string(fields[0]);
    doc.workflow_id = std::string(fields[1]);
    if (doc.doc_id.empty() || doc.workflow_id.empty())
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": empty doc or workflow id");
    if (!seen.insert(doc.doc_id).second)
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": duplicate doc id '" + doc.doc_id + "'");
    doc.modality = modality_from_string(fields[2]);
    doc.txt_path = resolve(manifest.base_dir, fields[3]);
    if (fields[4] != "-") doc.ann_path = resolve(manifest.base_dir, fields[4]);
    manifest.docs.push_back(std::move(doc));
  }
  return manifest;
}

void write_corpus_manifest(const CorpusManifest& manifest,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write corpus manifest: " + path.string());
  for (const CorpusDoc& doc : manifest.docs) {
    auto rel = [&](const std::filesystem::path& p) {
      if (p.empty()) return std::string("-");
      std::error_code ec;
      auto r = std::filesystem::relative(p, path.parent_path(), ec);
      return ec || r.empty() ? p.generic_string() : r.generic_string();
    };
    out << doc.doc_id << '\t' << doc.workflow_id << '\t'
        << to_string(doc.modality) << '\t' << rel(doc.txt_path) << '\t'
        << rel(doc.ann_path) << '\n';
  }
}

AnnotatedDocument load_document(const CorpusDoc& doc, bool with_mentions) {
  std::string text = read_text_file(doc.txt_path);
  std::string ann;
  if (with_mentions && !doc.ann_path.empty())
    ann = read_text_file(doc.ann_path);
  AnnotatedDocument parsed = parse_brat(text, ann, doc.doc_id, doc.modality);
  parsed.workflow_id = doc.workflow_id;
  return parsed;
}

std::set<std::string> unique_tool_names(const std::vector<AnnotatedDocument>& docs,
                                        Modality modality) {
  for (const AnnotatedDocument& doc : docs)
    if (doc.workflow_id != docs.front().workflow_id)
      throw UsageError("unique_tool_names: documents span workflows '" +
                       docs.front().workflow_id + "' and '" + doc.workflow_id +
                       "'");
  std::set<std::string> names;
  for (const AnnotatedDocument& doc : docs) {
    if (doc.modality != modality) continue;
    for (const Mention& m : doc.mentions) {
      std::string norm = normalize_name(m.surface);
      if (!norm.empty()) names.insert(std::move(norm));
    }
  }
  return names;
}

}  // namespace toollink
