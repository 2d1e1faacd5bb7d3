#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace toollink {

enum class Modality { article, code };

std::string to_string(Modality m);
Modality modality_from_string(std::string_view s);

// A typed character span over a document. Offsets count Unicode codepoints,
// not bytes, matching the standoff convention of the annotation tooling.
struct Mention {
  std::string mention_id;
  std::string label;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::string surface;    // equals the document substring [start, end)
  std::string doc_id;
};

struct AnnotatedDocument {
  std::string doc_id;
  Modality modality = Modality::article;
  std::string workflow_id;
  std::string text;
  std::vector<Mention> mentions;
};

// One row of a corpus manifest. Paths are stored resolved against the
// manifest location; ann_path is empty for documents without annotations.
struct CorpusDoc {
  std::string doc_id;
  std::string workflow_id;
  Modality modality = Modality::article;
  std::filesystem::path txt_path;
  std::filesystem::path ann_path;
};

struct CorpusManifest {
  std::filesystem::path base_dir;
  std::vector<CorpusDoc> docs;
};

// Manifest rows: doc_id <TAB> workflow_id <TAB> modality <TAB> txt <TAB> ann
// with "-" for a missing ann path. Lines starting with '#' are skipped.
CorpusManifest load_corpus_manifest(const std::filesystem::path& path);
void write_corpus_manifest(const CorpusManifest& manifest,
                           const std::filesystem::path& path);

// Reads the text (and annotations when present and requested).
AnnotatedDocument load_document(const CorpusDoc& doc, bool with_mentions = true);

// Normalized surface forms of all mentions of the given modality.
// All documents must belong to one workflow.
std::set<std::string> unique_tool_names(const std::vector<AnnotatedDocument>& docs,
                                        Modality modality);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace toollink
