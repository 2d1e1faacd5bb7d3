#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "toollink/kb.hpp"

namespace toollink {

// A cross-modal pair, or an explicit unlinked record when exactly one side
// is present. pivot carries the bridging group id for KB-produced links.
struct LinkRecord {
  std::optional<std::string> article_tool;
  std::optional<std::string> code_tool;
  std::string strategy;
  std::optional<std::string> pivot;

  bool is_link() const { return article_tool && code_tool; }
};

// Records for one workflow, deduplicated on the (article_tool, code_tool)
// pair and kept in canonical order. Strategy tags of merged duplicates are
// joined with '+'.
class LinkSet {
 public:
  LinkSet() = default;
  explicit LinkSet(std::string workflow_id)
      : workflow_id_(std::move(workflow_id)) {}

  const std::string& workflow_id() const { return workflow_id_; }
  const std::vector<LinkRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  void add(LinkRecord record);

  // (article, code) pairs with "_" standing for an absent side.
  std::set<std::pair<std::string, std::string>> pairs() const;

 private:
  std::string workflow_id_;
  std::vector<LinkRecord> records_;
};

using GoldLinkSet = LinkSet;

// Unit-cost edit distance over codepoints of the inputs.
int levenshtein(std::string_view a, std::string_view b);

// All inputs below are normalized unique-tool-name sets for one workflow.
LinkSet link_exact(std::string workflow_id, const std::set<std::string>& article_tools,
                   const std::set<std::string>& code_tools);
LinkSet link_levenshtein(std::string workflow_id,
                         const std::set<std::string>& article_tools,
                         const std::set<std::string>& code_tools, int max_distance);
// Links pairs where the shorter name is a prefix or suffix of the longer one
// and is at least min_overlap codepoints long.
LinkSet link_prefix_suffix(std::string workflow_id,
                           const std::set<std::string>& article_tools,
                           const std::set<std::string>& code_tools,
                           int min_overlap);
// Pivots through KB entries (plain KB) or fusion groups (fused KB): a pair is
// linked when both names resolve to at least one common id.
LinkSet link_kb_bridge(std::string workflow_id,
                       const std::set<std::string>& article_tools,
                       const std::set<std::string>& code_tools,
                       const KnowledgeBase& kb);

// Pair-set union; all inputs must share a workflow id.
LinkSet combine(const std::vector<LinkSet>& link_sets);

// Adds an unlinked record for every tool that appears in no link, and drops
// stale unlinked records for tools that do. Idempotent.
LinkSet complete_unlinked(const LinkSet& links,
                          const std::set<std::string>& article_tools,
                          const std::set<std::string>& code_tools);

// Two-column TSV, "_" for the absent side, records in canonical order.
// with_strategy appends a third column.
std::string linkset_to_tsv(const LinkSet& links, bool with_strategy = false);
// Accepts two- or three-column rows; names are normalized; duplicate pairs
// collapse.
LinkSet linkset_from_tsv(std::string_view content, std::string workflow_id);

// A single <workflow_id>.tsv file, or a directory of them.
std::vector<LinkSet> load_link_sets(const std::filesystem::path& path);

}  // namespace toollink
