#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace toollink {

// One registry entity. Aliases are held in normalized form (see
// normalize_name) and always include the normalized primary name.
struct ToolEntry {
  std::string entry_id;
  std::string source;
  std::string primary_name;  // raw, as shipped by the registry
  std::set<std::string> aliases;
};

// Immutable once constructed; safe to share across threads.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;
  // Builds the alias index. Inserts each entry's normalized primary name
  // into its alias set; throws ParseError on duplicate ids, blank names or
  // blank aliases.
  KnowledgeBase(std::string source, std::vector<ToolEntry> entries);

  const std::string& source() const { return source_; }
  const std::vector<ToolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const ToolEntry* find_entry(std::string_view entry_id) const;

  // Entry ids of all entries carrying normalize_name(name) as an alias.
  std::set<std::string> lookup(std::string_view name) const;

  const std::map<std::string, std::set<std::string>>& alias_index() const {
    return alias_index_;
  }

 private:
  std::string source_;
  std::vector<ToolEntry> entries_;
  std::map<std::string, std::set<std::string>> alias_index_;
  std::map<std::string, std::size_t> by_id_;
};

// Line-delimited snapshot records: {"id": ..., "name": ..., "aliases": [...],
// "source": ...}. The source field may be omitted; when present it must match
// the declared tag. Empty lines are skipped. Errors carry 1-based line numbers.
KnowledgeBase load_kb_snapshot(std::istream& in, std::string_view source);
KnowledgeBase load_kb_snapshot_file(const std::filesystem::path& path,
                                    std::string_view source);

// Canonical snapshot form: records sorted by entry id, aliases sorted,
// byte-stable for identical inputs.
void write_kb_snapshot(const KnowledgeBase& kb, std::ostream& out);

struct FusionGroup {
  std::string group_id;  // smallest alias of the union; unique across groups
  std::vector<std::pair<std::string, std::string>> members;  // (source, entry_id)
  std::set<std::string> alias_union;
};

// A fused view across registries: one KnowledgeBase entry per group so the
// linker can pivot on groups and plain KBs through the same interface.
struct FusedKb {
  KnowledgeBase kb;  // source() == "fusion"
  std::vector<FusionGroup> groups;
};

// Transitive grouping: entries sharing a normalized alias land in one group.
// The partition depends only on the entry set, not on KB or alias order.
FusedKb fuse(const std::vector<const KnowledgeBase*>& kbs);

}  // namespace toollink
