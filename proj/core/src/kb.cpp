#include "toollink/kb.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "toollink/errors.hpp"
#include "toollink/text.hpp"

namespace toollink {

using json = nlohmann::json;

KnowledgeBase::KnowledgeBase(std::string source, std::vector<ToolEntry> entries)
    : source_(std::move(source)), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    ToolEntry& e = entries_[i];
    if (e.entry_id.empty())
      throw ParseError("knowledge base entry with empty id");
    if (!by_id_.emplace(e.entry_id, i).second)
      throw ParseError("duplicate entry id '" + e.entry_id + "' in source '" +
                       source_ + "'");
    std::string primary = normalize_name(e.primary_name);
    if (primary.empty())
      throw ParseError("entry '" + e.entry_id + "' has a blank primary name");
    e.aliases.insert(std::move(primary));
    for (const std::string& alias : e.aliases) {
      if (alias.empty())
        throw ParseError("entry '" + e.entry_id + "' has an empty alias");
      alias_index_[alias].insert(e.entry_id);
    }
  }
}

const ToolEntry* KnowledgeBase::find_entry(std::string_view entry_id) const {
  auto it = by_id_.find(std::string(entry_id));
  return it == by_id_.end() ? nullptr : &entries_[it->second];
}

std::set<std::string> KnowledgeBase::lookup(std::string_view name) const {
  auto it = alias_index_.find(normalize_name(name));
  return it == alias_index_.end() ? std::set<std::string>{} : it->second;
}

namespace {

ToolEntry parse_record(const std::string& line, std::size_t line_no,
                       std::string_view source) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": invalid record: " + e.what());
  }
  if (!rec.is_object())
    throw ParseError("line " + std::to_string(line_no) + ": record is not an object");

  auto require_string = [&](const char* key) -> std::string {
    if (!rec.contains(key) || !rec[key].is_string() ||
        rec[key].get<std::string>().empty())
      throw ParseError("line " + std::to_string(line_no) +
                       ": missing or empty field '" + key + "'");
    return rec[key].get<std::string>();
  };

  ToolEntry entry;
  entry.entry_id = require_string("id");
  entry.primary_name = require_string("name");
  entry.source = std::string(source);
  if (rec.contains("source") && rec["source"].is_string() &&
      !rec["source"].get<std::string>().empty() &&
      rec["source"].get<std::string>() != source)
    throw ParseError("line " + std::to_string(line_no) + ": record source '" +
                     rec["source"].get<std::string>() +
                     "' does not match declared source '" +
                     std::string(source) + "'");

  if (!rec.contains("aliases") || !rec["aliases"].is_array() ||
      rec["aliases"].empty())
    throw ParseError("line " + std::to_string(line_no) +
                     ": missing or empty alias list");
  for (const auto& a : rec["aliases"]) {
    if (!a.is_string())
      throw ParseError("line " + std::to_string(line_no) +
                       ": alias is not a string");
    std::string norm = normalize_name(a.get<std::string>());
    if (norm.empty())
      throw ParseError("line " + std::to_string(line_no) +
                       ": alias is empty after trimming");
    entry.aliases.insert(std::move(norm));
  }
  entry.aliases.insert(normalize_name(entry.primary_name));
  return entry;
}

}  // namespace

KnowledgeBase load_kb_snapshot(std::istream& in, std::string_view source) {
  if (source.empty()) throw UsageError("knowledge base source tag is empty");
  std::vector<ToolEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    entries.push_back(parse_record(line, line_no, source));
  }
  return KnowledgeBase(std::string(source), std::move(entries));
}

KnowledgeBase load_kb_snapshot_file(const std::filesystem::path& path,
                                    std::string_view source) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open knowledge base snapshot: " + path.string());
  try {
    return load_kb_snapshot(in, source);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_kb_snapshot(const KnowledgeBase& kb, std::ostream& out) {
  std::vector<const ToolEntry*> sorted;
  sorted.reserve(kb.entries().size());
  for (const ToolEntry& e : kb.entries()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const ToolEntry* a, const ToolEntry* b) {
              return a->entry_id < b->entry_id;
            });
  for (const ToolEntry* e : sorted) {
    json rec;
    rec["id"] = e->entry_id;
    rec["name"] = e->primary_name;
    rec["aliases"] = e->aliases;  // std::set serializes sorted
    rec["source"] = e->source;
    out << rec.dump() << '\n';
  }
}

FusedKb fuse(const std::vector<const KnowledgeBase*>& kbs) {
  if (kbs.empty()) throw UsageError("fuse requires at least one knowledge base");

  struct Slot {
    const ToolEntry* entry;
    const std::string* source;
  };
  std::vector<Slot> slots;
  for (const KnowledgeBase* kb : kbs)
    for (const ToolEntry& e : kb->entries())
      slots.push_back({&e, &kb->source()});

  // Union-find keyed by slot index; aliases connect slots.
  std::vector<std::size_t> parent(slots.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  };

  std::map<std::string, std::size_t> alias_owner;
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (const std::string& alias : slots[i].entry->aliases) {
      auto [it, inserted] = alias_owner.emplace(alias, i);
      if (!inserted) unite(it->second, i);
    }

  std::map<std::size_t, FusionGroup> by_root;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    FusionGroup& g = by_root[find(i)];
    g.members.emplace_back(*slots[i].source, slots[i].entry->entry_id);
    g.alias_union.insert(slots[i].entry->aliases.begin(),
                         slots[i].entry->aliases.end());
  }

  FusedKb fused;
  for (auto& [root, group] : by_root) {
    group.group_id = *group.alias_union.begin();
    std::sort(group.members.begin(), group.members.end());
    fused.groups.push_back(std::move(group));
  }
  // Distinct groups never share an alias, so the smallest alias orders them
  // canonically regardless of input order.
  std::sort(fused.groups.begin(), fused.groups.end(),
            [](const FusionGroup& a, const FusionGroup& b) {
              return a.group_id < b.group_id;
            });

  std::vector<ToolEntry> group_entries;
  group_entries.reserve(fused.groups.size());
  for (const FusionGroup& g : fused.groups) {
    ToolEntry e;
    e.entry_id = g.group_id;
    e.source = "fusion";
    e.primary_name = g.group_id;
    e.aliases = g.alias_union;
    group_entries.push_back(std::move(e));
  }
  fused.kb = KnowledgeBase("fusion", std::move(group_entries));
  return fused;
}

}  // namespace toollink
