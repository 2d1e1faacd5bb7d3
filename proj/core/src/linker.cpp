#include "toollink/linker.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "toollink/errors.hpp"
#include "toollink/text.hpp"

namespace toollink {

namespace {

const std::string kAbsent = "_";

std::string side_key(const std::optional<std::string>& side) {
  return side ? *side : kAbsent;
}

std::string merge_tags(const std::string& a, const std::string& b) {
  std::set<std::string> parts;
  auto split_into = [&parts](const std::string& s) {
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t plus = s.find('+', pos);
      if (plus == std::string::npos) {
        if (pos < s.size()) parts.insert(s.substr(pos));
        break;
      }
      if (plus > pos) parts.insert(s.substr(pos, plus - pos));
      pos = plus + 1;
    }
  };
  split_into(a);
  split_into(b);
  std::string merged;
  for (const std::string& p : parts) {
    if (!merged.empty()) merged += '+';
    merged += p;
  }
  return merged;
}

}  // namespace

void LinkSet::add(LinkRecord record) {
  if (!record.article_tool && !record.code_tool)
    throw UsageError("link record with both sides absent");

  auto key = std::make_pair(side_key(record.article_tool),
                            side_key(record.code_tool));
  auto it = std::lower_bound(
      records_.begin(), records_.end(), key, [](const LinkRecord& r, const auto& k) {
        return std::make_pair(side_key(r.article_tool), side_key(r.code_tool)) < k;
      });
  if (it != records_.end() && side_key(it->article_tool) == key.first &&
      side_key(it->code_tool) == key.second) {
    it->strategy = merge_tags(it->strategy, record.strategy);
    if (!it->pivot) it->pivot = record.pivot;
    return;
  }
  records_.insert(it, std::move(record));
}

std::set<std::pair<std::string, std::string>> LinkSet::pairs() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const LinkRecord& r : records_)
    out.emplace(side_key(r.article_tool), side_key(r.code_tool));
  return out;
}

int levenshtein(std::string_view a, std::string_view b) {
  const std::vector<char32_t> ca = utf8_decode(a);
  const std::vector<char32_t> cb = utf8_decode(b);
  const std::size_t n = ca.size(), m = cb.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);

  std::vector<int> row(m + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= n; ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      int sub = diag + (ca[i - 1] == cb[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[m];
}

LinkSet link_exact(std::string workflow_id,
                   const std::set<std::string>& article_tools,
                   const std::set<std::string>& code_tools) {
  LinkSet links(std::move(workflow_id));
  for (const std::string& name : article_tools)
    if (code_tools.count(name))
      links.add({name, name, "exact", std::nullopt});
  return links;
}

LinkSet link_levenshtein(std::string workflow_id,
                         const std::set<std::string>& article_tools,
                         const std::set<std::string>& code_tools,
                         int max_distance) {
  if (max_distance < 0) throw UsageError("levenshtein threshold must be >= 0");
  LinkSet links(std::move(workflow_id));
  const std::string tag = "levenshtein" + std::to_string(max_distance);
  for (const std::string& a : article_tools)
    for (const std::string& c : code_tools)
      if (levenshtein(a, c) <= max_distance)
        links.add({a, c, tag, std::nullopt});
  return links;
}

LinkSet link_prefix_suffix(std::string workflow_id,
                           const std::set<std::string>& article_tools,
                           const std::set<std::string>& code_tools,
                           int min_overlap) {
  if (min_overlap < 1) throw UsageError("min_overlap must be >= 1");
  LinkSet links(std::move(workflow_id));
  for (const std::string& a : article_tools) {
    const std::vector<char32_t> ca = utf8_decode(a);
    for (const std::string& c : code_tools) {
      const std::vector<char32_t> cc = utf8_decode(c);
      const std::vector<char32_t>& shorter = ca.size() <= cc.size() ? ca : cc;
      const std::vector<char32_t>& longer = ca.size() <= cc.size() ? cc : ca;
      if (static_cast<int>(shorter.size()) < min_overlap) continue;
      bool prefix = std::equal(shorter.begin(), shorter.end(), longer.begin());
      bool suffix = std::equal(shorter.rbegin(), shorter.rend(), longer.rbegin());
      if (prefix || suffix) links.add({a, c, "prefix_suffix", std::nullopt});
    }
  }
  return links;
}

LinkSet link_kb_bridge(std::string workflow_id,
                       const std::set<std::string>& article_tools,
                       const std::set<std::string>& code_tools,
                       const KnowledgeBase& kb) {
  LinkSet links(std::move(workflow_id));
  const std::string tag = "kb_bridge(" + kb.source() + ")";

  std::map<std::string, std::set<std::string>> article_ids, code_ids;
  for (const std::string& a : article_tools) {
    auto ids = kb.lookup(a);
    if (!ids.empty()) article_ids.emplace(a, std::move(ids));
  }
  for (const std::string& c : code_tools) {
    auto ids = kb.lookup(c);
    if (!ids.empty()) code_ids.emplace(c, std::move(ids));
  }

  for (const auto& [a, aids] : article_ids)
    for (const auto& [c, cids] : code_ids) {
      std::vector<std::string> shared;
      std::set_intersection(aids.begin(), aids.end(), cids.begin(), cids.end(),
                            std::back_inserter(shared));
      if (!shared.empty()) links.add({a, c, tag, shared.front()});
    }
  return links;
}

LinkSet combine(const std::vector<LinkSet>& link_sets) {
  if (link_sets.empty()) throw UsageError("combine requires at least one link set");
  for (const LinkSet& ls : link_sets)
    if (ls.workflow_id() != link_sets.front().workflow_id())
      throw UsageError("combine: mismatched workflow ids '" +
                       link_sets.front().workflow_id() + "' and '" +
                       ls.workflow_id() + "'");
  LinkSet merged(link_sets.front().workflow_id());
  for (const LinkSet& ls : link_sets)
    for (const LinkRecord& r : ls.records()) merged.add(r);
  return merged;
}

LinkSet complete_unlinked(const LinkSet& links,
                          const std::set<std::string>& article_tools,
                          const std::set<std::string>& code_tools) {
  std::set<std::string> linked_article, linked_code;
  for (const LinkRecord& r : links.records()) {
    if (!r.is_link()) continue;
    linked_article.insert(*r.article_tool);
    linked_code.insert(*r.code_tool);
  }

  LinkSet completed(links.workflow_id());
  for (const LinkRecord& r : links.records()) {
    // Drop stale unlinked records for tools that now participate in a link.
    if (!r.is_link()) {
      if (r.article_tool && linked_article.count(*r.article_tool)) continue;
      if (r.code_tool && linked_code.count(*r.code_tool)) continue;
    }
    completed.add(r);
  }
  for (const std::string& a : article_tools)
    if (!linked_article.count(a))
      completed.add({a, std::nullopt, "unlinked", std::nullopt});
  for (const std::string& c : code_tools)
    if (!linked_code.count(c))
      completed.add({std::nullopt, c, "unlinked", std::nullopt});
  return completed;
}

std::string linkset_to_tsv(const LinkSet& links, bool with_strategy) {
  std::string out;
  for (const LinkRecord& r : links.records()) {
    out += side_key(r.article_tool);
    out += '\t';
    out += side_key(r.code_tool);
    if (with_strategy) {
      out += '\t';
      out += r.strategy.empty() ? "-" : r.strategy;
    }
    out += '\n';
  }
  return out;
}

LinkSet linkset_from_tsv(std::string_view content, std::string workflow_id) {
  LinkSet links(std::move(workflow_id));
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    std::string_view line = content.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? content.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '#') continue;

    std::size_t tab1 = line.find('\t');
    if (tab1 == std::string_view::npos)
      throw ParseError("link TSV line " + std::to_string(line_no) +
                       ": expected two tab-separated columns");
    std::size_t tab2 = line.find('\t', tab1 + 1);
    std::string_view a = line.substr(0, tab1);
    std::string_view c = line.substr(
        tab1 + 1, tab2 == std::string_view::npos ? std::string_view::npos
                                                 : tab2 - tab1 - 1);
    std::string_view tag =
        tab2 == std::string_view::npos ? "" : line.substr(tab2 + 1);

    LinkRecord record;
    if (a != kAbsent) record.article_tool = normalize_name(a);
    if (c != kAbsent) record.code_tool = normalize_name(c);
    if (!record.article_tool && !record.code_tool)
      throw ParseError("link TSV line " + std::to_string(line_no) +
                       ": both sides absent");
    if ((record.article_tool && record.article_tool->empty()) ||
        (record.code_tool && record.code_tool->empty()))
      throw ParseError("link TSV line " + std::to_string(line_no) +
                       ": empty tool name");
    if (!tag.empty() && tag != "-") record.strategy = std::string(tag);
    links.add(std::move(record));
  }
  return links;
}

std::vector<LinkSet> load_link_sets(const std::filesystem::path& path) {
  std::vector<LinkSet> sets;
  auto load_one = [](const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot open link TSV: " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      return linkset_from_tsv(ss.str(), file.stem().string());
    } catch (const ParseError& e) {
      throw ParseError(file.string() + ": " + e.what());
    }
  };

  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".tsv")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) sets.push_back(load_one(file));
  } else if (std::filesystem::exists(path)) {
    sets.push_back(load_one(path));
  } else {
    throw ParseError("link set path does not exist: " + path.string());
  }
  return sets;
}

}  // namespace toollink
