#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "toollink/kb.hpp"
#include "toollink/linker.hpp"

namespace toollink {

// Declarative linking strategy, e.g.
//   exact
//   levenshtein(1)
//   prefix_suffix(3)
//   kb_bridge(bioconda,bioweb)   -- two or more sources are fused first
//   kb_bridge(fusion)            -- the run configuration's fusion list
//   combine(kb_bridge(bioconda), levenshtein(1))
struct StrategySpec {
  enum class Kind { exact, levenshtein, prefix_suffix, kb_bridge, combine };

  Kind kind = Kind::exact;
  int param = 0;                      // levenshtein threshold / affix overlap
  std::vector<std::string> sources;   // kb_bridge arguments
  std::vector<StrategySpec> children; // combine arguments

  static StrategySpec parse(std::string_view text);
  std::string to_string() const;
};

// Holds loaded knowledge bases by source tag and memoizes fusions so that a
// strategy referencing the same source combination twice fuses once.
class KbRegistry {
 public:
  void add(KnowledgeBase kb);
  bool has(const std::string& source) const;
  const KnowledgeBase* find(const std::string& source) const;
  std::vector<std::string> sources() const;

  // One source: the plain KB (entry pivots). Several: their fusion (group
  // pivots), built on first use and cached.
  const KnowledgeBase& bridge_kb(const std::vector<std::string>& source_tags);
  const FusedKb& fusion(const std::vector<std::string>& source_tags);

 private:
  std::map<std::string, KnowledgeBase> kbs_;
  std::map<std::string, std::unique_ptr<FusedKb>> fusions_;
};

// Appends one message per problem (unknown strategy sources, empty fusion
// reference, bad thresholds). Leaves messages untouched when valid.
void validate_strategy(const StrategySpec& spec,
                       const std::set<std::string>& loaded_sources,
                       const std::vector<std::string>& fusion_tags,
                       std::vector<std::string>& messages);

LinkSet execute_strategy(const StrategySpec& spec, const std::string& workflow_id,
                         const std::set<std::string>& article_tools,
                         const std::set<std::string>& code_tools,
                         KbRegistry& registry,
                         const std::vector<std::string>& fusion_tags);

}  // namespace toollink
