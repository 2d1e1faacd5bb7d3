#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "toollink/corpus.hpp"
#include "toollink/linker.hpp"

namespace toollink {

// Precision/recall/F1 with zero-denominator cases pinned to 0.
struct EvalReport {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<std::pair<std::string, EvalReport>> breakdown;  // per workflow

  static EvalReport from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn);
};

enum class Averaging { micro, macro };

Averaging averaging_from_string(std::string_view s);

// Strict span scoring: a prediction counts iff a gold mention with identical
// (doc_id, start, end, label) exists; every mention matches at most once.
// doc_ids is the known document universe; mentions outside it are a usage
// error.
EvalReport eval_ner(const std::vector<Mention>& pred,
                    const std::vector<Mention>& gold,
                    const std::set<std::string>& doc_ids);

// Record-level scoring over links and unlinked records alike, compared as
// (article_tool?, code_tool?) pairs per workflow. Workflows present in pred
// but missing from gold are a usage error; gold-only workflows count as
// misses. Micro-averaging sums counts across workflows; macro averages the
// per-workflow ratios (counts are summed either way).
EvalReport eval_links(const std::vector<LinkSet>& pred,
                      const std::vector<GoldLinkSet>& gold,
                      Averaging averaging = Averaging::micro);

}  // namespace toollink
