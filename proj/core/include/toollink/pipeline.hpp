#pragma once

#include <map>
#include <string>
#include <vector>

#include "toollink/eval.hpp"
#include "toollink/run_config.hpp"

namespace toollink {

struct PipelineResult {
  std::vector<LinkSet> links;  // completed, one per workflow, sorted by id
  EvalReport report;
};

// NER -> unique tool names -> linking -> unlinked completion, per workflow.
// In dictionary mode ner_kb must be set; in import mode every document's
// mentions must already be attached.
struct PipelineOptions {
  NerMode ner_mode = NerMode::dictionary;
  const KnowledgeBase* ner_kb = nullptr;
  NerConfig ner;
  StrategySpec strategy;
  std::vector<std::string> fusion_tags;
};

std::vector<LinkSet> link_documents(const std::vector<AnnotatedDocument>& docs,
                                    const PipelineOptions& options,
                                    KbRegistry& registry);

// Scores the full chain against gold link sets.
EvalReport eval_pipeline(const std::vector<AnnotatedDocument>& article_docs,
                         const std::vector<AnnotatedDocument>& code_docs,
                         const PipelineOptions& options, KbRegistry& registry,
                         const std::vector<GoldLinkSet>& gold,
                         Averaging averaging = Averaging::micro);

// Loads everything the config references, runs the pipeline, scores it, and
// writes per-workflow TSVs plus the report file under config.output_dir.
PipelineResult run_pipeline(const RunConfig& config);

// Report serialization: one JSON object per line with a per-workflow array,
// and a fixed-width console table.
std::string report_json_line(const EvalReport& report, const std::string& strategy,
                             const std::string& corpus);
std::string report_table(const EvalReport& report, const std::string& strategy,
                         const std::string& corpus, bool per_workflow = false);

}  // namespace toollink
