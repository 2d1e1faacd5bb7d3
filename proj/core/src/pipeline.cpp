#include "toollink/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"
#include "toollink/brat.hpp"
#include "toollink/errors.hpp"

namespace toollink {

using json = nlohmann::json;

namespace {

std::map<std::string, std::vector<AnnotatedDocument>> group_by_workflow(
    const std::vector<AnnotatedDocument>& docs) {
  std::map<std::string, std::vector<AnnotatedDocument>> grouped;
  for (const AnnotatedDocument& doc : docs) grouped[doc.workflow_id].push_back(doc);
  return grouped;
}

}  // namespace

std::vector<LinkSet> link_documents(const std::vector<AnnotatedDocument>& docs,
                                    const PipelineOptions& options,
                                    KbRegistry& registry) {
  std::vector<AnnotatedDocument> prepared;
  prepared.reserve(docs.size());
  if (options.ner_mode == NerMode::dictionary) {
    if (!options.ner_kb)
      throw UsageError("dictionary NER requested without a knowledge base");
    DictionaryMatcher matcher(*options.ner_kb);
    for (const AnnotatedDocument& doc : docs) {
      AnnotatedDocument copy = doc;
      copy.mentions = matcher.match(doc, options.ner);
      prepared.push_back(std::move(copy));
    }
  } else {
    prepared = docs;
  }

  std::vector<LinkSet> results;
  for (const auto& [wf, wf_docs] : group_by_workflow(prepared)) {
    std::set<std::string> article_tools =
        unique_tool_names(wf_docs, Modality::article);
    std::set<std::string> code_tools = unique_tool_names(wf_docs, Modality::code);
    LinkSet links = execute_strategy(options.strategy, wf, article_tools,
                                     code_tools, registry, options.fusion_tags);
    results.push_back(complete_unlinked(links, article_tools, code_tools));
  }
  return results;
}

EvalReport eval_pipeline(const std::vector<AnnotatedDocument>& article_docs,
                         const std::vector<AnnotatedDocument>& code_docs,
                         const PipelineOptions& options, KbRegistry& registry,
                         const std::vector<GoldLinkSet>& gold,
                         Averaging averaging) {
  std::vector<AnnotatedDocument> all_docs = article_docs;
  all_docs.insert(all_docs.end(), code_docs.begin(), code_docs.end());
  std::vector<LinkSet> links = link_documents(all_docs, options, registry);
  return eval_links(links, gold, averaging);
}

PipelineResult run_pipeline(const RunConfig& config) {
  KbRegistry registry;
  for (const RunConfig::KbSource& src : config.kb_sources)
    registry.add(load_kb_snapshot_file(src.path, src.source));

  CorpusManifest manifest = load_corpus_manifest(config.corpus_manifest);

  PipelineOptions options;
  options.ner_mode = config.ner_mode;
  options.ner = config.ner;
  options.strategy = config.strategy;
  options.fusion_tags = config.fusion;

  const KnowledgeBase* ner_kb = nullptr;
  if (config.ner_mode == NerMode::dictionary)
    ner_kb = &registry.bridge_kb(config.ner_kb);
  options.ner_kb = ner_kb;

  std::vector<AnnotatedDocument> docs;
  docs.reserve(manifest.docs.size());
  if (config.ner_mode == NerMode::import_brat) {
    auto predictions = import_predictions(manifest, config.predictions_dir);
    for (const CorpusDoc& entry : manifest.docs) {
      AnnotatedDocument doc = load_document(entry, /*with_mentions=*/false);
      doc.mentions = std::move(predictions[entry.doc_id]);
      docs.push_back(std::move(doc));
    }
  } else {
    for (const CorpusDoc& entry : manifest.docs)
      docs.push_back(load_document(entry, /*with_mentions=*/false));
  }

  PipelineResult result;
  result.links = link_documents(docs, options, registry);

  std::vector<GoldLinkSet> gold = load_link_sets(config.gold_path);
  result.report = eval_links(result.links, gold, config.averaging);

  std::filesystem::create_directories(config.output_dir / "links");
  for (const LinkSet& links : result.links)
    write_text_file(config.output_dir / "links" / (links.workflow_id() + ".tsv"),
                    linkset_to_tsv(links));
  write_text_file(config.output_dir / "report.jsonl",
                  report_json_line(result.report, config.strategy_text,
                                   config.corpus_manifest.filename().string()) +
                      "\n");
  return result;
}

namespace {

json report_fields(const EvalReport& r) {
  json obj;
  obj["tp"] = r.tp;
  obj["fp"] = r.fp;
  obj["fn"] = r.fn;
  obj["precision"] = r.precision;
  obj["recall"] = r.recall;
  obj["f1"] = r.f1;
  return obj;
}

}  // namespace

std::string report_json_line(const EvalReport& report, const std::string& strategy,
                             const std::string& corpus) {
  json obj = report_fields(report);
  obj["strategy"] = strategy;
  obj["corpus"] = corpus;
  json per_workflow = json::array();
  for (const auto& [wf, sub] : report.breakdown) {
    json row = report_fields(sub);
    row["workflow_id"] = wf;
    per_workflow.push_back(std::move(row));
  }
  obj["per_workflow"] = std::move(per_workflow);
  return obj.dump();
}

std::string report_table(const EvalReport& report, const std::string& strategy,
                         const std::string& corpus, bool per_workflow) {
  auto row = [](const std::string& name, const EvalReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-40s %6lld %6lld %6lld  %7.4f %7.4f %7.4f\n",
                  name.c_str(), static_cast<long long>(r.tp),
                  static_cast<long long>(r.fp), static_cast<long long>(r.fn),
                  r.precision, r.recall, r.f1);
    return std::string(buf);
  };

  std::string out;
  char header[256];
  std::snprintf(header, sizeof(header), "%-40s %6s %6s %6s  %7s %7s %7s\n",
                ("strategy: " + strategy).c_str(), "TP", "FP", "FN", "P", "R",
                "F1");
  out += "corpus: " + corpus + "\n";
  out += header;
  if (per_workflow)
    for (const auto& [wf, sub] : report.breakdown) out += row("  " + wf, sub);
  out += row("  <aggregate>", report);
  return out;
}

}  // namespace toollink
