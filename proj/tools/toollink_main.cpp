// toollink: link bioinformatics tool mentions between article text and
// workflow code.
//
// Subcommands: kb build, kb fuse, extract, ner, link, eval, run.
// Exit codes: 0 success, 1 validation error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "toollink/brat.hpp"
#include "toollink/errors.hpp"
#include "toollink/eval.hpp"
#include "toollink/kb.hpp"
#include "toollink/linker.hpp"
#include "toollink/ner.hpp"
#include "toollink/nextflow.hpp"
#include "toollink/pipeline.hpp"
#include "toollink/run_config.hpp"
#include "toollink/sections.hpp"
#include "toollink/strategy.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace toollink;

namespace {

void log_warn(const std::string& msg) { std::cerr << "[warn] " << msg << "\n"; }
void log_info(const std::string& msg) { std::cerr << "[info] " << msg << "\n"; }

// "tag=path" option values for knowledge base snapshots and indexes.
struct TaggedPath {
  std::string tag;
  fs::path path;
};

TaggedPath parse_tagged(const std::string& value) {
  std::size_t eq = value.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == value.size())
    throw UsageError("expected <source>=<path>, got '" + value + "'");
  return {value.substr(0, eq), fs::path(value.substr(eq + 1))};
}

KbRegistry load_registry(const std::vector<std::string>& kb_options) {
  KbRegistry registry;
  for (const std::string& opt : kb_options) {
    TaggedPath tp = parse_tagged(opt);
    registry.add(load_kb_snapshot_file(tp.path, tp.tag));
  }
  return registry;
}

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------- kb build

int cmd_kb_build(const std::vector<std::string>& snapshots, const fs::path& out_dir,
                 const std::string& retrieved) {
  fs::create_directories(out_dir);
  for (const std::string& opt : snapshots) {
    TaggedPath tp = parse_tagged(opt);
    KnowledgeBase kb = load_kb_snapshot_file(tp.path, tp.tag);

    std::ofstream records(out_dir / (tp.tag + ".kb.jsonl"), std::ios::binary);
    if (!records)
      throw ParseError("cannot write index for source '" + tp.tag + "'");
    write_kb_snapshot(kb, records);

    json manifest;
    manifest["source"] = tp.tag;
    manifest["retrieved"] = retrieved;
    manifest["records"] = kb.size();
    write_text_file(out_dir / (tp.tag + ".manifest.json"), manifest.dump(2) + "\n");
    log_info("indexed " + std::to_string(kb.size()) + " entries for '" + tp.tag +
             "'");
  }
  return 0;
}

// ----------------------------------------------------------------- kb fuse

int cmd_kb_fuse(const std::vector<std::string>& indexes, const fs::path& out_dir) {
  KbRegistry registry = load_registry(indexes);
  std::vector<const KnowledgeBase*> kbs;
  std::vector<std::string> tags = registry.sources();
  for (const std::string& tag : tags) kbs.push_back(registry.find(tag));
  FusedKb fused = fuse(kbs);

  fs::create_directories(out_dir);
  std::ofstream records(out_dir / "fusion.kb.jsonl", std::ios::binary);
  if (!records) throw ParseError("cannot write fused index");
  write_kb_snapshot(fused.kb, records);

  std::ofstream groups(out_dir / "fusion.groups.jsonl", std::ios::binary);
  for (const FusionGroup& g : fused.groups) {
    json row;
    row["group"] = g.group_id;
    row["aliases"] = g.alias_union;
    json members = json::array();
    for (const auto& [source, id] : g.members)
      members.push_back({{"source", source}, {"id", id}});
    row["members"] = std::move(members);
    groups << row.dump() << '\n';
  }

  json manifest;
  manifest["source"] = "fusion";
  manifest["sources"] = tags;
  manifest["groups"] = fused.groups.size();
  write_text_file(out_dir / "fusion.manifest.json", manifest.dump(2) + "\n");
  log_info("fused " + std::to_string(tags.size()) + " sources into " +
           std::to_string(fused.groups.size()) + " groups");
  return 0;
}

// ------------------------------------------------------------------ extract

struct RawInput {
  std::string kind;  // article | code
  std::string workflow_id;
  fs::path path;
};

std::vector<RawInput> load_raw_inputs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open inputs manifest: " + path.string());
  std::vector<RawInput> inputs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    RawInput input;
    std::string rel;
    if (!std::getline(ss, input.kind, '\t') ||
        !std::getline(ss, input.workflow_id, '\t') || !std::getline(ss, rel))
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": expected kind<TAB>workflow<TAB>path");
    if (input.kind != "article" && input.kind != "code")
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": kind must be article or code");
    fs::path p(rel);
    input.path = p.is_absolute() ? p : path.parent_path() / p;
    inputs.push_back(std::move(input));
  }
  return inputs;
}

int cmd_extract(const fs::path& inputs_path, const fs::path& out_dir,
                const std::vector<std::string>& section_headings) {
  std::vector<RawInput> inputs = load_raw_inputs(inputs_path);
  fs::create_directories(out_dir);

  SectionConfig section_config = SectionConfig::defaults();
  if (!section_headings.empty()) section_config.section_headings = section_headings;

  CorpusManifest manifest;
  manifest.base_dir = out_dir;
  std::vector<std::string> skips;
  int failures = 0;

  for (const RawInput& input : inputs) {
    try {
      std::string content = read_text_file(input.path);
      std::string stem = input.path.stem().string();
      if (input.kind == "article") {
        auto section = extract_methods_section(content, section_config);
        if (!section) {
          log_warn("no methods-type heading in " + input.path.string() +
                   ", skipping");
          skips.push_back("# skipped\t" + input.workflow_id + "\t" +
                          input.path.filename().string() + "\tno-methods-heading");
          continue;
        }
        std::string doc_id = input.workflow_id + "." + stem;
        write_text_file(out_dir / (doc_id + ".txt"), section->text);
        manifest.docs.push_back({doc_id, input.workflow_id, Modality::article,
                                 out_dir / (doc_id + ".txt"), {}});
      } else {
        auto blocks = extract_processes(content, input.path.string());
        std::map<std::string, int> name_counts;
        for (const ProcessBlock& block : blocks) {
          int n = ++name_counts[block.process_name];
          std::string doc_id = input.workflow_id + "." + stem + "." +
                               block.process_name +
                               (n > 1 ? "." + std::to_string(n) : "");
          write_text_file(out_dir / (doc_id + ".txt"), block.body);
          manifest.docs.push_back({doc_id, input.workflow_id, Modality::code,
                                   out_dir / (doc_id + ".txt"), {}});
        }
      }
    } catch (const std::exception& e) {
      log_warn(std::string("extraction failed: ") + e.what());
      ++failures;
    }
  }

  write_corpus_manifest(manifest, out_dir / "manifest.tsv");
  if (!skips.empty()) {
    std::ofstream append(out_dir / "manifest.tsv", std::ios::app);
    for (const std::string& skip : skips) append << skip << '\n';
  }
  log_info("extracted " + std::to_string(manifest.docs.size()) + " documents");
  return failures == 0 ? 0 : 2;
}

// --------------------------------------------------------------------- ner

int cmd_ner(const fs::path& corpus_path, const std::vector<std::string>& kb_options,
            const fs::path& out_dir, const NerConfig& cfg,
            const std::string& modality_filter) {
  CorpusManifest manifest = load_corpus_manifest(corpus_path);
  KbRegistry registry = load_registry(kb_options);
  const KnowledgeBase& kb = registry.bridge_kb(registry.sources());
  DictionaryMatcher matcher(kb);

  fs::create_directories(out_dir);
  CorpusManifest out_manifest;
  out_manifest.base_dir = out_dir;
  for (const CorpusDoc& entry : manifest.docs) {
    if (modality_filter != "all" && to_string(entry.modality) != modality_filter)
      continue;
    AnnotatedDocument doc = load_document(entry, /*with_mentions=*/false);
    doc.mentions = matcher.match(doc, cfg);
    fs::path ann_path = out_dir / (entry.doc_id + ".ann");
    write_text_file(ann_path, write_brat(doc));
    out_manifest.docs.push_back(
        {entry.doc_id, entry.workflow_id, entry.modality, entry.txt_path, ann_path});
  }
  write_corpus_manifest(out_manifest, out_dir / "manifest.tsv");
  log_info("annotated " + std::to_string(out_manifest.docs.size()) + " documents");
  return 0;
}

// -------------------------------------------------------------------- link

int cmd_link(const fs::path& corpus_path, const std::string& strategy_text,
             const std::vector<std::string>& kb_options,
             const std::string& fusion_csv, const fs::path& predictions,
             const fs::path& out_dir, bool with_strategy) {
  StrategySpec strategy = StrategySpec::parse(strategy_text);
  KbRegistry registry = load_registry(kb_options);
  std::vector<std::string> fusion_tags = split_csv(fusion_csv);

  std::set<std::string> loaded;
  for (const std::string& s : registry.sources()) loaded.insert(s);
  std::vector<std::string> problems;
  validate_strategy(strategy, loaded, fusion_tags, problems);
  for (const std::string& tag : fusion_tags)
    if (!loaded.count(tag))
      problems.push_back("fusion references unloaded source '" + tag + "'");
  if (!problems.empty()) {
    std::string msg = "invalid linking setup:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw UsageError(msg);
  }

  CorpusManifest manifest = load_corpus_manifest(corpus_path);
  std::vector<AnnotatedDocument> docs;
  if (!predictions.empty()) {
    auto imported = import_predictions(manifest, predictions);
    for (const CorpusDoc& entry : manifest.docs) {
      AnnotatedDocument doc = load_document(entry, /*with_mentions=*/false);
      doc.mentions = std::move(imported[entry.doc_id]);
      docs.push_back(std::move(doc));
    }
  } else {
    for (const CorpusDoc& entry : manifest.docs)
      docs.push_back(load_document(entry));
  }

  PipelineOptions options;
  options.ner_mode = NerMode::import_brat;
  options.strategy = std::move(strategy);
  options.fusion_tags = std::move(fusion_tags);
  std::vector<LinkSet> link_sets = link_documents(docs, options, registry);

  fs::create_directories(out_dir);
  for (const LinkSet& links : link_sets)
    write_text_file(out_dir / (links.workflow_id() + ".tsv"),
                    linkset_to_tsv(links, with_strategy));
  log_info("linked " + std::to_string(link_sets.size()) + " workflows");
  return 0;
}

// -------------------------------------------------------------------- eval

void emit_report(const EvalReport& report, const std::string& strategy_label,
                 const std::string& corpus_label, const fs::path& out_file,
                 bool per_workflow) {
  std::cout << report_table(report, strategy_label, corpus_label, per_workflow);
  if (!out_file.empty()) {
    if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
    write_text_file(out_file,
                    report_json_line(report, strategy_label, corpus_label) + "\n");
  }
}

int cmd_eval_ner(const fs::path& corpus_path, const fs::path& pred_dir,
                 const fs::path& out_file) {
  CorpusManifest manifest = load_corpus_manifest(corpus_path);
  auto predictions = import_predictions(manifest, pred_dir);

  std::vector<Mention> pred, gold;
  std::set<std::string> doc_ids;
  for (const CorpusDoc& entry : manifest.docs) {
    doc_ids.insert(entry.doc_id);
    AnnotatedDocument doc = load_document(entry);
    gold.insert(gold.end(), doc.mentions.begin(), doc.mentions.end());
    const auto& p = predictions[entry.doc_id];
    pred.insert(pred.end(), p.begin(), p.end());
  }
  EvalReport report = eval_ner(pred, gold, doc_ids);
  emit_report(report, "ner", corpus_path.string(), out_file, false);
  return 0;
}

int cmd_eval_links(const fs::path& gold_path, const fs::path& pred_path,
                   bool macro, const std::string& strategy_label,
                   const fs::path& out_file, bool per_workflow) {
  std::vector<GoldLinkSet> gold = load_link_sets(gold_path);
  std::vector<LinkSet> pred = load_link_sets(pred_path);
  EvalReport report =
      eval_links(pred, gold, macro ? Averaging::macro : Averaging::micro);
  emit_report(report, strategy_label, gold_path.string(), out_file, per_workflow);
  return 0;
}

// --------------------------------------------------------------------- run

int cmd_run(const fs::path& config_path, bool per_workflow) {
  RunConfig config = RunConfig::load(config_path);
  PipelineResult result = run_pipeline(config);
  std::cout << report_table(result.report, config.strategy_text,
                            config.corpus_manifest.filename().string(),
                            per_workflow);
  log_info("artifacts written to " + config.output_dir.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link bioinformatics tool mentions between articles and workflow code"};
  app.require_subcommand(1);

  // kb build / kb fuse
  auto* kb = app.add_subcommand("kb", "Build or fuse knowledge base indexes");
  kb->require_subcommand(1);

  auto* kb_build = kb->add_subcommand("build", "Index canonical KB snapshots");
  std::vector<std::string> build_snapshots;
  std::string build_out, build_retrieved = "unspecified";
  kb_build->add_option("--snapshot", build_snapshots, "<source>=<path>, repeatable")
      ->required();
  kb_build->add_option("--out", build_out, "Output directory")->required();
  kb_build->add_option("--retrieved", build_retrieved,
                       "Snapshot retrieval date recorded in the manifest");

  auto* kb_fuse = kb->add_subcommand("fuse", "Fuse indexes by shared names");
  std::vector<std::string> fuse_indexes;
  std::string fuse_out;
  kb_fuse->add_option("--index", fuse_indexes, "<source>=<path>, repeatable")
      ->required();
  kb_fuse->add_option("--out", fuse_out, "Output directory")->required();

  // extract
  auto* extract = app.add_subcommand(
      "extract", "Extract methods sections and workflow processes");
  std::string extract_inputs, extract_out;
  std::vector<std::string> extract_headings;
  extract->add_option("--inputs", extract_inputs,
                      "TSV of kind<TAB>workflow<TAB>path rows")
      ->required();
  extract->add_option("--out", extract_out, "Corpus output directory")->required();
  extract->add_option("--section-heading", extract_headings,
                      "Section heading to extract, repeatable; replaces the "
                      "built-in methods-type defaults");

  // ner
  auto* ner = app.add_subcommand("ner", "Dictionary entity recognition");
  std::string ner_corpus, ner_out, ner_boundary = "token_boundary";
  std::string ner_modality = "all", ner_stoplist;
  std::vector<std::string> ner_kbs;
  int ner_min_len = 2;
  ner->add_option("--corpus", ner_corpus, "Corpus manifest")->required();
  ner->add_option("--kb", ner_kbs, "<source>=<path>, repeatable; fused when several")
      ->required();
  ner->add_option("--out", ner_out, "Output directory for .ann files")->required();
  ner->add_option("--boundary", ner_boundary, "token_boundary or substring");
  ner->add_option("--min-match-length", ner_min_len, "Minimum match length");
  ner->add_option("--stoplist", ner_stoplist, "Names to exclude, one per line");
  ner->add_option("--modality", ner_modality, "article, code or all");

  // link
  auto* link = app.add_subcommand("link", "Cross-modal linking per workflow");
  std::string link_corpus, link_strategy, link_fusion, link_pred, link_out;
  std::vector<std::string> link_kbs;
  bool link_with_strategy = false;
  link->add_option("--corpus", link_corpus, "Corpus manifest with annotations")
      ->required();
  link->add_option("--strategy", link_strategy,
                   "e.g. combine(kb_bridge(bioconda,bioweb), levenshtein(1))")
      ->required();
  link->add_option("--kb", link_kbs, "<source>=<path>, repeatable");
  link->add_option("--fusion", link_fusion,
                   "Comma-separated sources behind kb_bridge(fusion)");
  link->add_option("--predictions", link_pred,
                   "Directory of predicted .ann files replacing manifest ones");
  link->add_option("--out", link_out, "Directory for per-workflow TSVs")->required();
  link->add_flag("--with-strategy", link_with_strategy,
                 "Append the strategy tag column");

  // eval
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->require_subcommand(1);

  auto* eval_ner_cmd = eval->add_subcommand("ner", "Strict span scoring");
  std::string eval_ner_corpus, eval_ner_pred, eval_ner_out;
  eval_ner_cmd->add_option("--corpus", eval_ner_corpus, "Gold corpus manifest")
      ->required();
  eval_ner_cmd->add_option("--pred", eval_ner_pred, "Directory of predicted .ann")
      ->required();
  eval_ner_cmd->add_option("--out", eval_ner_out, "Report JSONL path");

  auto* eval_links_cmd = eval->add_subcommand("links", "Record-level link scoring");
  std::string eval_links_gold, eval_links_pred, eval_links_out;
  std::string eval_links_label = "links";
  bool eval_links_macro = false, eval_links_breakdown = false;
  eval_links_cmd->add_option("--gold", eval_links_gold, "Gold TSV file or directory")
      ->required();
  eval_links_cmd->add_option("--pred", eval_links_pred,
                             "Predicted TSV file or directory")
      ->required();
  eval_links_cmd->add_flag("--macro", eval_links_macro,
                           "Macro-average across workflows");
  eval_links_cmd->add_option("--strategy-label", eval_links_label,
                             "Strategy name recorded in the report");
  eval_links_cmd->add_option("--out", eval_links_out, "Report JSONL path");
  eval_links_cmd->add_flag("--per-workflow", eval_links_breakdown,
                           "Print per-workflow rows");

  // run
  auto* run = app.add_subcommand("run", "Full pipeline from a config file");
  std::string run_config_path;
  bool run_breakdown = false;
  run->add_option("--config", run_config_path, "Run configuration JSON")->required();
  run->add_flag("--per-workflow", run_breakdown, "Print per-workflow rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (kb_build->parsed())
      return cmd_kb_build(build_snapshots, build_out, build_retrieved);
    if (kb_fuse->parsed()) return cmd_kb_fuse(fuse_indexes, fuse_out);
    if (extract->parsed())
      return cmd_extract(extract_inputs, extract_out, extract_headings);
    if (ner->parsed()) {
      if (ner_modality != "all" && ner_modality != "article" && ner_modality != "code")
        throw UsageError("--modality must be article, code or all");
      NerConfig cfg;
      cfg.min_match_length = ner_min_len;
      cfg.boundary_mode = boundary_mode_from_string(ner_boundary);
      if (!ner_stoplist.empty()) cfg.stoplist = load_stoplist(ner_stoplist);
      return cmd_ner(ner_corpus, ner_kbs, ner_out, cfg, ner_modality);
    }
    if (link->parsed())
      return cmd_link(link_corpus, link_strategy, link_kbs, link_fusion,
                      link_pred, link_out, link_with_strategy);
    if (eval_ner_cmd->parsed())
      return cmd_eval_ner(eval_ner_corpus, eval_ner_pred, eval_ner_out);
    if (eval_links_cmd->parsed())
      return cmd_eval_links(eval_links_gold, eval_links_pred, eval_links_macro,
                            eval_links_label, eval_links_out,
                            eval_links_breakdown);
    if (run->parsed()) return cmd_run(run_config_path, run_breakdown);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
