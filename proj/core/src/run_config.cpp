#include "toollink/run_config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "toollink/errors.hpp"

namespace toollink {

using json = nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = "invalid configuration:";
  for (const std::string& p : problems) msg += "\n  - " + p;
  return msg;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& rel) {
  std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : UsageError(join_problems(problems)), problems_(std::move(problems)) {}

RunConfig RunConfig::load(const std::filesystem::path& config_file) {
  std::ifstream in(config_file);
  if (!in) throw ConfigError({"cannot open config file: " + config_file.string()});

  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError({"config is not valid JSON: " + std::string(e.what())});
  }
  if (!root.is_object()) throw ConfigError({"config root must be an object"});

  const std::filesystem::path base = config_file.parent_path();
  std::vector<std::string> problems;
  RunConfig cfg;

  auto string_field = [&](const json& obj, const char* key,
                          const std::string& where) -> std::string {
    if (!obj.contains(key) || !obj[key].is_string() ||
        obj[key].get<std::string>().empty()) {
      problems.push_back(where + ": missing or empty string field '" + key + "'");
      return {};
    }
    return obj[key].get<std::string>();
  };

  // kb: [{source, path}]
  std::set<std::string> loaded_sources;
  if (!root.contains("kb") || !root["kb"].is_array()) {
    problems.push_back("'kb' must be an array of {source, path} objects");
  } else {
    for (const auto& item : root["kb"]) {
      if (!item.is_object()) {
        problems.push_back("'kb' entries must be objects");
        continue;
      }
      KbSource src;
      src.source = string_field(item, "source", "kb entry");
      std::string path = string_field(item, "path", "kb entry");
      if (src.source.empty() || path.empty()) continue;
      src.path = resolve(base, path);
      if (!std::filesystem::exists(src.path))
        problems.push_back("kb snapshot does not exist: " + src.path.string());
      if (!loaded_sources.insert(src.source).second)
        problems.push_back("kb source '" + src.source + "' listed twice");
      cfg.kb_sources.push_back(std::move(src));
    }
  }

  // fusion: [source...]
  if (root.contains("fusion")) {
    if (!root["fusion"].is_array()) {
      problems.push_back("'fusion' must be an array of source tags");
    } else {
      for (const auto& tag : root["fusion"]) {
        if (!tag.is_string()) {
          problems.push_back("'fusion' entries must be strings");
          continue;
        }
        std::string s = tag.get<std::string>();
        if (!loaded_sources.count(s))
          problems.push_back("fusion references unloaded source '" + s + "'");
        cfg.fusion.push_back(std::move(s));
      }
    }
  }

  // ner: {mode, kb, min_match_length, boundary_mode, stoplist, predictions}
  if (!root.contains("ner") || !root["ner"].is_object()) {
    problems.push_back("'ner' must be an object");
  } else {
    const json& ner = root["ner"];
    std::string mode = "dictionary";
    if (ner.contains("mode")) {
      if (!ner["mode"].is_string())
        problems.push_back("ner.mode must be a string");
      else
        mode = ner["mode"].get<std::string>();
    }
    if (mode == "dictionary") {
      cfg.ner_mode = NerMode::dictionary;
      if (!ner.contains("kb") || !ner["kb"].is_array() || ner["kb"].empty()) {
        problems.push_back("ner.kb must name at least one source in dictionary mode");
      } else {
        for (const auto& tag : ner["kb"]) {
          if (!tag.is_string()) {
            problems.push_back("ner.kb entries must be strings");
            continue;
          }
          std::string s = tag.get<std::string>();
          if (!loaded_sources.count(s))
            problems.push_back("ner.kb references unloaded source '" + s + "'");
          cfg.ner_kb.push_back(std::move(s));
        }
      }
    } else if (mode == "import") {
      cfg.ner_mode = NerMode::import_brat;
      std::string preds = string_field(ner, "predictions", "ner");
      if (!preds.empty()) {
        cfg.predictions_dir = resolve(base, preds);
        if (!std::filesystem::is_directory(cfg.predictions_dir))
          problems.push_back("ner.predictions is not a directory: " +
                             cfg.predictions_dir.string());
      }
    } else {
      problems.push_back("ner.mode must be 'dictionary' or 'import'");
    }

    if (ner.contains("min_match_length")) {
      if (!ner["min_match_length"].is_number_integer() ||
          ner["min_match_length"].get<int>() < 1)
        problems.push_back("ner.min_match_length must be an integer >= 1");
      else
        cfg.ner.min_match_length = ner["min_match_length"].get<int>();
    }
    if (ner.contains("boundary_mode")) {
      if (!ner["boundary_mode"].is_string()) {
        problems.push_back("ner.boundary_mode must be a string");
      } else {
        try {
          cfg.ner.boundary_mode =
              boundary_mode_from_string(ner["boundary_mode"].get<std::string>());
        } catch (const std::exception& e) {
          problems.push_back(e.what());
        }
      }
    }
    if (ner.contains("stoplist") && !ner["stoplist"].is_null()) {
      if (!ner["stoplist"].is_string()) {
        problems.push_back("ner.stoplist must be a path string");
      } else {
        std::filesystem::path stoplist =
            resolve(base, ner["stoplist"].get<std::string>());
        if (!std::filesystem::exists(stoplist))
          problems.push_back("ner.stoplist does not exist: " + stoplist.string());
        else
          cfg.ner.stoplist = load_stoplist(stoplist);
      }
    }
  }

  // link: strategy expression
  if (!root.contains("link") || !root["link"].is_string() ||
      root["link"].get<std::string>().empty()) {
    problems.push_back("'link' must be a strategy expression string");
  } else {
    cfg.strategy_text = root["link"].get<std::string>();
    try {
      cfg.strategy = StrategySpec::parse(cfg.strategy_text);
      validate_strategy(cfg.strategy, loaded_sources, cfg.fusion, problems);
    } catch (const UsageError& e) {
      problems.push_back(e.what());
    }
  }

  auto path_field = [&](const char* key, bool must_exist) {
    std::filesystem::path p;
    if (!root.contains(key) || !root[key].is_string() ||
        root[key].get<std::string>().empty()) {
      problems.push_back(std::string("'") + key + "' must be a path");
      return p;
    }
    p = resolve(base, root[key].get<std::string>());
    if (must_exist && !std::filesystem::exists(p))
      problems.push_back(std::string(key) + " does not exist: " + p.string());
    return p;
  };
  cfg.corpus_manifest = path_field("corpus", true);
  cfg.gold_path = path_field("gold", true);
  cfg.output_dir = path_field("output", false);

  if (root.contains("averaging")) {
    if (!root["averaging"].is_string()) {
      problems.push_back("'averaging' must be a string");
    } else {
      try {
        cfg.averaging = averaging_from_string(root["averaging"].get<std::string>());
      } catch (const std::exception& e) {
        problems.push_back(e.what());
      }
    }
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

}  // namespace toollink
