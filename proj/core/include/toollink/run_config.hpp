#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "toollink/errors.hpp"
#include "toollink/eval.hpp"
#include "toollink/ner.hpp"
#include "toollink/strategy.hpp"

namespace toollink {

// All configuration problems found in one pass, so a bad file reports every
// mistake before anything runs.
class ConfigError : public UsageError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class NerMode { dictionary, import_brat };

// Declarative run description. Paths are resolved relative to the config
// file location at load time.
struct RunConfig {
  struct KbSource {
    std::string source;
    std::filesystem::path path;
  };

  std::vector<KbSource> kb_sources;
  std::vector<std::string> fusion;  // sources behind kb_bridge(fusion)

  NerMode ner_mode = NerMode::dictionary;
  std::vector<std::string> ner_kb;  // dictionary mode; fused when > 1
  NerConfig ner;
  std::filesystem::path predictions_dir;  // import mode

  StrategySpec strategy;
  std::string strategy_text;

  std::filesystem::path corpus_manifest;
  std::filesystem::path gold_path;
  std::filesystem::path output_dir;
  Averaging averaging = Averaging::micro;

  // Parses and validates; throws ConfigError carrying every problem found.
  static RunConfig load(const std::filesystem::path& config_file);
};

}  // namespace toollink
