#include "toollink/strategy.hpp"

#include <algorithm>
#include <cctype>

#include "toollink/errors.hpp"

namespace toollink {

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  StrategySpec parse() {
    StrategySpec spec = parse_spec();
    skip_spaces();
    if (pos_ != text_.size())
      fail("trailing input after strategy expression");
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw UsageError("strategy '" + std::string(text_) + "': " + what +
                     " (at offset " + std::to_string(pos_) + ")");
  }

  void skip_spaces() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_spaces();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_spaces();
    std::size_t begin = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '-' || text_[pos_] == '.'))
      ++pos_;
    if (pos_ == begin) fail("expected a name");
    return std::string(text_.substr(begin, pos_ - begin));
  }

  int integer() {
    skip_spaces();
    std::size_t begin = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == begin) fail("expected an integer");
    return std::stoi(std::string(text_.substr(begin, pos_ - begin)));
  }

  StrategySpec parse_spec() {
    std::string name = ident();
    StrategySpec spec;
    if (name == "exact") {
      spec.kind = StrategySpec::Kind::exact;
      if (eat('(')) {
        if (!eat(')')) fail("exact takes no arguments");
      }
      return spec;
    }
    if (name == "levenshtein") {
      spec.kind = StrategySpec::Kind::levenshtein;
      if (!eat('(')) fail("levenshtein requires a threshold, e.g. levenshtein(1)");
      spec.param = integer();
      if (!eat(')')) fail("expected ')'");
      return spec;
    }
    if (name == "prefix_suffix") {
      spec.kind = StrategySpec::Kind::prefix_suffix;
      spec.param = 3;
      if (eat('(')) {
        spec.param = integer();
        if (!eat(')')) fail("expected ')'");
      }
      return spec;
    }
    if (name == "kb_bridge") {
      spec.kind = StrategySpec::Kind::kb_bridge;
      if (!eat('(')) fail("kb_bridge requires at least one source");
      spec.sources.push_back(ident());
      while (eat(',')) spec.sources.push_back(ident());
      if (!eat(')')) fail("expected ')'");
      return spec;
    }
    if (name == "combine") {
      spec.kind = StrategySpec::Kind::combine;
      if (!eat('(')) fail("combine requires arguments");
      spec.children.push_back(parse_spec());
      while (eat(',')) spec.children.push_back(parse_spec());
      if (!eat(')')) fail("expected ')'");
      if (spec.children.empty()) fail("combine requires at least one strategy");
      return spec;
    }
    fail("unknown strategy '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

}  // namespace

StrategySpec StrategySpec::parse(std::string_view text) {
  return SpecParser(text).parse();
}

std::string StrategySpec::to_string() const {
  switch (kind) {
    case Kind::exact:
      return "exact";
    case Kind::levenshtein:
      return "levenshtein(" + std::to_string(param) + ")";
    case Kind::prefix_suffix:
      return "prefix_suffix(" + std::to_string(param) + ")";
    case Kind::kb_bridge:
      return "kb_bridge(" + join(sources, ",") + ")";
    case Kind::combine: {
      std::vector<std::string> parts;
      parts.reserve(children.size());
      for (const StrategySpec& child : children) parts.push_back(child.to_string());
      return "combine(" + join(parts, ", ") + ")";
    }
  }
  return {};
}

void KbRegistry::add(KnowledgeBase kb) {
  std::string source = kb.source();
  if (!kbs_.emplace(source, std::move(kb)).second)
    throw UsageError("knowledge base source '" + source + "' loaded twice");
}

bool KbRegistry::has(const std::string& source) const {
  return kbs_.count(source) > 0;
}

const KnowledgeBase* KbRegistry::find(const std::string& source) const {
  auto it = kbs_.find(source);
  return it == kbs_.end() ? nullptr : &it->second;
}

std::vector<std::string> KbRegistry::sources() const {
  std::vector<std::string> out;
  out.reserve(kbs_.size());
  for (const auto& [source, kb] : kbs_) out.push_back(source);
  return out;
}

const FusedKb& KbRegistry::fusion(const std::vector<std::string>& source_tags) {
  if (source_tags.empty()) throw UsageError("fusion of zero sources");
  std::vector<std::string> sorted = source_tags;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::string key = join(sorted, "+");
  auto it = fusions_.find(key);
  if (it != fusions_.end()) return *it->second;

  std::vector<const KnowledgeBase*> kbs;
  for (const std::string& tag : sorted) {
    const KnowledgeBase* kb = find(tag);
    if (!kb) throw UsageError("unknown knowledge base source '" + tag + "'");
    kbs.push_back(kb);
  }
  auto fused = std::make_unique<FusedKb>(fuse(kbs));
  return *fusions_.emplace(key, std::move(fused)).first->second;
}

const KnowledgeBase& KbRegistry::bridge_kb(
    const std::vector<std::string>& source_tags) {
  if (source_tags.empty()) throw UsageError("kb_bridge with zero sources");
  if (source_tags.size() == 1) {
    const KnowledgeBase* kb = find(source_tags.front());
    if (!kb)
      throw UsageError("unknown knowledge base source '" + source_tags.front() +
                       "'");
    return *kb;
  }
  return fusion(source_tags).kb;
}

namespace {

// The token kb_bridge(fusion) names the configured fusion list when one is
// present; otherwise it falls through to a source literally tagged "fusion"
// (for example a prebuilt fused index).
std::vector<std::string> resolve_bridge_sources(
    const std::vector<std::string>& sources,
    const std::vector<std::string>& fusion_tags) {
  if (sources.size() == 1 && sources.front() == "fusion" && !fusion_tags.empty())
    return fusion_tags;
  return sources;
}

}  // namespace

void validate_strategy(const StrategySpec& spec,
                       const std::set<std::string>& loaded_sources,
                       const std::vector<std::string>& fusion_tags,
                       std::vector<std::string>& messages) {
  switch (spec.kind) {
    case StrategySpec::Kind::exact:
      break;
    case StrategySpec::Kind::levenshtein:
      if (spec.param < 0)
        messages.push_back("levenshtein threshold must be >= 0");
      break;
    case StrategySpec::Kind::prefix_suffix:
      if (spec.param < 1)
        messages.push_back("prefix_suffix overlap must be >= 1");
      break;
    case StrategySpec::Kind::kb_bridge: {
      std::vector<std::string> resolved =
          resolve_bridge_sources(spec.sources, fusion_tags);
      for (const std::string& s : resolved) {
        if (loaded_sources.count(s)) continue;
        if (s == "fusion")
          messages.push_back(
              "kb_bridge(fusion) requires a fusion source list or a loaded "
              "source tagged 'fusion'");
        else
          messages.push_back("strategy references unloaded source '" + s + "'");
      }
      break;
    }
    case StrategySpec::Kind::combine:
      for (const StrategySpec& child : spec.children)
        validate_strategy(child, loaded_sources, fusion_tags, messages);
      break;
  }
}

LinkSet execute_strategy(const StrategySpec& spec, const std::string& workflow_id,
                         const std::set<std::string>& article_tools,
                         const std::set<std::string>& code_tools,
                         KbRegistry& registry,
                         const std::vector<std::string>& fusion_tags) {
  switch (spec.kind) {
    case StrategySpec::Kind::exact:
      return link_exact(workflow_id, article_tools, code_tools);
    case StrategySpec::Kind::levenshtein:
      return link_levenshtein(workflow_id, article_tools, code_tools, spec.param);
    case StrategySpec::Kind::prefix_suffix:
      return link_prefix_suffix(workflow_id, article_tools, code_tools, spec.param);
    case StrategySpec::Kind::kb_bridge: {
      const KnowledgeBase& kb = registry.bridge_kb(
          resolve_bridge_sources(spec.sources, fusion_tags));
      return link_kb_bridge(workflow_id, article_tools, code_tools, kb);
    }
    case StrategySpec::Kind::combine: {
      std::vector<LinkSet> parts;
      parts.reserve(spec.children.size());
      for (const StrategySpec& child : spec.children)
        parts.push_back(execute_strategy(child, workflow_id, article_tools,
                                         code_tools, registry, fusion_tags));
      return combine(parts);
    }
  }
  throw UsageError("unreachable strategy kind");
}

}  // namespace toollink
