#include "toollink/eval.hpp"

#include <algorithm>
#include <map>

#include "toollink/errors.hpp"

namespace toollink {

EvalReport EvalReport::from_counts(std::int64_t tp, std::int64_t fp,
                                   std::int64_t fn) {
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

Averaging averaging_from_string(std::string_view s) {
  if (s == "micro") return Averaging::micro;
  if (s == "macro") return Averaging::macro;
  throw UsageError("unknown averaging '" + std::string(s) +
                   "' (expected micro or macro)");
}

EvalReport eval_ner(const std::vector<Mention>& pred,
                    const std::vector<Mention>& gold,
                    const std::set<std::string>& doc_ids) {
  auto check_docs = [&doc_ids](const std::vector<Mention>& mentions,
                               const char* side) {
    for (const Mention& m : mentions)
      if (!doc_ids.count(m.doc_id))
        throw UsageError(std::string(side) + " mention references unknown doc '" +
                         m.doc_id + "'");
  };
  check_docs(pred, "prediction");
  check_docs(gold, "gold");

  using Key = std::tuple<std::string, std::size_t, std::size_t, std::string>;
  std::map<Key, std::int64_t> gold_counts;
  for (const Mention& m : gold)
    ++gold_counts[{m.doc_id, m.start, m.end, m.label}];

  std::int64_t tp = 0;
  for (const Mention& m : pred) {
    auto it = gold_counts.find({m.doc_id, m.start, m.end, m.label});
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++tp;
    }
  }
  const std::int64_t fp = static_cast<std::int64_t>(pred.size()) - tp;
  const std::int64_t fn = static_cast<std::int64_t>(gold.size()) - tp;
  return EvalReport::from_counts(tp, fp, fn);
}

EvalReport eval_links(const std::vector<LinkSet>& pred,
                      const std::vector<GoldLinkSet>& gold,
                      Averaging averaging) {
  std::map<std::string, const LinkSet*> gold_by_wf;
  for (const GoldLinkSet& g : gold) gold_by_wf[g.workflow_id()] = &g;

  std::map<std::string, const LinkSet*> pred_by_wf;
  std::vector<std::string> unknown;
  for (const LinkSet& p : pred) {
    pred_by_wf[p.workflow_id()] = &p;
    if (!gold_by_wf.count(p.workflow_id())) unknown.push_back(p.workflow_id());
  }
  if (!unknown.empty()) {
    std::string msg = "predicted workflows missing from gold:";
    for (const std::string& id : unknown) msg += " " + id;
    throw UsageError(msg);
  }

  EvalReport total;
  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  for (const auto& [wf, gold_set] : gold_by_wf) {
    auto gold_pairs = gold_set->pairs();
    std::set<std::pair<std::string, std::string>> pred_pairs;
    if (auto it = pred_by_wf.find(wf); it != pred_by_wf.end())
      pred_pairs = it->second->pairs();

    std::int64_t tp = 0;
    for (const auto& pair : pred_pairs) tp += gold_pairs.count(pair);
    EvalReport wf_report = EvalReport::from_counts(
        tp, static_cast<std::int64_t>(pred_pairs.size()) - tp,
        static_cast<std::int64_t>(gold_pairs.size()) - tp);
    total.tp += wf_report.tp;
    total.fp += wf_report.fp;
    total.fn += wf_report.fn;
    p_sum += wf_report.precision;
    r_sum += wf_report.recall;
    f_sum += wf_report.f1;
    total.breakdown.emplace_back(wf, std::move(wf_report));
  }

  const EvalReport micro = EvalReport::from_counts(total.tp, total.fp, total.fn);
  total.precision = micro.precision;
  total.recall = micro.recall;
  total.f1 = micro.f1;
  if (averaging == Averaging::macro && !total.breakdown.empty()) {
    const double n = static_cast<double>(total.breakdown.size());
    total.precision = p_sum / n;
    total.recall = r_sum / n;
    total.f1 = f_sum / n;
  }
  return total;
}

}  // namespace toollink
