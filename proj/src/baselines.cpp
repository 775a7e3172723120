#include "sptm/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "sptm/errors.hpp"

namespace sptm {

FrequencyTable build_frequency_table(std::span<const LabeledBag> bags, int num_labels,
                                     int num_skills) {
  FrequencyTable table;
  table.num_labels = num_labels;
  table.num_skills = num_skills;
  table.label_prior.assign(num_labels, 0.0);
  table.label_seen.assign(num_labels, 0);
  table.probs.assign(num_labels, {});

  std::vector<std::vector<long long>> counts(num_labels);
  std::vector<long long> totals(num_labels, 0);
  for (const auto& bag : bags) {
    for (int k : bag.labels) {
      if (k < 0 || k >= num_labels) throw UnknownLabel("label index " + std::to_string(k));
      table.label_prior[k] += 1.0;
      table.label_seen[k] = 1;
      auto& c = counts[k];
      if (c.empty()) c.assign(num_skills, 0);
      for (auto [skill, n] : bag.skills) {
        c[skill] += n;
        totals[k] += n;
      }
    }
  }
  if (!bags.empty())
    for (double& v : table.label_prior) v /= static_cast<double>(bags.size());
  for (int k = 0; k < num_labels; ++k) {
    if (!table.label_seen[k] || totals[k] == 0) continue;
    auto& p = table.probs[k];
    p.assign(num_skills, 0.0);
    for (int s = 0; s < num_skills; ++s)
      p[s] = static_cast<double>(counts[k][s]) / static_cast<double>(totals[k]);
  }
  return table;
}

double FrequencyTable::score(int skill, std::span<const int> labels) const {
  double total_prior = 0.0;
  for (int k : labels) {
    if (k < 0 || k >= num_labels) throw UnknownLabel("label index " + std::to_string(k));
    total_prior += label_prior[k];
  }
  double score = 0.0;
  for (int k : labels) {
    const double w = total_prior > 0.0 ? label_prior[k] / total_prior
                                       : 1.0 / static_cast<double>(labels.size());
    if (!probs[k].empty()) score += w * probs[k][skill];
  }
  return score;
}

double FrequencyTable::held_out_log_likelihood(std::span<const LabeledBag> test,
                                               double floor) const {
  if (test.empty()) throw EmptyTestSet("no test postings");
  double ll = 0.0;
  for (const auto& bag : test) {
    if (bag.labels.empty()) throw EmptyTestSet("test posting without labels");
    if (bag.skills.empty()) throw EmptyTestSet("test posting without skills");
    for (auto [skill, count] : bag.skills) {
      const double s = score(skill, bag.labels);
      ll += static_cast<double>(count) * std::log(std::max(s, floor));
    }
  }
  return ll;
}

std::vector<std::pair<int, double>> frequency_popularity(std::span<const JobPosting> postings,
                                                         int label, int num_skills) {
  if (label < 0 || label >= kNumCriteriaLabels)
    throw UnknownLabel("label index " + std::to_string(label));
  std::vector<long long> counts(num_skills, 0);
  long long total = 0;
  bool seen = false;
  for (const auto& p : postings) {
    if (!p.has_label(label)) continue;
    seen = true;
    for (auto [skill, n] : p.skills) {
      counts[skill] += n;
      total += n;
    }
  }
  if (!seen || total == 0) throw LabelUnseen("no posting carries " + label_slug(label));

  std::vector<std::pair<int, double>> ranked;
  for (int s = 0; s < num_skills; ++s)
    if (counts[s] > 0)
      ranked.emplace_back(s, static_cast<double>(counts[s]) / static_cast<double>(total));
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

TrainedModel llda_train(std::span<const PseudoDocument> docs, const Hyperparameters& hp,
                        const TrainConfig& cfg, std::vector<IterationRecord>* log,
                        const std::vector<double>* label_prior, std::uint64_t dictionary_hash) {
  Hyperparameters flat = hp;
  flat.num_categories = 1;
  const std::vector<int> erased(static_cast<std::size_t>(hp.num_skills), 0);
  return train(docs, erased, flat, cfg, log, label_prior, dictionary_hash);
}

}  // namespace sptm
