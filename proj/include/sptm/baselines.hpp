#pragma once

#include <span>
#include <vector>

#include "sptm/model.hpp"

namespace sptm {

// Frequency baseline: per criteria label, skill mentions normalized into a
// conditional probability table.
struct FrequencyTable {
  int num_labels = 0;
  int num_skills = 0;
  std::vector<double> label_prior;          // fraction of bags carrying the label
  std::vector<std::uint8_t> label_seen;     // at least one bag carried it
  std::vector<std::vector<double>> probs;   // dense S per label (empty if unseen)

  double score(int skill, std::span<const int> labels) const;

  // log floor replaces zero scores so unseen skills never yield -inf
  double held_out_log_likelihood(std::span<const LabeledBag> test,
                                 double floor = 1e-12) const;

  bool operator==(const FrequencyTable&) const = default;
};

FrequencyTable build_frequency_table(std::span<const LabeledBag> bags, int num_labels,
                                     int num_skills);

// Ranked (skill, probability) under one label; mentions counted with
// multiplicity, descending, ties by skill id.
std::vector<std::pair<int, double>> frequency_popularity(std::span<const JobPosting> postings,
                                                         int label, int num_skills);

// Labeled-LDA realized as the single-category degenerate case of the main
// sampler: all skills collapse into one category, which reduces the skill
// factor to the textbook conditional and silences the category machinery.
TrainedModel llda_train(std::span<const PseudoDocument> docs, const Hyperparameters& hp,
                        const TrainConfig& cfg, std::vector<IterationRecord>* log = nullptr,
                        const std::vector<double>* label_prior = nullptr,
                        std::uint64_t dictionary_hash = 0);

}  // namespace sptm
