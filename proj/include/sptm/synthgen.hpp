#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "sptm/model.hpp"

namespace sptm {

// Everything the forward sampler drew, kept for verification.
struct GroundTruth {
  int num_topics = 0;
  int num_skills = 0;
  int num_categories = 0;
  int num_documents = 0;
  std::vector<int> skill_category;                 // S
  std::vector<std::vector<double>> phi;            // K x S; per-category blocks sum to 1
  std::vector<std::vector<double>> theta;          // M x K, zero off the lambda support
  std::vector<std::vector<double>> pi;             // M x L
  std::vector<std::vector<std::uint8_t>> lambda;   // M x K
  std::vector<std::vector<int>> topic_assign;      // per-token z draws
  std::vector<std::vector<int>> category_assign;   // per-token l draws

  // the skill distribution a topic induces when categories follow their
  // prior mean (uniform): sums to 1 over all skills
  std::vector<double> topic_skill_distribution(int topic) const;
};

struct SyntheticCorpus {
  std::vector<PseudoDocument> docs;
  GroundTruth truth;
};

// Forward-samples a corpus: per-(topic, category) skill distributions from
// Dir(beta), per-document lambda from Bernoulli(gamma) resampled until
// non-empty, pi from Dir(delta), theta from Dir(alpha) on the lambda
// support, then (z, l, w) per token. Deterministic given the seed; each
// document draws from its own substream.
SyntheticCorpus generate_corpus(const Hyperparameters& hp, int num_documents,
                                int tokens_per_doc, std::uint64_t seed,
                                const std::vector<int>* skill_partition = nullptr);

struct RecoveryReport {
  std::vector<double> per_topic_tv;
  double mean_tv = 0.0;
};

// Total-variation distance, per topic, between the generator's skill
// distribution and the trained model's normalized topic-skill distribution.
// Topics are identified by their bound labels, so no permutation matching.
RecoveryReport recovery_error(const TrainedModel& model, const GroundTruth& truth);

void write_truth(std::ostream& out, const GroundTruth& truth);
GroundTruth read_truth(std::istream& in);
GroundTruth read_truth_file(const std::string& path);

}  // namespace sptm
