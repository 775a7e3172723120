#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sptm/rng.hpp"
#include "sptm/skillnet.hpp"

namespace sptm {

struct Hyperparameters {
  double alpha = 0.01;  // symmetric Dirichlet prior on per-document topics
  double beta = 0.01;   // symmetric prior on per-(topic, category) skills
  double delta = 1.0;   // symmetric prior on per-document categories
  double gamma = 0.01;  // Bernoulli rate for synthetic lambda generation only
  int num_topics = 0;
  int num_skills = 0;
  int num_categories = 0;

  void validate() const;
  bool operator==(const Hyperparameters&) const = default;
};

struct TrainConfig {
  int max_iters = 800;
  double tol = 1e-3;  // relative change of the collapsed log-likelihood
  int burn_in = 10;   // sweeps before the stop condition is consulted
  std::uint64_t seed = 0;
};

struct IterationRecord {
  int sweep;
  double log_likelihood;
  double seconds;
};

// Mutable token-topic assignment state of one Gibbs chain. Owned by exactly
// one chain; never shared across threads.
class ModelState {
 public:
  ModelState(std::span<const PseudoDocument> docs, std::span<const int> skill_category,
             const Hyperparameters& hp, std::uint64_t seed);

  int num_docs() const { return static_cast<int>(doc_tokens_.size()); }
  int num_topics() const { return K_; }
  int num_skills() const { return S_; }
  int num_categories() const { return L_; }
  int doc_size(int m) const { return static_cast<int>(doc_tokens_[m].size()); }
  int token_skill(int m, int i) const { return doc_tokens_[m][i]; }
  int topic(int m, int i) const { return z_[m][i]; }
  const std::vector<int>& allowed_topics(int m) const { return allowed_[m]; }
  const std::vector<int>& skill_category() const { return skill_cat_; }
  const Hyperparameters& hyper() const { return hp_; }

  long long skill_topic_count(int s, int j) const { return n_sk_[s * K_ + j]; }
  long long topic_category_count(int j, int l) const { return n_kl_[j * L_ + l]; }
  long long doc_topic_count(int m, int j) const { return n_mk_[m * K_ + j]; }
  long long doc_category_count(int m, int l) const { return n_ml_[m * L_ + l]; }
  long long topic_total(int j) const { return n_k_[j]; }
  long long doc_total(int m) const { return n_m_[m]; }

  // Full conditional of token (m, i) given every other assignment, as a
  // normalized length-K vector; exactly zero on masked topics. The
  // per-document category factor is constant in the topic, so toggling it
  // must not change the normalized result.
  std::vector<double> conditional(int m, int i, bool include_category_factor = true) const;

  // One full pass in fixed (m, i) order, resampling every token.
  void gibbs_sweep(Rng& rng);

  double collapsed_log_likelihood() const;

  // full recount from the assignment vector; throws InconsistentCounts
  void validate_counts() const;

  std::vector<int> assignments_flat() const;

 private:
  friend class TrainedModel;

  Hyperparameters hp_;
  int K_ = 0, S_ = 0, L_ = 0;
  std::vector<int> skill_cat_;
  std::vector<double> category_beta_;  // S_l * beta per category

  std::vector<std::vector<int>> doc_tokens_;  // expanded skill ids
  std::vector<std::vector<int>> z_;           // expanded topic assignments
  std::vector<std::vector<int>> allowed_;     // topics with lambda = 1
  std::vector<long long> n_sk_, n_kl_, n_mk_, n_ml_, n_k_, n_m_;
};

ModelState init_state(std::span<const PseudoDocument> docs, std::span<const int> skill_category,
                      const Hyperparameters& hp, std::uint64_t seed);

// A labeled bag of skills: the unit of held-out evaluation. Job postings and
// pseudo-documents both reduce to this shape.
struct LabeledBag {
  std::vector<int> labels;                  // topic/label indices
  std::vector<std::pair<int, int>> skills;  // (skill id, count)
};

LabeledBag bag_from_posting(const JobPosting& p);
LabeledBag bag_from_document(const PseudoDocument& d);

// Immutable result of training; safe for concurrent read-only queries.
class TrainedModel {
 public:
  Hyperparameters hp;
  int num_topics = 0;
  int num_skills = 0;
  int num_categories = 0;
  int num_documents = 0;

  std::vector<std::int64_t> skill_topic;     // S x K counts
  std::vector<std::int64_t> topic_category;  // K x L counts
  std::vector<int> skill_category;           // S
  std::vector<double> label_prior;           // K, empirical posting fractions

  std::uint64_t dictionary_hash = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double final_log_likelihood = 0.0;

  // derived tables, rebuilt after deserialization
  std::vector<std::int64_t> topic_total;     // K
  std::vector<std::int64_t> category_total;  // L
  std::vector<int> category_sizes;           // L
  std::int64_t total_tokens = 0;

  void rebuild_derived();

  static TrainedModel freeze(const ModelState& state, std::span<const double> label_prior,
                             std::uint64_t dictionary_hash, std::uint64_t seed, int iterations,
                             double final_ll);

  // delta-smoothed corpus-level share of category l among all tokens
  double category_prior(int l) const;

  // P(skill, category | topic): the within-category skill posterior times
  // the corpus-level category prior.
  double topic_skill_posterior(int skill, int topic) const;

  // normalized within-category skill distribution of one topic, over all
  // skills (sums to 1; used by parameter-recovery checks)
  std::vector<double> topic_skill_distribution(int topic) const;

  // Criteria-conditioned popularity: the label-prior-weighted mixture of
  // topic posteriors over the requested labels, each label contributing its
  // bound topic. Sorted descending, ties broken by ascending skill id.
  std::vector<std::pair<int, double>> popularity(std::span<const int> criteria) const;
  std::vector<double> popularity_scores(std::span<const int> criteria) const;  // dense S

  double held_out_log_likelihood(std::span<const LabeledBag> test) const;

  bool operator==(const TrainedModel&) const = default;
};

// Collapsed Gibbs training: sweeps until max_iters or until the relative
// change of the collapsed log-likelihood between consecutive sweeps falls
// below tol. label_prior defaults to the fraction of documents whose lambda
// carries each label; posting-derived pipelines pass posting fractions.
TrainedModel train(std::span<const PseudoDocument> docs, std::span<const int> skill_category,
                   const Hyperparameters& hp, const TrainConfig& cfg,
                   std::vector<IterationRecord>* log = nullptr,
                   const std::vector<double>* label_prior = nullptr,
                   std::uint64_t dictionary_hash = 0);

// Label priors as document fractions: share of docs with lambda_k set.
std::vector<double> document_label_fractions(std::span<const PseudoDocument> docs, int num_topics);
// Label priors as posting fractions: share of postings carrying each label.
std::vector<double> posting_label_fractions(std::span<const JobPosting> postings);

}  // namespace sptm
