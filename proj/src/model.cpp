#include "sptm/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sptm/errors.hpp"

namespace sptm {

void Hyperparameters::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(delta > 0.0))
    throw InvalidDims("alpha, beta, delta must be positive");
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw InvalidDims("gamma must lie in (0, 1)");
  if (num_topics < 1 || num_skills < 1 || num_categories < 1)
    throw InvalidDims("num_topics, num_skills, num_categories must be >= 1");
}

ModelState::ModelState(std::span<const PseudoDocument> docs,
                       std::span<const int> skill_category, const Hyperparameters& hp,
                       std::uint64_t seed)
    : hp_(hp), K_(hp.num_topics), S_(hp.num_skills), L_(hp.num_categories) {
  hp_.validate();
  if (docs.empty()) throw EmptyCorpus("no documents to train on");
  if (static_cast<int>(skill_category.size()) != S_)
    throw InvalidDims("skill_category size != num_skills");
  skill_cat_.assign(skill_category.begin(), skill_category.end());

  category_beta_.assign(L_, 0.0);
  for (int s = 0; s < S_; ++s) {
    const int c = skill_cat_[s];
    if (c < 0 || c >= L_) throw InvalidDims("skill category id out of range");
    category_beta_[c] += hp_.beta;
  }

  const std::size_t M = docs.size();
  doc_tokens_.resize(M);
  z_.resize(M);
  allowed_.resize(M);
  n_sk_.assign(static_cast<std::size_t>(S_) * K_, 0);
  n_kl_.assign(static_cast<std::size_t>(K_) * L_, 0);
  n_mk_.assign(M * K_, 0);
  n_ml_.assign(M * L_, 0);
  n_k_.assign(K_, 0);
  n_m_.assign(M, 0);

  Rng rng(Rng::substream(seed, 0));
  for (std::size_t m = 0; m < M; ++m) {
    const auto& doc = docs[m];
    if (static_cast<int>(doc.lambda.size()) != K_)
      throw InvalidDims("document lambda size != num_topics");
    allowed_[m] = doc.lambda_indices();
    if (allowed_[m].empty()) throw EmptyCorpus("document with empty label support");

    auto& toks = doc_tokens_[m];
    for (auto [skill, count] : doc.tokens) {
      if (skill < 0 || skill >= S_) throw InvalidDims("token skill id out of range");
      if (count < 0) throw InvalidDims("negative token multiplicity");
      for (int i = 0; i < count; ++i) toks.push_back(skill);
    }
    if (toks.empty()) throw EmptyCorpus("document without tokens");

    auto& zs = z_[m];
    zs.resize(toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const int j = allowed_[m][rng.index(allowed_[m].size())];
      zs[i] = j;
      const int s = toks[i];
      const int c = skill_cat_[s];
      ++n_sk_[static_cast<std::size_t>(s) * K_ + j];
      ++n_kl_[static_cast<std::size_t>(j) * L_ + c];
      ++n_mk_[m * K_ + j];
      ++n_ml_[m * L_ + c];
      ++n_k_[j];
      ++n_m_[m];
    }
  }
}

ModelState init_state(std::span<const PseudoDocument> docs, std::span<const int> skill_category,
                      const Hyperparameters& hp, std::uint64_t seed) {
  return ModelState(docs, skill_category, hp, seed);
}

std::vector<double> ModelState::conditional(int m, int i, bool include_category_factor) const {
  const int s = doc_tokens_[m][i];
  const int c = skill_cat_[s];
  const int old = z_[m][i];
  const double alpha_mass = hp_.alpha * static_cast<double>(allowed_[m].size());
  const double doc_denom =
      static_cast<double>(n_m_[m]) - 1.0 + alpha_mass;

  std::vector<double> p(K_, 0.0);
  double total = 0.0;
  for (int j : allowed_[m]) {
    const auto nsk = n_sk_[static_cast<std::size_t>(s) * K_ + j] - (j == old ? 1 : 0);
    const auto nkl = n_kl_[static_cast<std::size_t>(j) * L_ + c] - (j == old ? 1 : 0);
    const auto nmk = n_mk_[static_cast<std::size_t>(m) * K_ + j] - (j == old ? 1 : 0);
    double v = (static_cast<double>(nsk) + hp_.beta) /
               (static_cast<double>(nkl) + category_beta_[c]);
    v *= (static_cast<double>(nmk) + hp_.alpha) / doc_denom;
    if (include_category_factor) {
      const auto nml = n_ml_[static_cast<std::size_t>(m) * L_ + c] - 1;
      v *= (static_cast<double>(nml) + hp_.delta) /
           (static_cast<double>(n_m_[m]) - 1.0 + hp_.delta * L_);
    }
    p[j] = v;
    total += v;
  }
  for (int j : allowed_[m]) p[j] /= total;
  return p;
}

void ModelState::gibbs_sweep(Rng& rng) {
  std::vector<double> w;
  for (std::size_t m = 0; m < doc_tokens_.size(); ++m) {
    const auto& al = allowed_[m];
    w.resize(al.size());
    for (std::size_t i = 0; i < doc_tokens_[m].size(); ++i) {
      const int s = doc_tokens_[m][i];
      const int c = skill_cat_[s];
      const int old = z_[m][i];

      --n_sk_[static_cast<std::size_t>(s) * K_ + old];
      --n_kl_[static_cast<std::size_t>(old) * L_ + c];
      --n_mk_[m * K_ + old];
      --n_k_[old];

      double total = 0.0;
      for (std::size_t a = 0; a < al.size(); ++a) {
        const int j = al[a];
        const double v =
            (static_cast<double>(n_sk_[static_cast<std::size_t>(s) * K_ + j]) + hp_.beta) /
            (static_cast<double>(n_kl_[static_cast<std::size_t>(j) * L_ + c]) +
             category_beta_[c]) *
            (static_cast<double>(n_mk_[m * K_ + j]) + hp_.alpha);
        w[a] = v;
        total += v;
      }
      double u = rng.uniform() * total;
      std::size_t pick = al.size() - 1;
      for (std::size_t a = 0; a + 1 < al.size(); ++a) {
        u -= w[a];
        if (u < 0.0) {
          pick = a;
          break;
        }
      }
      const int j = al[pick];
      z_[m][i] = j;
      ++n_sk_[static_cast<std::size_t>(s) * K_ + j];
      ++n_kl_[static_cast<std::size_t>(j) * L_ + c];
      ++n_mk_[m * K_ + j];
      ++n_k_[j];
    }
  }
}

double ModelState::collapsed_log_likelihood() const {
  double ll = 0.0;
  // phi blocks: one Dirichlet-multinomial per (topic, category)
  for (int j = 0; j < K_; ++j)
    for (int l = 0; l < L_; ++l)
      ll += std::lgamma(category_beta_[l]) -
            std::lgamma(static_cast<double>(n_kl_[static_cast<std::size_t>(j) * L_ + l]) +
                        category_beta_[l]);
  const double lg_beta = std::lgamma(hp_.beta);
  for (int s = 0; s < S_; ++s)
    for (int j = 0; j < K_; ++j) {
      const auto n = n_sk_[static_cast<std::size_t>(s) * K_ + j];
      if (n > 0) ll += std::lgamma(static_cast<double>(n) + hp_.beta) - lg_beta;
    }
  // theta: per-document Dirichlet-multinomial restricted to the lambda support
  const double lg_alpha = std::lgamma(hp_.alpha);
  for (std::size_t m = 0; m < doc_tokens_.size(); ++m) {
    const double mass = hp_.alpha * static_cast<double>(allowed_[m].size());
    ll += std::lgamma(mass) - std::lgamma(static_cast<double>(n_m_[m]) + mass);
    for (int j : allowed_[m])
      ll += std::lgamma(static_cast<double>(n_mk_[m * K_ + j]) + hp_.alpha) - lg_alpha;
  }
  // pi: per-document category Dirichlet-multinomial (constant in z)
  const double lg_delta = std::lgamma(hp_.delta);
  for (std::size_t m = 0; m < doc_tokens_.size(); ++m) {
    ll += std::lgamma(hp_.delta * L_) -
          std::lgamma(static_cast<double>(n_m_[m]) + hp_.delta * L_);
    for (int l = 0; l < L_; ++l) {
      const auto n = n_ml_[m * L_ + l];
      if (n > 0) ll += std::lgamma(static_cast<double>(n) + hp_.delta) - lg_delta;
    }
  }
  return ll;
}

void ModelState::validate_counts() const {
  std::vector<long long> sk(n_sk_.size(), 0), kl(n_kl_.size(), 0), mk(n_mk_.size(), 0),
      ml(n_ml_.size(), 0), k(n_k_.size(), 0), mtot(n_m_.size(), 0);
  for (std::size_t m = 0; m < doc_tokens_.size(); ++m) {
    for (std::size_t i = 0; i < doc_tokens_[m].size(); ++i) {
      const int s = doc_tokens_[m][i];
      const int j = z_[m][i];
      const int c = skill_cat_[s];
      if (j < 0 || j >= K_) throw InconsistentCounts("assignment out of range");
      ++sk[static_cast<std::size_t>(s) * K_ + j];
      ++kl[static_cast<std::size_t>(j) * L_ + c];
      ++mk[m * K_ + j];
      ++ml[m * L_ + c];
      ++k[j];
      ++mtot[m];
    }
  }
  if (sk != n_sk_ || kl != n_kl_ || mk != n_mk_ || ml != n_ml_ || k != n_k_ || mtot != n_m_)
    throw InconsistentCounts("count tables disagree with the assignment vector");
}

std::vector<int> ModelState::assignments_flat() const {
  std::vector<int> out;
  for (const auto& zs : z_) out.insert(out.end(), zs.begin(), zs.end());
  return out;
}

LabeledBag bag_from_posting(const JobPosting& p) { return {p.labels, p.skills}; }

LabeledBag bag_from_document(const PseudoDocument& d) {
  return {d.lambda_indices(), d.tokens};
}

void TrainedModel::rebuild_derived() {
  topic_total.assign(num_topics, 0);
  category_total.assign(num_categories, 0);
  category_sizes.assign(num_categories, 0);
  total_tokens = 0;
  for (int s = 0; s < num_skills; ++s) ++category_sizes[skill_category[s]];
  for (int j = 0; j < num_topics; ++j)
    for (int l = 0; l < num_categories; ++l) {
      const auto n = topic_category[static_cast<std::size_t>(j) * num_categories + l];
      topic_total[j] += n;
      category_total[l] += n;
      total_tokens += n;
    }
}

TrainedModel TrainedModel::freeze(const ModelState& state, std::span<const double> label_prior,
                                  std::uint64_t dictionary_hash, std::uint64_t seed,
                                  int iterations, double final_ll) {
  TrainedModel model;
  model.hp = state.hyper();
  model.num_topics = state.num_topics();
  model.num_skills = state.num_skills();
  model.num_categories = state.num_categories();
  model.num_documents = state.num_docs();
  model.skill_topic.assign(state.n_sk_.begin(), state.n_sk_.end());
  model.topic_category.assign(state.n_kl_.begin(), state.n_kl_.end());
  model.skill_category = state.skill_category();
  model.label_prior.assign(label_prior.begin(), label_prior.end());
  model.dictionary_hash = dictionary_hash;
  model.seed = seed;
  model.iterations = iterations;
  model.final_log_likelihood = final_ll;
  model.rebuild_derived();
  return model;
}

double TrainedModel::category_prior(int l) const {
  return (static_cast<double>(category_total[l]) + hp.delta) /
         (static_cast<double>(total_tokens) + hp.delta * num_categories);
}

double TrainedModel::topic_skill_posterior(int skill, int topic) const {
  if (skill < 0 || skill >= num_skills)
    throw UnknownSkill("skill id " + std::to_string(skill));
  if (topic < 0 || topic >= num_topics)
    throw TopicOutOfRange("topic " + std::to_string(topic) + " of " + std::to_string(num_topics));
  const int c = skill_category[skill];
  const double within =
      (static_cast<double>(skill_topic[static_cast<std::size_t>(skill) * num_topics + topic]) +
       hp.beta) /
      (static_cast<double>(topic_category[static_cast<std::size_t>(topic) * num_categories + c]) +
       hp.beta * category_sizes[c]);
  return within * category_prior(c);
}

std::vector<double> TrainedModel::topic_skill_distribution(int topic) const {
  if (topic < 0 || topic >= num_topics)
    throw TopicOutOfRange("topic " + std::to_string(topic) + " of " + std::to_string(num_topics));
  std::vector<double> p(num_skills, 0.0);
  double total = 0.0;
  for (int s = 0; s < num_skills; ++s) {
    const int c = skill_category[s];
    p[s] =
        (static_cast<double>(skill_topic[static_cast<std::size_t>(s) * num_topics + topic]) +
         hp.beta) /
        (static_cast<double>(topic_category[static_cast<std::size_t>(topic) * num_categories + c]) +
         hp.beta * category_sizes[c]);
    total += p[s];
  }
  for (double& v : p) v /= total;
  return p;
}

namespace {
std::vector<double> normalized_label_weights(std::span<const int> criteria,
                                             const std::vector<double>& prior, int K) {
  if (criteria.empty()) throw UnknownLabel("empty criteria set");
  std::vector<double> w(criteria.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int k = criteria[i];
    if (k < 0 || k >= K) throw UnknownLabel("label index " + std::to_string(k));
    w[i] = prior[k];
    total += w[i];
  }
  if (total > 0.0) {
    for (double& v : w) v /= total;
  } else {
    for (double& v : w) v = 1.0 / static_cast<double>(criteria.size());
  }
  return w;
}
}  // namespace

std::vector<double> TrainedModel::popularity_scores(std::span<const int> criteria) const {
  const auto weights = normalized_label_weights(criteria, label_prior, num_topics);
  std::vector<double> scores(num_skills, 0.0);
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int topic = criteria[i];  // each label is bound to its own topic
    if (weights[i] == 0.0) continue;
    for (int s = 0; s < num_skills; ++s)
      scores[s] += weights[i] * topic_skill_posterior(s, topic);
  }
  return scores;
}

std::vector<std::pair<int, double>> TrainedModel::popularity(std::span<const int> criteria) const {
  const auto scores = popularity_scores(criteria);
  std::vector<std::pair<int, double>> ranked(num_skills);
  for (int s = 0; s < num_skills; ++s) ranked[s] = {s, scores[s]};
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

double TrainedModel::held_out_log_likelihood(std::span<const LabeledBag> test) const {
  if (test.empty()) throw EmptyTestSet("no test postings");
  double ll = 0.0;
  for (const auto& bag : test) {
    if (bag.labels.empty()) throw EmptyTestSet("test posting without labels");
    if (bag.skills.empty()) throw EmptyTestSet("test posting without skills");
    const auto weights = normalized_label_weights(bag.labels, label_prior, num_topics);
    for (auto [skill, count] : bag.skills) {
      double score = 0.0;
      for (std::size_t i = 0; i < bag.labels.size(); ++i)
        score += weights[i] * topic_skill_posterior(skill, bag.labels[i]);
      ll += static_cast<double>(count) * std::log(score);
    }
  }
  return ll;
}

std::vector<double> document_label_fractions(std::span<const PseudoDocument> docs,
                                             int num_topics) {
  std::vector<double> frac(num_topics, 0.0);
  if (docs.empty()) return frac;
  for (const auto& d : docs)
    for (int k = 0; k < num_topics; ++k)
      if (d.lambda[k]) frac[k] += 1.0;
  for (double& v : frac) v /= static_cast<double>(docs.size());
  return frac;
}

std::vector<double> posting_label_fractions(std::span<const JobPosting> postings) {
  std::vector<double> frac(kNumCriteriaLabels, 0.0);
  if (postings.empty()) return frac;
  for (const auto& p : postings)
    for (int gi : p.labels) frac[gi] += 1.0;
  for (double& v : frac) v /= static_cast<double>(postings.size());
  return frac;
}

TrainedModel train(std::span<const PseudoDocument> docs, std::span<const int> skill_category,
                   const Hyperparameters& hp, const TrainConfig& cfg,
                   std::vector<IterationRecord>* log, const std::vector<double>* label_prior,
                   std::uint64_t dictionary_hash) {
  ModelState state(docs, skill_category, hp, cfg.seed);
  Rng rng(Rng::substream(cfg.seed, 1));

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  double prev_ll = state.collapsed_log_likelihood();
  double ll = prev_ll;
  int sweeps = 0;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    state.gibbs_sweep(rng);
    ll = state.collapsed_log_likelihood();
    if (log) log->push_back({it, ll, elapsed()});
    sweeps = it;
    const double rel = std::abs(ll - prev_ll) / std::max(std::abs(prev_ll), 1e-300);
    prev_ll = ll;
    if (it > cfg.burn_in && rel < cfg.tol) break;
  }

  std::vector<double> prior =
      label_prior ? *label_prior : document_label_fractions(docs, hp.num_topics);
  if (static_cast<int>(prior.size()) != hp.num_topics)
    throw InvalidDims("label prior size != num_topics");
  return TrainedModel::freeze(state, prior, dictionary_hash, cfg.seed, sweeps, ll);
}

}  // namespace sptm
