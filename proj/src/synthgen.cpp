#include "sptm/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "sptm/errors.hpp"

namespace sptm {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::vector<double> GroundTruth::topic_skill_distribution(int topic) const {
  std::vector<double> p(num_skills, 0.0);
  for (int s = 0; s < num_skills; ++s)
    p[s] = phi[topic][s] / static_cast<double>(num_categories);
  return p;
}

SyntheticCorpus generate_corpus(const Hyperparameters& hp, int num_documents,
                                int tokens_per_doc, std::uint64_t seed,
                                const std::vector<int>* skill_partition) {
  hp.validate();
  if (num_documents < 1 || tokens_per_doc < 1)
    throw InvalidDims("need at least one document and one token per document");
  const int K = hp.num_topics, S = hp.num_skills, L = hp.num_categories;
  if (L > S) throw InvalidDims("more categories than skills");

  SyntheticCorpus corpus;
  GroundTruth& truth = corpus.truth;
  truth.num_topics = K;
  truth.num_skills = S;
  truth.num_categories = L;
  truth.num_documents = num_documents;

  if (skill_partition) {
    if (static_cast<int>(skill_partition->size()) != S)
      throw InvalidDims("skill partition size != num_skills");
    truth.skill_category = *skill_partition;
    for (int c : truth.skill_category)
      if (c < 0 || c >= L) throw InvalidDims("partition category out of range");
  } else {
    // even partition: skill s belongs to category s % L
    truth.skill_category.resize(S);
    for (int s = 0; s < S; ++s) truth.skill_category[s] = s % L;
  }

  std::vector<std::vector<int>> category_skills(L);
  for (int s = 0; s < S; ++s) category_skills[truth.skill_category[s]].push_back(s);
  for (int l = 0; l < L; ++l)
    if (category_skills[l].empty()) throw InvalidDims("category " + std::to_string(l) + " has no skills");

  // phi: one Dirichlet draw per (topic, category), laid out over all S slots
  Rng phi_rng(Rng::substream(seed, 0));
  truth.phi.assign(K, std::vector<double>(S, 0.0));
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      const std::vector<double> conc(category_skills[l].size(), hp.beta);
      const auto draw = phi_rng.dirichlet(conc);
      for (std::size_t i = 0; i < category_skills[l].size(); ++i)
        truth.phi[k][category_skills[l][i]] = draw[i];
    }
  }

  truth.theta.resize(num_documents);
  truth.pi.resize(num_documents);
  truth.lambda.resize(num_documents);
  truth.topic_assign.resize(num_documents);
  truth.category_assign.resize(num_documents);
  corpus.docs.resize(num_documents);

  for (int m = 0; m < num_documents; ++m) {
    Rng rng(Rng::substream(seed, static_cast<std::uint64_t>(m) + 1));

    // lambda ~ Bernoulli(gamma), rejected until at least one topic is open
    auto& lam = truth.lambda[m];
    lam.assign(K, 0);
    for (;;) {
      bool any = false;
      for (int k = 0; k < K; ++k) {
        lam[k] = rng.bernoulli(hp.gamma) ? 1 : 0;
        any = any || lam[k];
      }
      if (any) break;
    }

    std::vector<double> pi_conc(L, hp.delta);
    truth.pi[m] = rng.dirichlet(pi_conc);

    std::vector<double> theta_conc(K, 0.0);
    for (int k = 0; k < K; ++k)
      if (lam[k]) theta_conc[k] = hp.alpha;
    truth.theta[m] = rng.dirichlet(theta_conc);

    auto& zs = truth.topic_assign[m];
    auto& ls = truth.category_assign[m];
    zs.resize(tokens_per_doc);
    ls.resize(tokens_per_doc);
    std::map<int, int> counts;
    std::vector<double> weights;
    for (int i = 0; i < tokens_per_doc; ++i) {
      const int z = static_cast<int>(rng.categorical(truth.theta[m]));
      const int l = static_cast<int>(rng.categorical(truth.pi[m]));
      const auto& skills = category_skills[l];
      weights.resize(skills.size());
      for (std::size_t t = 0; t < skills.size(); ++t)
        weights[t] = truth.phi[z][skills[t]];
      const int w = skills[rng.categorical(weights)];
      zs[i] = z;
      ls[i] = l;
      ++counts[w];
    }

    auto& doc = corpus.docs[m];
    doc.central_skill = m;  // synthetic documents have no host graph
    doc.tokens.assign(counts.begin(), counts.end());
    doc.lambda = lam;
  }
  return corpus;
}

RecoveryReport recovery_error(const TrainedModel& model, const GroundTruth& truth) {
  if (model.num_topics != truth.num_topics || model.num_skills != truth.num_skills ||
      model.num_categories != truth.num_categories)
    throw DimMismatch("model and truth dimensions differ");
  if (model.skill_category != truth.skill_category)
    throw DimMismatch("model and truth use different skill partitions");

  RecoveryReport report;
  report.per_topic_tv.resize(model.num_topics, 0.0);
  for (int j = 0; j < model.num_topics; ++j) {
    const auto estimated = model.topic_skill_distribution(j);
    const auto actual = truth.topic_skill_distribution(j);
    double tv = 0.0;
    for (int s = 0; s < model.num_skills; ++s) tv += std::abs(estimated[s] - actual[s]);
    report.per_topic_tv[j] = 0.5 * tv;
    report.mean_tv += report.per_topic_tv[j];
  }
  report.mean_tv /= static_cast<double>(model.num_topics);
  return report;
}

void write_truth(std::ostream& out, const GroundTruth& truth) {
  ordered_json rec;
  rec["num_topics"] = truth.num_topics;
  rec["num_skills"] = truth.num_skills;
  rec["num_categories"] = truth.num_categories;
  rec["num_documents"] = truth.num_documents;
  rec["skill_category"] = truth.skill_category;
  rec["phi"] = truth.phi;
  rec["theta"] = truth.theta;
  rec["pi"] = truth.pi;
  json lambda = json::array();
  for (const auto& lam : truth.lambda) lambda.push_back(std::vector<int>(lam.begin(), lam.end()));
  rec["lambda"] = std::move(lambda);
  rec["topic_assign"] = truth.topic_assign;
  rec["category_assign"] = truth.category_assign;
  out << rec.dump() << '\n';
}

GroundTruth read_truth(std::istream& in) {
  json rec = json::parse(in, nullptr, false);
  if (rec.is_discarded() || !rec.is_object()) throw MalformedRecord("bad truth file");
  GroundTruth truth;
  truth.num_topics = rec.at("num_topics").get<int>();
  truth.num_skills = rec.at("num_skills").get<int>();
  truth.num_categories = rec.at("num_categories").get<int>();
  truth.num_documents = rec.at("num_documents").get<int>();
  truth.skill_category = rec.at("skill_category").get<std::vector<int>>();
  truth.phi = rec.at("phi").get<std::vector<std::vector<double>>>();
  truth.theta = rec.at("theta").get<std::vector<std::vector<double>>>();
  truth.pi = rec.at("pi").get<std::vector<std::vector<double>>>();
  for (const auto& lam : rec.at("lambda")) {
    const auto v = lam.get<std::vector<int>>();
    truth.lambda.emplace_back(v.begin(), v.end());
  }
  truth.topic_assign = rec.at("topic_assign").get<std::vector<std::vector<int>>>();
  truth.category_assign = rec.at("category_assign").get<std::vector<std::vector<int>>>();
  return truth;
}

GroundTruth read_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedRecord("cannot open truth file: " + path);
  return read_truth(in);
}

}  // namespace sptm
