#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sptm/errors.hpp"
#include "sptm/model.hpp"
#include "sptm/synthgen.hpp"

using namespace sptm;

namespace {

PseudoDocument doc(int central, std::vector<std::pair<int, int>> tokens,
                   std::vector<std::uint8_t> lambda) {
  PseudoDocument d;
  d.central_skill = central;
  std::sort(tokens.begin(), tokens.end());
  d.tokens = std::move(tokens);
  d.lambda = std::move(lambda);
  return d;
}

Hyperparameters hyper(int K, int S, int L, double alpha = 0.5, double beta = 0.3) {
  Hyperparameters hp;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.delta = 1.0;
  hp.gamma = 0.5;
  hp.num_topics = K;
  hp.num_skills = S;
  hp.num_categories = L;
  return hp;
}

// the 2-doc 2-topic fixture used against the enumeration oracle; doc 1 is
// masked to topic 1 only, so the posterior is not symmetric
oracle::TinyCorpus tiny_fixture() {
  oracle::TinyCorpus c;
  c.tokens = {{0, 2}, {0, 1}};
  c.allowed = {{0, 1}, {1}};
  c.skill_category = {0, 0, 1};
  c.num_topics = 2;
  c.num_categories = 2;
  c.hp = hyper(2, 3, 2);
  return c;
}

std::vector<PseudoDocument> tiny_docs() {
  return {doc(0, {{0, 1}, {2, 1}}, {1, 1}), doc(1, {{0, 1}, {1, 1}}, {0, 1})};
}

}  // namespace

TEST_CASE("init assigns uniformly over the lambda support") {
  SUBCASE("singleton support pins every token") {
    std::vector<PseudoDocument> docs = {doc(0, {{0, 5}, {1, 2}}, {0, 0, 0, 1, 0})};
    auto st = init_state(docs, std::vector<int>{0, 0}, hyper(5, 2, 1), 99);
    for (int i = 0; i < st.doc_size(0); ++i) CHECK(st.topic(0, i) == 3);
  }

  SUBCASE("same seed reproduces the assignment vector") {
    std::vector<PseudoDocument> docs = {doc(0, {{0, 40}, {1, 25}}, {1, 1, 0, 1, 1}),
                                        doc(1, {{1, 30}}, {0, 1, 1, 0, 0})};
    const std::vector<int> cats = {0, 0};
    auto a = init_state(docs, cats, hyper(5, 2, 1), 7).assignments_flat();
    auto b = init_state(docs, cats, hyper(5, 2, 1), 7).assignments_flat();
    auto c = init_state(docs, cats, hyper(5, 2, 1), 8).assignments_flat();
    CHECK(a == b);
    CHECK(a != c);
  }

  SUBCASE("two allowed topics split roughly evenly over 10k tokens") {
    std::vector<PseudoDocument> docs = {doc(0, {{0, 10000}}, {0, 1, 0, 0, 1})};
    auto st = init_state(docs, std::vector<int>{0}, hyper(5, 1, 1), 31);
    long hits = 0;
    for (int i = 0; i < st.doc_size(0); ++i) hits += (st.topic(0, i) == 1);
    const double share = static_cast<double>(hits) / 10000.0;
    CHECK(share > 0.45);
    CHECK(share < 0.55);
  }

  SUBCASE("empty corpus and zero-support docs are rejected") {
    CHECK_THROWS_AS(init_state({}, std::vector<int>{0}, hyper(2, 1, 1), 0), EmptyCorpus);
    std::vector<PseudoDocument> docs = {doc(0, {{0, 1}}, {0, 0})};
    CHECK_THROWS_AS(init_state(docs, std::vector<int>{0}, hyper(2, 1, 1), 0), EmptyCorpus);
  }
}

TEST_CASE("conditional respects the mask and normalizes over the support") {
  const auto docs = tiny_docs();
  const std::vector<int> cats = {0, 0, 1};
  auto st = init_state(docs, cats, hyper(2, 3, 2), 4);

  auto p = st.conditional(1, 0);
  CHECK(p[0] == 0.0);  // lambda masks topic 0 exactly
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-12));

  auto q = st.conditional(0, 0);
  CHECK(q[0] + q[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q[0] > 0.0);
  CHECK(q[1] > 0.0);
}

TEST_CASE("symmetric two-topic state yields a 50/50 conditional") {
  // a lone token sees identical decremented counts for both topics
  std::vector<PseudoDocument> docs = {doc(0, {{0, 1}}, {1, 1})};
  const std::vector<int> cats = {0, 0};
  auto st = init_state(docs, cats, hyper(2, 2, 1), 2);
  auto p = st.conditional(0, 0);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("conditional matches the enumerated collapsed joint") {
  const auto fixture = tiny_fixture();
  const auto docs = tiny_docs();
  auto st = init_state(docs, fixture.skill_category, fixture.hp, 6);

  Rng rng(77);
  for (int sweep = 0; sweep < 25; ++sweep) {
    st.gibbs_sweep(rng);
    std::vector<int> z = {st.topic(0, 0), st.topic(0, 1), st.topic(1, 0), st.topic(1, 1)};
    std::size_t slot = 0;
    for (int m = 0; m < 2; ++m)
      for (int i = 0; i < st.doc_size(m); ++i, ++slot) {
        const auto got = st.conditional(m, i);
        const auto expect = oracle::exact_conditional(fixture, z, slot);
        for (int j = 0; j < 2; ++j) CHECK(got[j] == doctest::Approx(expect[j]).epsilon(1e-10));
      }
  }
}

TEST_CASE("the category factor is constant in the topic") {
  Hyperparameters hp = hyper(4, 30, 3, 0.3, 0.05);
  auto corpus = generate_corpus(hp, 25, 20, 5);
  auto st = init_state(corpus.docs, corpus.truth.skill_category, hp, 5);
  Rng rng(6);
  for (int sweep = 0; sweep < 5; ++sweep) {
    st.gibbs_sweep(rng);
    for (int m = 0; m < st.num_docs(); m += 3)
      for (int i = 0; i < st.doc_size(m); i += 2) {
        const auto with = st.conditional(m, i, true);
        const auto without = st.conditional(m, i, false);
        for (int j = 0; j < hp.num_topics; ++j)
          CHECK(std::abs(with[j] - without[j]) < 1e-12);
      }
  }
}

TEST_CASE("sweeps conserve counts and respect masks") {
  Hyperparameters hp = hyper(5, 40, 4, 0.2, 0.1);
  auto corpus = generate_corpus(hp, 30, 25, 12);
  auto st = init_state(corpus.docs, corpus.truth.skill_category, hp, 12);
  Rng rng(12);
  for (int sweep = 0; sweep < 10; ++sweep) {
    st.gibbs_sweep(rng);
    st.validate_counts();
    for (int m = 0; m < st.num_docs(); ++m) {
      long long total = 0;
      for (int j = 0; j < hp.num_topics; ++j) total += st.doc_topic_count(m, j);
      CHECK(total == st.doc_total(m));
      // masked topics hold zero mass
      const auto& allowed = st.allowed_topics(m);
      for (int j = 0; j < hp.num_topics; ++j)
        if (std::find(allowed.begin(), allowed.end(), j) == allowed.end())
          CHECK(st.doc_topic_count(m, j) == 0);
    }
  }
}

TEST_CASE("sweep is a no-op on singleton supports") {
  std::vector<PseudoDocument> docs = {doc(0, {{0, 3}}, {1, 0}), doc(1, {{1, 2}}, {0, 1})};
  const std::vector<int> cats = {0, 1};
  auto st = init_state(docs, cats, hyper(2, 2, 2), 3);
  const auto before = st.assignments_flat();
  Rng rng(3);
  for (int sweep = 0; sweep < 5; ++sweep) st.gibbs_sweep(rng);
  CHECK(st.assignments_flat() == before);
}

TEST_CASE("gibbs marginal matches the exact posterior on the tiny instance") {
  const auto fixture = tiny_fixture();
  const auto docs = tiny_docs();
  const double exact = oracle::exact_marginal(fixture, 0, 0);

  auto st = init_state(docs, fixture.skill_category, fixture.hp, 21);
  Rng rng(Rng::substream(21, 1));
  for (int burn = 0; burn < 1000; ++burn) st.gibbs_sweep(rng);
  long hits = 0;
  const int draws = 20000;
  for (int t = 0; t < draws; ++t) {
    st.gibbs_sweep(rng);
    hits += (st.topic(0, 0) == 0);
  }
  const double empirical = static_cast<double>(hits) / draws;
  CHECK(std::abs(empirical - exact) < 0.05);
  CHECK(exact != doctest::Approx(0.5).epsilon(0.01));  // fixture is intentionally asymmetric
}

TEST_CASE("train stops early and records metadata") {
  Hyperparameters hp = hyper(4, 40, 4, 0.4, 0.05);
  auto corpus = generate_corpus(hp, 60, 40, 9);

  SUBCASE("max_iters 0 freezes the initialization") {
    TrainConfig tc;
    tc.max_iters = 0;
    tc.seed = 9;
    auto model = train(corpus.docs, corpus.truth.skill_category, hp, tc);
    CHECK(model.iterations == 0);
    auto st = init_state(corpus.docs, corpus.truth.skill_category, hp, 9);
    for (int s = 0; s < hp.num_skills; ++s)
      for (int j = 0; j < hp.num_topics; ++j)
        CHECK(model.skill_topic[static_cast<std::size_t>(s) * hp.num_topics + j] ==
              st.skill_topic_count(s, j));
    CHECK(model.final_log_likelihood == doctest::Approx(st.collapsed_log_likelihood()));
  }

  SUBCASE("tolerance terminates before the iteration cap") {
    TrainConfig tc;
    tc.seed = 9;
    std::vector<IterationRecord> log;
    auto model = train(corpus.docs, corpus.truth.skill_category, hp, tc, &log);
    CHECK(model.iterations < tc.max_iters);
    CHECK(static_cast<int>(log.size()) == model.iterations);
    CHECK(log.back().log_likelihood == model.final_log_likelihood);
  }

  SUBCASE("training is deterministic given the seed") {
    TrainConfig tc;
    tc.seed = 44;
    auto a = train(corpus.docs, corpus.truth.skill_category, hp, tc);
    auto b = train(corpus.docs, corpus.truth.skill_category, hp, tc);
    CHECK(a == b);
  }
}

TEST_CASE("training log-likelihood rises in trend") {
  Hyperparameters hp = hyper(6, 60, 6, 0.5, 0.05);
  auto corpus = generate_corpus(hp, 80, 50, 15);
  auto st = init_state(corpus.docs, corpus.truth.skill_category, hp, 15);
  Rng rng(Rng::substream(15, 1));
  std::vector<double> lls;
  for (int sweep = 0; sweep < 60; ++sweep) {
    st.gibbs_sweep(rng);
    lls.push_back(st.collapsed_log_likelihood());
  }
  auto window = [&](int start) {
    double s = 0;
    for (int t = start; t < start + 10; ++t) s += lls[t];
    return s / 10.0;
  };
  for (int start = 0; start + 11 < static_cast<int>(lls.size()); ++start) {
    const double a = window(start);
    const double b = window(start + 1);
    CHECK(b >= a - 2e-4 * std::abs(a));  // tiny slack for plateau noise
  }
  CHECK(window(static_cast<int>(lls.size()) - 10) > lls.front());
}

// hand-set counts: skills {0,1} in category 0, skill 2 in category 1
namespace {
TrainedModel hand_model() {
  TrainedModel m;
  m.hp = hyper(2, 3, 2, 0.5, 0.1);
  m.hp.delta = 0.5;
  m.num_topics = 2;
  m.num_skills = 3;
  m.num_categories = 2;
  m.num_documents = 2;
  m.skill_category = {0, 0, 1};
  // n_sk laid out S x K
  m.skill_topic = {4, 1,   // skill 0
                   2, 3,   // skill 1
                   1, 5};  // skill 2
  // n_kl laid out K x L, consistent with the above
  m.topic_category = {6, 1,   // topic 0
                      4, 5};  // topic 1
  m.label_prior = {0.75, 0.25};
  m.rebuild_derived();
  return m;
}
}  // namespace

TEST_CASE("topic_skill_posterior matches hand arithmetic") {
  const auto m = hand_model();
  const double beta = 0.1, delta = 0.5;
  // P(l=0) = (10 + 0.5) / (16 + 1)
  const double pl0 = (10 + delta) / (16 + 2 * delta);
  const double pl1 = (6 + delta) / (16 + 2 * delta);
  CHECK(m.category_prior(0) == doctest::Approx(pl0).epsilon(1e-12));

  // skill 0, topic 0: within-category share times the category prior
  const double expect00 = (4 + beta) / (6 + 2 * beta) * pl0;
  CHECK(m.topic_skill_posterior(0, 0) == doctest::Approx(expect00).epsilon(1e-12));
  const double expect21 = (5 + beta) / (5 + 1 * beta) * pl1;
  CHECK(m.topic_skill_posterior(2, 1) == doctest::Approx(expect21).epsilon(1e-12));

  CHECK_THROWS_AS(m.topic_skill_posterior(-1, 0), UnknownSkill);
  CHECK_THROWS_AS(m.topic_skill_posterior(3, 0), UnknownSkill);
  CHECK_THROWS_AS(m.topic_skill_posterior(0, 2), TopicOutOfRange);
}

TEST_CASE("a skill never assigned to a topic gets the smoothing floor") {
  auto m = hand_model();
  // zero out skill 1's counts in topic 0 (moving them to topic 1 keeps tables consistent)
  m.skill_topic = {4, 1, 0, 5, 1, 5};
  m.topic_category = {4, 1, 6, 5};
  m.rebuild_derived();
  const double beta = 0.1;
  const double pl0 = (10 + 0.5) / (16 + 1.0);
  // floor = beta * P(l) / (category block mass + S_l * beta)
  CHECK(m.topic_skill_posterior(1, 0) ==
        doctest::Approx(beta / (4 + 2 * beta) * pl0).epsilon(1e-12));
  CHECK(m.topic_skill_posterior(1, 0) > 0.0);
}

TEST_CASE("popularity ranks by the weighted posterior mixture") {
  const auto m = hand_model();

  SUBCASE("singleton criteria reduce to the topic posterior ranking") {
    const std::vector<int> delta = {1};
    auto ranked = m.popularity(delta);
    REQUIRE(ranked.size() == 3);
    std::vector<std::pair<int, double>> by_post;
    for (int s = 0; s < 3; ++s) by_post.emplace_back(s, m.topic_skill_posterior(s, 1));
    std::sort(by_post.begin(), by_post.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (int i = 0; i < 3; ++i) {
      CHECK(ranked[i].first == by_post[i].first);
      CHECK(ranked[i].second == doctest::Approx(by_post[i].second).epsilon(1e-12));
    }
  }

  SUBCASE("positive rescaling of the label prior keeps the order") {
    auto scaled = m;
    for (double& v : scaled.label_prior) v *= 37.5;
    const std::vector<int> delta = {0, 1};
    auto a = m.popularity(delta);
    auto b = scaled.popularity(delta);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].first == b[i].first);
  }

  SUBCASE("two-label mixture matches hand-weighted sums") {
    const std::vector<int> delta = {0, 1};
    auto scores = m.popularity_scores(delta);
    for (int s = 0; s < 3; ++s) {
      const double expect =
          0.75 * m.topic_skill_posterior(s, 0) + 0.25 * m.topic_skill_posterior(s, 1);
      CHECK(scores[s] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("scores are strictly positive and labels validated") {
    const std::vector<int> delta = {0, 1};
    for (auto [skill, score] : m.popularity(delta)) CHECK(score > 0.0);
    CHECK_THROWS_AS(m.popularity(std::vector<int>{}), UnknownLabel);
    CHECK_THROWS_AS(m.popularity(std::vector<int>{7}), UnknownLabel);
  }
}

TEST_CASE("held-out log-likelihood is additive and matches the single-skill case") {
  const auto m = hand_model();
  LabeledBag bag;
  bag.labels = {0};
  bag.skills = {{1, 1}};
  const double single = m.held_out_log_likelihood(std::vector<LabeledBag>{bag});
  CHECK(single == doctest::Approx(std::log(m.topic_skill_posterior(1, 0))).epsilon(1e-12));

  LabeledBag other;
  other.labels = {0, 1};
  other.skills = {{0, 2}, {2, 1}};
  std::vector<LabeledBag> once = {bag, other};
  std::vector<LabeledBag> twice = {bag, other, bag, other};
  CHECK(m.held_out_log_likelihood(twice) ==
        doctest::Approx(2.0 * m.held_out_log_likelihood(once)).epsilon(1e-12));

  CHECK_THROWS_AS(m.held_out_log_likelihood({}), EmptyTestSet);
}
