#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "sptm/criteria.hpp"
#include "sptm/errors.hpp"
#include "sptm/skillnet.hpp"

using namespace sptm;

namespace {

SkillDictionary grid_dict(int skills, int categories) {
  SkillDictionary d;
  for (int s = 0; s < skills; ++s)
    d.add_skill("skill_" + std::to_string(s), "cat_" + std::to_string(s % categories));
  return d;
}

JobPosting posting(std::string id, std::vector<std::pair<int, int>> skills,
                   std::vector<int> labels = {}) {
  JobPosting p;
  p.post_id = std::move(id);
  std::sort(skills.begin(), skills.end());
  p.skills = std::move(skills);
  std::sort(labels.begin(), labels.end());
  p.labels = std::move(labels);
  return p;
}

}  // namespace

TEST_CASE("edge weights count postings, not mention pairs") {
  std::vector<JobPosting> ps = {
      posting("1", {{0, 1}, {1, 1}}),
      posting("2", {{0, 1}, {1, 1}}),
      posting("3", {{2, 1}}),            // single skill, no edges
      posting("4", {{0, 2}, {1, 1}}),    // multiplicity 2 of skill 0 still adds 1
  };
  auto net = build_skillnet(ps, 4);
  CHECK(net.weight(0, 1) == 3);
  CHECK(net.weight(1, 0) == 3);
  CHECK(net.weight(0, 2) == 0);
  CHECK(net.edges.size() == 1);
  for (const auto& [key, w] : net.edges) {
    CHECK(key.first < key.second);  // no self loops, stored once
    CHECK(w >= 1);
  }
}

TEST_CASE("edge weight is bounded by each endpoint's posting count") {
  std::mt19937 gen(3);
  std::vector<JobPosting> ps;
  const int S = 12;
  for (int i = 0; i < 60; ++i) {
    std::vector<std::pair<int, int>> sk;
    for (int s = 0; s < S; ++s)
      if (gen() % 4 == 0) sk.emplace_back(s, 1 + static_cast<int>(gen() % 3));
    if (sk.empty()) sk.emplace_back(static_cast<int>(gen() % S), 1);
    ps.push_back(posting(std::to_string(i), std::move(sk)));
  }
  auto net = build_skillnet(ps, S);
  std::vector<int> containing(S, 0);
  for (const auto& p : ps)
    for (auto [s, n] : p.skills) ++containing[s];
  for (const auto& [key, w] : net.edges)
    CHECK(w <= std::min(containing[key.first], containing[key.second]));
}

TEST_CASE("skillnet is invariant to posting order") {
  std::mt19937 gen(17);
  std::vector<JobPosting> ps;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::pair<int, int>> sk;
    for (int s = 0; s < 8; ++s)
      if (gen() % 3 == 0) sk.emplace_back(s, 1);
    if (sk.empty()) sk.emplace_back(0, 1);
    ps.push_back(posting(std::to_string(i), std::move(sk)));
  }
  auto net1 = build_skillnet(ps, 8);
  std::shuffle(ps.begin(), ps.end(), gen);
  auto net2 = build_skillnet(ps, 8);
  CHECK(net1.edges == net2.edges);
}

TEST_CASE("criteria_vector unions posting labels above min_support") {
  const int high = global_index(CriteriaCategory::Salary, "high");
  const int medium = global_index(CriteriaCategory::Salary, "medium");
  const int listed = global_index(CriteriaCategory::FinancingRound, "listed");
  std::vector<JobPosting> ps = {
      posting("1", {{0, 1}, {1, 1}}, {high}),
      posting("2", {{0, 1}}, {high, listed}),
      posting("3", {{0, 1}, {2, 1}}, {medium}),
      posting("4", {{1, 1}}, {medium}),
      posting("5", {{0, 1}}, {high}),
      posting("6", {{2, 1}}, {listed}),
  };

  SUBCASE("union semantics at min_support 1") {
    auto lam = criteria_vector(0, ps, 1);
    std::vector<int> expect_set = {high, medium, listed};
    for (int k = 0; k < kNumCriteriaLabels; ++k) {
      const bool should = std::find(expect_set.begin(), expect_set.end(), k) != expect_set.end();
      CHECK(lam[k] == (should ? 1 : 0));
    }
  }

  SUBCASE("a singleton label set gives a single bit") {
    auto lam = criteria_vector(1, ps, 1);
    int bits = 0;
    for (auto b : lam) bits += b;
    CHECK(bits == 2);  // skill 1 appears under high and medium
    CHECK(lam[high] == 1);
    CHECK(lam[medium] == 1);
  }

  SUBCASE("min_support suppresses rare labels") {
    auto lam = criteria_vector(0, ps, 3);
    CHECK(lam[high] == 1);    // three postings
    CHECK(lam[medium] == 0);  // one posting
    CHECK(lam[listed] == 0);  // one posting
  }

  SUBCASE("unknown skill throws") {
    CHECK_THROWS_AS(criteria_vector(-1, ps, 1), UnknownSkill);
    CHECK_THROWS_AS(criteria_vector(99, ps, 1), UnknownSkill);
  }
}

TEST_CASE("make_documents emits neighbors with chosen multiplicity") {
  auto dict = grid_dict(4, 2);
  const int high = global_index(CriteriaCategory::Salary, "high");
  // craft postings so w(0,1) = 3, w(0,2) = 1, skill 3 isolated
  std::vector<JobPosting> ps = {
      posting("1", {{0, 1}, {1, 1}}, {high}), posting("2", {{0, 1}, {1, 1}}, {high}),
      posting("3", {{0, 1}, {1, 1}}, {high}), posting("4", {{0, 1}, {2, 1}}, {high}),
      posting("5", {{3, 1}}, {high}),
  };
  auto net = build_skillnet(ps, dict.size());

  SUBCASE("weighted mode") {
    DocumentReport rep;
    auto docs = make_documents(net, ps, dict, MultiplicityMode::Weighted, 1, &rep);
    REQUIRE(docs.size() == 3);  // skills 0, 1, 2; skill 3 isolated
    CHECK(rep.emitted == 3);
    CHECK(rep.isolated_skipped == 1);
    const auto& d0 = docs[0];
    CHECK(d0.central_skill == 0);
    CHECK(d0.tokens == std::vector<std::pair<int, int>>{{1, 3}, {2, 1}});
    CHECK(d0.token_count() == 4);
    CHECK(d0.lambda[high] == 1);
  }

  SUBCASE("binary mode collapses multiplicities") {
    auto docs = make_documents(net, ps, dict, MultiplicityMode::Binary, 1);
    CHECK(docs[0].tokens == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}});
    CHECK(docs[0].token_count() == 2);
  }

  SUBCASE("documents with empty lambda are dropped with a report") {
    DocumentReport rep;
    auto docs = make_documents(net, ps, dict, MultiplicityMode::Weighted, 10, &rep);
    CHECK(docs.empty());
    CHECK(rep.zero_lambda_skipped == 3);
  }
}

TEST_CASE("weighted token mass equals twice the edge mass") {
  std::mt19937 gen(23);
  auto dict = grid_dict(10, 3);
  const int high = global_index(CriteriaCategory::Salary, "high");
  std::vector<JobPosting> ps;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::pair<int, int>> sk;
    for (int s = 0; s < 10; ++s)
      if (gen() % 3 == 0) sk.emplace_back(s, 1);
    if (sk.empty()) sk.emplace_back(static_cast<int>(gen() % 10), 1);
    ps.push_back(posting(std::to_string(i), std::move(sk), {high}));
  }
  auto net = build_skillnet(ps, dict.size());
  auto docs = make_documents(net, ps, dict, MultiplicityMode::Weighted, 1);

  long long token_mass = 0;
  for (const auto& d : docs) token_mass += d.token_count();
  long long edge_mass = 0;
  for (const auto& [key, w] : net.edges) edge_mass += w;
  CHECK(token_mass == 2 * edge_mass);

  // every token is a graph neighbor of the central skill
  for (const auto& d : docs)
    for (auto [skill, count] : d.tokens) CHECK(net.weight(d.central_skill, skill) > 0);
}

TEST_CASE("edge list export is sorted and parseable") {
  std::vector<JobPosting> ps = {posting("1", {{2, 1}, {0, 1}, {1, 1}})};
  auto net = build_skillnet(ps, 3);
  std::ostringstream out;
  write_skillnet(out, net);
  CHECK(out.str() == "skill_i,skill_j,weight\n0,1,1\n0,2,1\n1,2,1\n");
}

TEST_CASE("document dump round-trips") {
  DocumentCorpus corpus;
  corpus.num_topics = 4;
  corpus.num_skills = 5;
  corpus.num_categories = 2;
  corpus.skill_category = {0, 1, 0, 1, 0};
  PseudoDocument d;
  d.central_skill = 2;
  d.tokens = {{0, 3}, {4, 1}};
  d.lambda = {1, 0, 0, 1};
  corpus.docs.push_back(d);

  std::ostringstream out;
  write_documents(out, corpus);
  std::istringstream in(out.str());
  auto back = read_documents(in);
  CHECK(back.num_topics == 4);
  CHECK(back.skill_category == corpus.skill_category);
  REQUIRE(back.docs.size() == 1);
  CHECK(back.docs[0].central_skill == 2);
  CHECK(back.docs[0].tokens == d.tokens);
  CHECK(back.docs[0].lambda == d.lambda);
}
