#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <sstream>

#include "sptm/criteria.hpp"
#include "sptm/dictionary.hpp"
#include "sptm/errors.hpp"
#include "sptm/posting.hpp"
#include "sptm/text.hpp"

using namespace sptm;

namespace {

SkillDictionary toy_dict() {
  SkillDictionary d;
  d.add_skill("Python", "programming language", {"python3"});
  d.add_skill("Java", "programming language");
  d.add_skill("JavaScript", "web front-end", {"js"});
  d.add_skill("Android", "mobile");
  d.add_skill("Linux", "operating system");
  d.add_skill("CNN", "machine learning");
  d.add_skill("HTML", "web front-end");
  return d;
}

std::vector<JobPosting> parse_lines(const std::string& text, const SkillDictionary& dict,
                                    ParseReport* rep = nullptr) {
  std::istringstream in(text);
  return parse_postings(in, dict, rep);
}

}  // namespace

TEST_CASE("criteria taxonomy has 23 labels in five categories") {
  const auto& labels = criteria_labels();
  REQUIRE(labels.size() == kNumCriteriaLabels);
  CHECK(category_size(CriteriaCategory::Salary) == 5);
  CHECK(category_size(CriteriaCategory::CompanyScale) == 5);
  CHECK(category_size(CriteriaCategory::Location) == 3);
  CHECK(category_size(CriteriaCategory::FinancingRound) == 7);
  CHECK(category_size(CriteriaCategory::WorkType) == 3);
  // global_index is a bijection in declaration order
  for (int i = 0; i < kNumCriteriaLabels; ++i) CHECK(labels[i].global_index == i);
  CHECK(label_slug(0) == "salary=very_high");
  CHECK(parse_criteria_spec("salary=very_high") == 0);
  CHECK(parse_criteria_spec("financing=listed") ==
        global_index(CriteriaCategory::FinancingRound, "listed"));
  CHECK(parse_criteria_spec("work_type=part_time") ==
        global_index(CriteriaCategory::WorkType, "part_time"));
  CHECK_THROWS_AS(parse_criteria_spec("salary=ultra"), UnknownLabel);
  CHECK_THROWS_AS(parse_criteria_spec("color=red"), UnknownLabel);
}

TEST_CASE("salary and scale bands are half-open on the left") {
  CHECK(salary_band(30000) == global_index(CriteriaCategory::Salary, "very_high"));
  CHECK(salary_band(29999.99) == global_index(CriteriaCategory::Salary, "high"));
  CHECK(salary_band(20000) == global_index(CriteriaCategory::Salary, "high"));
  CHECK(salary_band(10000) == global_index(CriteriaCategory::Salary, "medium"));
  CHECK(salary_band(5000) == global_index(CriteriaCategory::Salary, "low"));
  CHECK(salary_band(4999) == global_index(CriteriaCategory::Salary, "very_low"));
  CHECK(scale_band(2000) == global_index(CriteriaCategory::CompanyScale, "very_big"));
  CHECK(scale_band(500) == global_index(CriteriaCategory::CompanyScale, "big"));
  CHECK(scale_band(499) == global_index(CriteriaCategory::CompanyScale, "medium"));
  CHECK(scale_band(49) == global_index(CriteriaCategory::CompanyScale, "very_small"));
}

TEST_CASE("field parsing accepts display names, slugs and numbers") {
  CHECK(parse_field_value(CriteriaCategory::Salary, "25k/month") ==
        global_index(CriteriaCategory::Salary, "high"));
  CHECK(parse_field_value(CriteriaCategory::Salary, "Very Low") ==
        global_index(CriteriaCategory::Salary, "very_low"));
  CHECK(parse_field_value(CriteriaCategory::Salary, "10k-20k") ==
        global_index(CriteriaCategory::Salary, "medium"));
  CHECK(parse_field_value(CriteriaCategory::FinancingRound, "A Round") ==
        global_index(CriteriaCategory::FinancingRound, "a"));
  CHECK(parse_field_value(CriteriaCategory::FinancingRound, "Listed") ==
        global_index(CriteriaCategory::FinancingRound, "listed"));
  CHECK(parse_field_value(CriteriaCategory::Location, "Huge Cities") ==
        global_index(CriteriaCategory::Location, "huge_cities"));
  CHECK(parse_field_value(CriteriaCategory::CompanyScale, "1200") ==
        global_index(CriteriaCategory::CompanyScale, "big"));
  CHECK(parse_field_value(CriteriaCategory::WorkType, "Part-time") ==
        global_index(CriteriaCategory::WorkType, "part_time"));
  CHECK(!parse_field_value(CriteriaCategory::Location, "").has_value());
  CHECK(!parse_field_value(CriteriaCategory::Location, "atlantis").has_value());
}

TEST_CASE("dictionary load assigns dense ids and categories") {
  std::istringstream in(
      "skill,category,aliases\n"
      "CNN,machine learning,convolutional neural network\n"
      "Python,programming language,python3|py\n"
      "Java,programming language,\n");
  auto dict = SkillDictionary::load_csv(in);
  REQUIRE(dict.size() == 3);
  REQUIRE(dict.num_categories() == 2);
  CHECK(dict.skill_name(0) == "CNN");
  CHECK(dict.category_name(dict.category_of(dict.find("CNN"))) == "machine learning");
  CHECK(dict.find("PYTHON3") == dict.find("Python"));
  CHECK(dict.find("convolutional  neural network") == 0);  // whitespace collapses
  CHECK(dict.find("ruby") == -1);
  CHECK(dict.category_sizes()[dict.category_of(1)] == 2);
}

TEST_CASE("duplicate and empty dictionaries are rejected") {
  std::istringstream dup(
      "skill,category,aliases\n"
      "Python,programming language,\n"
      "python ,scripting,\n");
  CHECK_THROWS_AS(SkillDictionary::load_csv(dup), DuplicateSkill);

  std::istringstream alias_clash(
      "skill,category,aliases\n"
      "Python,programming language,\n"
      "Py3,scripting,python\n");
  CHECK_THROWS_AS(SkillDictionary::load_csv(alias_clash), DuplicateSkill);

  std::istringstream empty("skill,category,aliases\n");
  CHECK_THROWS_AS(SkillDictionary::load_csv(empty), EmptyDictionary);
}

TEST_CASE("dictionary fixture at catalog scale") {
  SkillDictionary dict;
  for (int s = 0; s < 1729; ++s)
    dict.add_skill("skill_" + std::to_string(s), "category_" + std::to_string(s % 54));
  CHECK(dict.size() == 1729);
  CHECK(dict.num_categories() == 54);
  long long total = 0;
  for (int c : dict.category_sizes()) total += c;
  CHECK(total == 1729);
}

TEST_CASE("extract_skills basics") {
  const auto dict = toy_dict();
  CHECK(extract_skills("Familiar with Python...", dict) ==
        std::vector<std::pair<int, int>>{{dict.find("Python"), 1}});
  CHECK(extract_skills("", dict).empty());
  CHECK(extract_skills("nothing relevant here", dict).empty());

  auto multi = extract_skills("python, Python and PYTHON3", dict);
  REQUIRE(multi.size() == 1);
  CHECK(multi[0] == std::pair<int, int>{dict.find("Python"), 3});
}

TEST_CASE("longest alias wins over substring aliases") {
  const auto dict = toy_dict();
  auto got = extract_skills("Java and JavaScript", dict);

  // independent oracle: enumerate every substring, keep boundary-valid
  // dictionary hits, resolve overlaps longest-first, left to right
  const std::string text = to_lower("Java and JavaScript");
  struct Hit {
    std::size_t begin, end;
    int id;
  };
  std::vector<Hit> hits;
  for (std::size_t b = 0; b < text.size(); ++b)
    for (std::size_t e = b + 1; e <= text.size(); ++e) {
      const int id = dict.find(text.substr(b, e - b));
      if (id < 0) continue;
      const bool left_ok = b == 0 || !std::isalnum(static_cast<unsigned char>(text[b - 1]));
      const bool right_ok = e == text.size() || !std::isalnum(static_cast<unsigned char>(text[e]));
      if (left_ok && right_ok) hits.push_back({b, e, id});
    }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end > b.end;
  });
  std::map<int, int> expect;
  std::size_t cursor = 0;
  for (const auto& h : hits) {
    if (h.begin < cursor) continue;
    ++expect[h.id];
    cursor = h.end;
  }
  CHECK(got == std::vector<std::pair<int, int>>(expect.begin(), expect.end()));
  REQUIRE(got.size() == 2);  // Java x1 and JavaScript x1, not Java x2
  CHECK(got[0] == std::pair<int, int>{dict.find("Java"), 1});
  CHECK(got[1] == std::pair<int, int>{dict.find("JavaScript"), 1});
}

TEST_CASE("extraction does not fire inside words") {
  const auto dict = toy_dict();
  CHECK(extract_skills("javascripting is not a skill", dict).empty());
  CHECK(extract_skills("nonjava text", dict).empty());
}

TEST_CASE("extraction multiset is bounded by the token count") {
  const auto dict = toy_dict();
  std::mt19937 gen(11);
  const std::vector<std::string> words = {"python", "java", "js",   "and", "with",
                                          "linux",  "que",  "html", "the", "cnn"};
  for (int round = 0; round < 50; ++round) {
    std::string text;
    int tokens = 0;
    const int n = 1 + static_cast<int>(gen() % 20);
    for (int i = 0; i < n; ++i) {
      text += words[gen() % words.size()] + " ";
      ++tokens;
    }
    long long total = 0;
    for (auto [id, count] : extract_skills(text, dict)) total += count;
    CHECK(total <= tokens);
  }
}

TEST_CASE("posting parsing maps fields to labels") {
  const auto dict = toy_dict();
  ParseReport rep;
  auto postings = parse_lines(
      R"({"post_id":"1000037","company_scale":"Medium","salary":"25k/month","location":"Huge Cities","financing_round":"A Round","work_type":"Fulltime","description":"Familiar with Python..."})"
      "\n"
      R"({"post_id":"1000046","salary":"Very Low","description":"Development of Android..."})"
      "\n",
      dict, &rep);
  REQUIRE(postings.size() == 2);
  CHECK(rep.parsed == 2);

  const auto& p = postings[0];
  CHECK(p.has_label(global_index(CriteriaCategory::Salary, "high")));
  CHECK(p.has_label(global_index(CriteriaCategory::CompanyScale, "medium")));
  CHECK(p.has_label(global_index(CriteriaCategory::Location, "huge_cities")));
  CHECK(p.has_label(global_index(CriteriaCategory::FinancingRound, "a")));
  CHECK(p.has_label(global_index(CriteriaCategory::WorkType, "fulltime")));
  CHECK(p.skills == std::vector<std::pair<int, int>>{{dict.find("Python"), 1}});

  // absent financing becomes the explicit Unknown round; other absent
  // categories stay absent
  const auto& q = postings[1];
  CHECK(q.has_label(global_index(CriteriaCategory::FinancingRound, "unknown")));
  CHECK(q.labels.size() == 2);  // salary band + unknown financing only

  for (const auto& posting : postings) {
    std::vector<int> cats;
    for (int gi : posting.labels) cats.push_back(static_cast<int>(criteria_labels()[gi].category));
    std::sort(cats.begin(), cats.end());
    CHECK(std::adjacent_find(cats.begin(), cats.end()) == cats.end());
    CHECK(posting.labels.size() <= 5);
  }
}

TEST_CASE("postings without dictionary skills are dropped and counted") {
  const auto dict = toy_dict();
  ParseReport rep;
  auto postings = parse_lines(
      R"({"post_id":"1","description":"CS Bachelor Degree required..."})"
      "\n"
      R"({"post_id":"2","description":"Sufficient with Java..."})"
      "\n"
      "this line is not json\n"
      R"({"no_id_field":true})"
      "\n",
      dict, &rep);
  REQUIRE(postings.size() == 1);
  CHECK(postings[0].post_id == "2");
  CHECK(rep.parsed == 1);
  CHECK(rep.dropped_no_skills == 1);
  CHECK(rep.malformed == 2);
}

TEST_CASE("explicit skills list wins over description") {
  const auto dict = toy_dict();
  ParseReport rep;
  auto postings = parse_lines(
      R"({"post_id":"1","skills":["Linux","linux","HTML","Cobol"],"description":"Familiar with Python"})"
      "\n",
      dict, &rep);
  REQUIRE(postings.size() == 1);
  std::vector<std::pair<int, int>> expect = {{dict.find("Linux"), 2}, {dict.find("HTML"), 1}};
  std::sort(expect.begin(), expect.end());
  CHECK(postings[0].skills == expect);
  CHECK(rep.unknown_skill_names == 1);
}

TEST_CASE("parse -> serialize -> parse round-trips") {
  const auto dict = toy_dict();
  std::mt19937 gen(5);
  std::ostringstream source;
  const char* salaries[] = {"Very High", "8k", "25000", "", "Low"};
  const char* rounds[] = {"Angel", "B Round", "", "Listed"};
  for (int i = 0; i < 40; ++i) {
    source << R"({"post_id":"p)" << i << '"';
    if (auto s = salaries[gen() % 5]; *s) source << R"(,"salary":")" << s << '"';
    if (auto r = rounds[gen() % 4]; *r) source << R"(,"financing_round":")" << r << '"';
    source << R"(,"skills":[)";
    const int n = 1 + static_cast<int>(gen() % 4);
    for (int t = 0; t < n; ++t) {
      if (t) source << ',';
      source << '"' << dict.skill_name(static_cast<int>(gen() % dict.size())) << '"';
    }
    source << "]}\n";
  }
  const auto first = parse_lines(source.str(), dict);
  REQUIRE(!first.empty());
  std::ostringstream canon;
  write_postings(canon, first, dict);
  const auto second = parse_lines(canon.str(), dict);
  CHECK(first == second);
}
