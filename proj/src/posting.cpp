#include "sptm/posting.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

#include "sptm/errors.hpp"
#include "sptm/text.hpp"

namespace sptm {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* kFieldNames[kNumCriteriaCategories] = {
    "salary", "company_scale", "location", "financing_round", "work_type"};
const CriteriaCategory kFieldCats[kNumCriteriaCategories] = {
    CriteriaCategory::Salary, CriteriaCategory::CompanyScale, CriteriaCategory::Location,
    CriteriaCategory::FinancingRound, CriteriaCategory::WorkType};

std::string json_to_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  return {};
}

}  // namespace

bool JobPosting::has_label(int gi) const {
  return std::binary_search(labels.begin(), labels.end(), gi);
}

std::vector<JobPosting> parse_postings(std::istream& in, const SkillDictionary& dict,
                                       ParseReport* report) {
  ParseReport local;
  ParseReport& rep = report ? *report : local;
  SkillMatcher matcher(dict);

  std::vector<JobPosting> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      ++rep.malformed;
      continue;
    }

    JobPosting p;
    if (auto it = rec.find("post_id"); it != rec.end() && !it->is_null()) {
      p.post_id = json_to_text(*it);
    }
    if (p.post_id.empty()) {
      ++rep.malformed;
      continue;
    }

    for (int c = 0; c < kNumCriteriaCategories; ++c) {
      std::string raw;
      if (auto it = rec.find(kFieldNames[c]); it != rec.end() && !it->is_null())
        raw = json_to_text(*it);
      auto gi = parse_field_value(kFieldCats[c], raw);
      // a missing or unreadable financing field is the explicit Unknown round
      if (!gi && kFieldCats[c] == CriteriaCategory::FinancingRound)
        gi = global_index(CriteriaCategory::FinancingRound, "unknown");
      if (gi) p.labels.push_back(*gi);
    }
    std::sort(p.labels.begin(), p.labels.end());

    std::map<int, int> counts;
    if (auto it = rec.find("skills"); it != rec.end() && it->is_array()) {
      for (const auto& s : *it) {
        if (!s.is_string()) continue;
        const int id = dict.find(s.get<std::string>());
        if (id < 0) {
          ++rep.unknown_skill_names;
        } else {
          ++counts[id];
        }
      }
    } else if (auto dit = rec.find("description"); dit != rec.end() && dit->is_string()) {
      for (auto [id, n] : matcher.extract(dit->get<std::string>())) counts[id] += n;
    }
    p.skills.assign(counts.begin(), counts.end());

    if (p.skills.empty()) {
      ++rep.dropped_no_skills;
      continue;
    }
    ++rep.parsed;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<JobPosting> parse_postings_file(const std::string& path,
                                            const SkillDictionary& dict, ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw MalformedRecord("cannot open postings file: " + path);
  return parse_postings(in, dict, report);
}

void write_postings(std::ostream& out, std::span<const JobPosting> postings,
                    const SkillDictionary& dict) {
  const auto& labels = criteria_labels();
  for (const auto& p : postings) {
    ordered_json rec;
    rec["post_id"] = p.post_id;
    for (int gi : p.labels) {
      const auto& l = labels[gi];
      const char* field = kFieldNames[static_cast<int>(l.category)];
      rec[field] = l.value_slug;
    }
    json names = json::array();
    for (auto [id, n] : p.skills)
      for (int i = 0; i < n; ++i) names.push_back(dict.skill_name(id));
    rec["skills"] = std::move(names);
    out << rec.dump() << '\n';
  }
}

}  // namespace sptm
