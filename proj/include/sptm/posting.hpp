#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sptm/criteria.hpp"
#include "sptm/dictionary.hpp"

namespace sptm {

// One job-posting record after parsing: criteria labels (at most one per
// category, financing always present because the taxonomy has an explicit
// Unknown round) and the multiset of dictionary skills it mentions.
struct JobPosting {
  std::string post_id;
  std::vector<int> labels;                    // global label indices, sorted
  std::vector<std::pair<int, int>> skills;    // (skill id, count), sorted by id

  bool has_label(int gi) const;
  bool operator==(const JobPosting&) const = default;
};

struct ParseReport {
  std::size_t parsed = 0;
  std::size_t dropped_no_skills = 0;  // postings with zero dictionary skills
  std::size_t malformed = 0;          // unreadable rows, skipped
  std::size_t unknown_skill_names = 0;
};

// Line-delimited JSON, one object per line with fields
//   {post_id, company_scale, salary, location, financing_round, work_type,
//    description?, skills?}
// "skills" (a list of names, repeats allowed) wins over "description".
// Output order equals input order.
std::vector<JobPosting> parse_postings(std::istream& in, const SkillDictionary& dict,
                                       ParseReport* report = nullptr);
std::vector<JobPosting> parse_postings_file(const std::string& path,
                                            const SkillDictionary& dict,
                                            ParseReport* report = nullptr);

// Canonical serialization; parse(write(parse(x))) == parse(x).
void write_postings(std::ostream& out, std::span<const JobPosting> postings,
                    const SkillDictionary& dict);

}  // namespace sptm
