#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sptm {

// Two-level skill dictionary: dense skill ids in [0, S), dense category ids
// in [0, L), every skill belonging to exactly one category.
class SkillDictionary {
 public:
  struct Skill {
    std::string name;                  // canonical display name
    std::vector<std::string> aliases;  // normalized, excludes the name itself
    int category = 0;
  };

  // CSV with header "skill,category,aliases"; aliases are '|'-separated.
  static SkillDictionary load_csv(std::istream& in);
  static SkillDictionary load_csv_file(const std::string& path);

  int size() const { return static_cast<int>(skills_.size()); }
  int num_categories() const { return static_cast<int>(categories_.size()); }

  const Skill& skill(int id) const { return skills_[id]; }
  const std::string& skill_name(int id) const { return skills_[id].name; }
  const std::string& category_name(int id) const { return categories_[id]; }
  int category_of(int skill_id) const { return skills_[skill_id].category; }
  const std::vector<int>& category_map() const { return category_map_; }
  const std::vector<int>& category_sizes() const { return category_sizes_; }

  // normalized name or alias -> id; -1 when absent
  int find(std::string_view name_or_alias) const;

  // stable content hash used to bind trained models to their dictionary
  std::uint64_t hash() const;

  void add_skill(std::string_view name, std::string_view category,
                 const std::vector<std::string>& aliases = {});

 private:
  std::vector<Skill> skills_;
  std::vector<std::string> categories_;
  std::vector<int> category_map_;    // skill id -> category id
  std::vector<int> category_sizes_;  // category id -> #skills
  std::unordered_map<std::string, int> index_;     // normalized alias -> skill
  std::unordered_map<std::string, int> cat_index_; // normalized name -> category
};

// Longest-alias-first matcher over word boundaries, case-insensitive.
// Overlapping candidates resolve to the longer alias; multiplicity of
// repeated mentions is preserved.
class SkillMatcher {
 public:
  explicit SkillMatcher(const SkillDictionary& dict);

  // sorted (skill id, mention count)
  std::vector<std::pair<int, int>> extract(std::string_view text) const;

 private:
  struct Entry {
    std::string alias;  // normalized
    int skill;
  };
  std::array<std::vector<Entry>, 256> buckets_;  // by first byte, longest first
};

// Convenience form of the matcher for one-off calls.
std::vector<std::pair<int, int>> extract_skills(std::string_view text,
                                                const SkillDictionary& dict);

}  // namespace sptm
