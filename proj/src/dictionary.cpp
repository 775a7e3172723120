#include "sptm/dictionary.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "sptm/errors.hpp"
#include "sptm/text.hpp"

namespace sptm {

void SkillDictionary::add_skill(std::string_view name, std::string_view category,
                                const std::vector<std::string>& aliases) {
  const std::string canon = normalize_name(name);
  if (canon.empty()) throw MalformedRecord("skill row with empty name");
  const std::string cat = normalize_name(category);
  if (cat.empty()) throw MalformedRecord("skill '" + std::string(name) + "' has empty category");

  int cat_id;
  if (auto it = cat_index_.find(cat); it != cat_index_.end()) {
    cat_id = it->second;
  } else {
    cat_id = static_cast<int>(categories_.size());
    categories_.emplace_back(trim(category));
    category_sizes_.push_back(0);
    cat_index_.emplace(cat, cat_id);
  }

  const int id = static_cast<int>(skills_.size());
  Skill s;
  s.name = trim(name);
  s.category = cat_id;

  auto claim = [&](const std::string& key) {
    auto [it, inserted] = index_.emplace(key, id);
    if (!inserted && it->second != id)
      throw DuplicateSkill("'" + key + "' already maps to skill '" +
                           skills_[it->second].name + "'");
  };
  claim(canon);
  for (const auto& raw : aliases) {
    const std::string a = normalize_name(raw);
    if (a.empty() || a == canon) continue;
    if (std::find(s.aliases.begin(), s.aliases.end(), a) != s.aliases.end()) continue;
    claim(a);
    s.aliases.push_back(a);
  }

  skills_.push_back(std::move(s));
  category_map_.push_back(cat_id);
  ++category_sizes_[cat_id];
}

SkillDictionary SkillDictionary::load_csv(std::istream& in) {
  SkillDictionary dict;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (!fields.empty() && normalize_name(fields[0]) == "skill") continue;  // header
    }
    if (fields.size() < 2) throw MalformedRecord("dictionary row needs skill,category: " + line);
    std::vector<std::string> aliases;
    if (fields.size() >= 3 && !trim(fields[2]).empty()) {
      for (const auto& a : split(fields[2], '|'))
        if (!trim(a).empty()) aliases.push_back(trim(a));
    }
    dict.add_skill(trim(fields[0]), trim(fields[1]), aliases);
  }
  if (dict.size() == 0) throw EmptyDictionary("no skill rows in input");
  return dict;
}

SkillDictionary SkillDictionary::load_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedRecord("cannot open dictionary file: " + path);
  return load_csv(in);
}

int SkillDictionary::find(std::string_view name_or_alias) const {
  auto it = index_.find(normalize_name(name_or_alias));
  return it == index_.end() ? -1 : it->second;
}

std::uint64_t SkillDictionary::hash() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& s : skills_) {
    h = fnv1a64(normalize_name(s.name), h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(normalize_name(categories_[s.category]), h);
    h = fnv1a64("\x1f", h);
    for (const auto& a : s.aliases) {
      h = fnv1a64(a, h);
      h = fnv1a64("|", h);
    }
    h = fnv1a64("\n", h);
  }
  return h;
}

namespace {
bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
}  // namespace

SkillMatcher::SkillMatcher(const SkillDictionary& dict) {
  for (int id = 0; id < dict.size(); ++id) {
    auto add = [&](const std::string& alias) {
      if (alias.empty()) return;
      buckets_[static_cast<unsigned char>(alias[0])].push_back({alias, id});
    };
    add(normalize_name(dict.skill_name(id)));
    for (const auto& a : dict.skill(id).aliases) add(a);
  }
  for (auto& bucket : buckets_) {
    std::stable_sort(bucket.begin(), bucket.end(), [](const Entry& a, const Entry& b) {
      return a.alias.size() > b.alias.size();
    });
  }
}

std::vector<std::pair<int, int>> SkillMatcher::extract(std::string_view text) const {
  const std::string lowered = to_lower(text);
  std::unordered_map<int, int> counts;
  std::size_t pos = 0;
  while (pos < lowered.size()) {
    if (pos > 0 && word_char(lowered[pos - 1]) && word_char(lowered[pos])) {
      ++pos;  // inside a word; no alias may start here
      continue;
    }
    const auto& bucket = buckets_[static_cast<unsigned char>(lowered[pos])];
    bool matched = false;
    for (const auto& entry : bucket) {
      const std::size_t end = pos + entry.alias.size();
      if (end > lowered.size()) continue;
      if (lowered.compare(pos, entry.alias.size(), entry.alias) != 0) continue;
      if (end < lowered.size() && word_char(lowered[end]) && word_char(entry.alias.back()))
        continue;  // alias ends mid-word
      ++counts[entry.skill];
      pos = end;
      matched = true;
      break;  // bucket is longest-first, so this is the longest valid match
    }
    if (!matched) ++pos;
  }
  std::vector<std::pair<int, int>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> extract_skills(std::string_view text,
                                                const SkillDictionary& dict) {
  return SkillMatcher(dict).extract(text);
}

}  // namespace sptm
