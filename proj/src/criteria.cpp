#include "sptm/criteria.hpp"

#include <array>

#include "sptm/errors.hpp"
#include "sptm/text.hpp"

namespace sptm {

namespace {

std::vector<CriteriaLabel> build_labels() {
  std::vector<CriteriaLabel> labels;
  auto add = [&](CriteriaCategory cat, std::string_view slug, std::string_view display) {
    labels.push_back({static_cast<int>(labels.size()), cat, std::string(slug), std::string(display)});
  };
  add(CriteriaCategory::Salary, "very_high", "Very High");
  add(CriteriaCategory::Salary, "high", "High");
  add(CriteriaCategory::Salary, "medium", "Medium");
  add(CriteriaCategory::Salary, "low", "Low");
  add(CriteriaCategory::Salary, "very_low", "Very Low");

  add(CriteriaCategory::CompanyScale, "very_big", "Very Big");
  add(CriteriaCategory::CompanyScale, "big", "Big");
  add(CriteriaCategory::CompanyScale, "medium", "Medium");
  add(CriteriaCategory::CompanyScale, "small", "Small");
  add(CriteriaCategory::CompanyScale, "very_small", "Very Small");

  add(CriteriaCategory::Location, "huge_cities", "Huge Cities");
  add(CriteriaCategory::Location, "big_cities", "Big Cities");
  add(CriteriaCategory::Location, "normal_cities", "Normal Cities");

  add(CriteriaCategory::FinancingRound, "angel", "Angel");
  add(CriteriaCategory::FinancingRound, "a", "A Round");
  add(CriteriaCategory::FinancingRound, "b", "B Round");
  add(CriteriaCategory::FinancingRound, "c", "C Round");
  add(CriteriaCategory::FinancingRound, "d", "D Round");
  add(CriteriaCategory::FinancingRound, "listed", "Listed");
  add(CriteriaCategory::FinancingRound, "unknown", "Unknown");

  add(CriteriaCategory::WorkType, "fulltime", "Fulltime");
  add(CriteriaCategory::WorkType, "part_time", "Part-time");
  add(CriteriaCategory::WorkType, "intern", "Intern");
  return labels;
}

const std::array<std::string, kNumCriteriaCategories> kCategorySlugs = {
    "salary", "company_scale", "location", "financing", "work_type"};
const std::array<std::string, kNumCriteriaCategories> kCategoryDisplay = {
    "Salary", "Company Scale", "Location", "Financing Round", "Work Type"};

// normalized value text -> slug, shared synonym handling
std::string canonical_value(CriteriaCategory cat, std::string_view raw) {
  std::string v = slugify(raw);
  if (cat == CriteriaCategory::FinancingRound) {
    if (v.size() > 6 && v.ends_with("_round")) v.resize(v.size() - 6);
    if (v.starts_with("series_")) v = v.substr(7);
  } else if (cat == CriteriaCategory::Location) {
    if (v.size() > 7 && v.ends_with("_cities")) v.resize(v.size() - 7);
    if (v == "huge") v = "huge_cities";
    else if (v == "big") v = "big_cities";
    else if (v == "normal") v = "normal_cities";
  } else if (cat == CriteriaCategory::WorkType) {
    if (v == "full_time") v = "fulltime";
    else if (v == "parttime") v = "part_time";
    else if (v == "internship") v = "intern";
  }
  return v;
}

}  // namespace

const std::vector<CriteriaLabel>& criteria_labels() {
  static const std::vector<CriteriaLabel> labels = build_labels();
  return labels;
}

const std::string& category_slug(CriteriaCategory cat) {
  return kCategorySlugs[static_cast<int>(cat)];
}

const std::string& category_display(CriteriaCategory cat) {
  return kCategoryDisplay[static_cast<int>(cat)];
}

int category_offset(CriteriaCategory cat) {
  for (const auto& l : criteria_labels())
    if (l.category == cat) return l.global_index;
  return -1;
}

int category_size(CriteriaCategory cat) {
  int n = 0;
  for (const auto& l : criteria_labels())
    if (l.category == cat) ++n;
  return n;
}

int global_index(CriteriaCategory cat, std::string_view value_slug) {
  for (const auto& l : criteria_labels())
    if (l.category == cat && l.value_slug == value_slug) return l.global_index;
  throw UnknownLabel(category_slug(cat) + "=" + std::string(value_slug));
}

std::string label_slug(int gi) {
  const auto& labels = criteria_labels();
  if (gi < 0 || gi >= static_cast<int>(labels.size()))
    throw UnknownLabel("label index " + std::to_string(gi) + " out of range");
  return category_slug(labels[gi].category) + "=" + labels[gi].value_slug;
}

int parse_criteria_spec(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos)
    throw UnknownLabel("expected category=value, got '" + std::string(spec) + "'");
  const std::string cat_part = slugify(spec.substr(0, eq));
  const std::string val_part(spec.substr(eq + 1));

  std::optional<CriteriaCategory> cat;
  for (int c = 0; c < kNumCriteriaCategories; ++c) {
    if (kCategorySlugs[c] == cat_part) cat = static_cast<CriteriaCategory>(c);
  }
  if (cat_part == "financing_round") cat = CriteriaCategory::FinancingRound;
  if (!cat) {
    std::string valid;
    for (const auto& s : kCategorySlugs) valid += (valid.empty() ? "" : ", ") + s;
    throw UnknownLabel("unknown category '" + cat_part + "'; valid categories: " + valid);
  }

  const std::string v = canonical_value(*cat, val_part);
  for (const auto& l : criteria_labels())
    if (l.category == *cat && l.value_slug == v) return l.global_index;

  std::string valid;
  for (const auto& l : criteria_labels())
    if (l.category == *cat) valid += (valid.empty() ? "" : ", ") + l.value_slug;
  throw UnknownLabel("unknown value '" + val_part + "' for " + category_slug(*cat) +
                     "; valid values: " + valid);
}

int salary_band(double monthly_yuan) {
  const int off = 0;  // salary occupies [0, 5)
  if (monthly_yuan >= 30000) return off + 0;
  if (monthly_yuan >= 20000) return off + 1;
  if (monthly_yuan >= 10000) return off + 2;
  if (monthly_yuan >= 5000) return off + 3;
  return off + 4;
}

int scale_band(double employees) {
  const int off = category_offset(CriteriaCategory::CompanyScale);
  if (employees >= 2000) return off + 0;
  if (employees >= 500) return off + 1;
  if (employees >= 100) return off + 2;
  if (employees >= 50) return off + 3;
  return off + 4;
}

std::optional<int> parse_field_value(CriteriaCategory cat, std::string_view raw) {
  const std::string trimmed = trim(raw);
  if (trimmed.empty()) return std::nullopt;

  const std::string v = canonical_value(cat, trimmed);
  for (const auto& l : criteria_labels())
    if (l.category == cat && l.value_slug == v) return l.global_index;

  if (cat == CriteriaCategory::Salary || cat == CriteriaCategory::CompanyScale) {
    auto nums = extract_numbers(trimmed);
    if (!nums.empty()) {
      // a range like "10k-20k" is mapped through its midpoint
      double value = nums.size() >= 2 ? 0.5 * (nums[0] + nums[1]) : nums[0];
      if (cat == CriteriaCategory::Salary) {
        // bare figures below 1000 are read as thousands of yuan per month
        if (value < 1000) value *= 1000;
        return salary_band(value);
      }
      return scale_band(value);
    }
  }
  return std::nullopt;
}

}  // namespace sptm
