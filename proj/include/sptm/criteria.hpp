#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sptm {

// The five job-criteria categories. Every topic of the full model is bound
// one-to-one to a criteria label, so the 23 labels below fix K = 23.
enum class CriteriaCategory : int {
  Salary = 0,
  CompanyScale = 1,
  Location = 2,
  FinancingRound = 3,
  WorkType = 4,
};

inline constexpr int kNumCriteriaCategories = 5;
inline constexpr int kNumCriteriaLabels = 23;  // 5 + 5 + 3 + 7 + 3

struct CriteriaLabel {
  int global_index;            // stable position in [0, 23)
  CriteriaCategory category;
  std::string value_slug;      // e.g. "very_high"
  std::string display_name;    // e.g. "Very High"
};

const std::vector<CriteriaLabel>& criteria_labels();

const std::string& category_slug(CriteriaCategory cat);     // e.g. "company_scale"
const std::string& category_display(CriteriaCategory cat);  // e.g. "Company Scale"
int category_offset(CriteriaCategory cat);
int category_size(CriteriaCategory cat);

// "salary=very_high" -> the label's global index
int global_index(CriteriaCategory cat, std::string_view value_slug);

// Full slug of a label, "salary=very_high"
std::string label_slug(int global_index);

// Parses a user-supplied "category=value" pair. Throws UnknownLabel with the
// list of valid values on failure.
int parse_criteria_spec(std::string_view spec);

// Field-level parsing used by the posting reader. Accepts display names,
// slugs and (for salary / company scale) raw numbers; returns the label's
// global index, or nullopt when the value is unrecognizable.
std::optional<int> parse_field_value(CriteriaCategory cat, std::string_view raw);

// Band mappings. Boundaries are half-open on the left: [30k, inf) is
// "very_high", [20k, 30k) is "high", and so on.
int salary_band(double monthly_yuan);     // value index within Salary
int scale_band(double employee_count);    // value index within CompanyScale

}  // namespace sptm
