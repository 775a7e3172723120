#pragma once

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "sptm/model.hpp"

namespace sptm {

// One expert judgment: whether a skill shown in a topic's top-k list was
// marked relevant (0/1).
struct JudgmentRow {
  std::string judge_id;
  int topic = 0;
  std::string skill;
  int relevant = 0;
};

// CSV "judge_id,topic_id,skill,relevant"
std::vector<JudgmentRow> load_judgments_csv(std::istream& in);

struct JudgeScore {
  std::string judge_id;
  double vm = 0.0;  // valid topics / topics
  double cm = 0.0;  // relevant skills / skills
};

struct VmCmResult {
  std::vector<JudgeScore> per_judge;
  double vm_average = 0.0;
  double cm_average = 0.0;
};

// A topic is valid iff at least validity_threshold of its k skills are
// relevant. Every (judge, topic) group must contain exactly k rows.
VmCmResult vm_cm(std::span<const JudgmentRow> rows, int k = 8, int validity_threshold = 4);

// Top-k skills of one topic by the topic-skill posterior, descending,
// ties broken by ascending skill id.
std::vector<std::pair<int, double>> top_k_skills(const TrainedModel& model, int topic, int k);

struct ResumeScore {
  double score = 0.0;
  std::size_t unknown_skills = 0;  // mentions outside the model's dictionary
};

// Frequency-weighted sum of popularity scores over a resume's skills; ids
// outside [0, S) contribute nothing and are tallied as unknown.
ResumeScore resume_skill_score(const TrainedModel& model,
                               std::span<const std::pair<int, int>> skills,
                               std::span<const int> criteria);

// Spearman's rho: Pearson correlation on fractional ranks, average ranks
// for ties.
double spearman(std::span<const double> x, std::span<const double> y);

// Kendall's tau-b (tie-corrected), O(n log n).
double kendall_tau(std::span<const double> x, std::span<const double> y);

// z = 3 * tau * sqrt(n * (n - 1)) / sqrt(2 * (2n + 5))
double tau_z_test(double tau, long long n);

// two-sided p-value of a standard normal z
double normal_two_sided_p(double z);

}  // namespace sptm
