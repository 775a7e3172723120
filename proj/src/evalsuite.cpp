#include "sptm/evalsuite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sptm/errors.hpp"
#include "sptm/text.hpp"

namespace sptm {

std::vector<JudgmentRow> load_judgments_csv(std::istream& in) {
  std::vector<JudgmentRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      first = false;
      if (!fields.empty() && normalize_name(fields[0]) == "judge_id") continue;
    }
    if (fields.size() < 4)
      throw IncompleteJudgments("judgment row needs judge_id,topic_id,skill,relevant: " + line);
    JudgmentRow r;
    r.judge_id = trim(fields[0]);
    try {
      r.topic = std::stoi(fields[1]);
      r.relevant = std::stoi(fields[3]);
    } catch (const std::exception&) {
      throw IncompleteJudgments("non-numeric topic or relevance: " + line);
    }
    r.skill = trim(fields[2]);
    rows.push_back(std::move(r));
  }
  return rows;
}

VmCmResult vm_cm(std::span<const JudgmentRow> rows, int k, int validity_threshold) {
  if (rows.empty()) throw IncompleteJudgments("no judgment rows");
  // (judge, topic) -> relevant count / row count
  std::map<std::string, std::map<int, std::pair<int, int>>> judges;
  for (const auto& r : rows) {
    if (r.relevant != 0 && r.relevant != 1)
      throw IncompleteJudgments("relevance must be 0 or 1, got " + std::to_string(r.relevant));
    auto& cell = judges[r.judge_id][r.topic];
    cell.first += r.relevant;
    cell.second += 1;
  }

  VmCmResult result;
  for (const auto& [judge, topics] : judges) {
    int valid = 0;
    long long relevant = 0;
    for (const auto& [topic, cell] : topics) {
      if (cell.second != k)
        throw IncompleteJudgments("judge " + judge + " topic " + std::to_string(topic) + " has " +
                                  std::to_string(cell.second) + " rows, expected " +
                                  std::to_string(k));
      if (cell.first >= validity_threshold) ++valid;
      relevant += cell.first;
    }
    JudgeScore score;
    score.judge_id = judge;
    score.vm = static_cast<double>(valid) / static_cast<double>(topics.size());
    score.cm = static_cast<double>(relevant) / static_cast<double>(topics.size() * k);
    result.vm_average += score.vm;
    result.cm_average += score.cm;
    result.per_judge.push_back(std::move(score));
  }
  result.vm_average /= static_cast<double>(result.per_judge.size());
  result.cm_average /= static_cast<double>(result.per_judge.size());
  return result;
}

std::vector<std::pair<int, double>> top_k_skills(const TrainedModel& model, int topic, int k) {
  if (topic < 0 || topic >= model.num_topics)
    throw TopicOutOfRange("topic " + std::to_string(topic));
  std::vector<std::pair<int, double>> ranked(model.num_skills);
  for (int s = 0; s < model.num_skills; ++s)
    ranked[s] = {s, model.topic_skill_posterior(s, topic)};
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (k < static_cast<int>(ranked.size()))
    ranked.resize(std::max(k, 0));
  return ranked;
}

ResumeScore resume_skill_score(const TrainedModel& model,
                               std::span<const std::pair<int, int>> skills,
                               std::span<const int> criteria) {
  const auto scores = model.popularity_scores(criteria);
  ResumeScore out;
  for (auto [skill, count] : skills) {
    if (skill < 0 || skill >= model.num_skills) {
      out.unknown_skills += static_cast<std::size_t>(count);
      continue;
    }
    out.score += static_cast<double>(count) * scores[skill];
  }
  return out;
}

namespace {

std::vector<double> fractional_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

// merge-sort inversion count
long long count_swaps(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo,
                      std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = count_swaps(v, tmp, lo, mid) + count_swaps(v, tmp, mid, hi);
  std::size_t a = lo, b = mid, t = lo;
  while (a < mid && b < hi) {
    if (v[b] < v[a]) {
      swaps += static_cast<long long>(mid - a);
      tmp[t++] = v[b++];
    } else {
      tmp[t++] = v[a++];
    }
  }
  while (a < mid) tmp[t++] = v[a++];
  while (b < hi) tmp[t++] = v[b++];
  std::copy(tmp.begin() + static_cast<long>(lo), tmp.begin() + static_cast<long>(hi),
            v.begin() + static_cast<long>(lo));
  return swaps;
}

long long tie_pairs(std::span<const double> sorted_keys) {
  long long pairs = 0;
  std::size_t i = 0;
  while (i < sorted_keys.size()) {
    std::size_t j = i;
    while (j + 1 < sorted_keys.size() && sorted_keys[j + 1] == sorted_keys[i]) ++j;
    const long long t = static_cast<long long>(j - i + 1);
    pairs += t * (t - 1) / 2;
    i = j + 1;
  }
  return pairs;
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthMismatch(std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.size() < 2) throw LengthMismatch("need at least 2 observations");
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("zero rank variance");
  return sxy / std::sqrt(sxx * syy);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const std::size_t n = x.size();

  // Knight's algorithm: sort by (x, y), count exchanges needed to sort y.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }

  const long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
  const long long n1 = tie_pairs(xs);
  std::vector<double> ys_sorted = ys;
  std::sort(ys_sorted.begin(), ys_sorted.end());
  const long long n2 = tie_pairs(ys_sorted);

  // joint ties over (x, y)
  long long n3 = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && xs[j + 1] == xs[i] && ys[j + 1] == ys[i]) ++j;
      const long long t = static_cast<long long>(j - i + 1);
      n3 += t * (t - 1) / 2;
      i = j + 1;
    }
  }

  std::vector<double> tmp(n);
  const long long swaps = count_swaps(ys, tmp, 0, n);
  const long long concordant_minus_discordant = n0 - n1 - n2 + n3 - 2 * swaps;

  if (n0 - n1 == 0 || n0 - n2 == 0) throw DegenerateInput("all values tied in one input");
  const double denom = std::sqrt(static_cast<double>(n0 - n1)) *
                       std::sqrt(static_cast<double>(n0 - n2));
  return static_cast<double>(concordant_minus_discordant) / denom;
}

double tau_z_test(double tau, long long n) {
  if (n < 2) throw LengthMismatch("z-test needs n >= 2");
  const double dn = static_cast<double>(n);
  return 3.0 * tau * std::sqrt(dn * (dn - 1.0)) / std::sqrt(2.0 * (2.0 * dn + 5.0));
}

double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace sptm
