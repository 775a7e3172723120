#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sptm/posting.hpp"

namespace sptm {

// Undirected co-occurrence graph over skill ids. An edge (i, j) with i < j
// carries the number of postings in which both skills appear.
struct SkillNet {
  int num_skills = 0;
  std::map<std::pair<int, int>, int> edges;  // key (i, j) with i < j

  int weight(int a, int b) const;
  // per-node sorted (neighbor, weight) lists
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

SkillNet build_skillnet(std::span<const JobPosting> postings, int num_skills);

// Deterministic edge-list export, "skill_i,skill_j,weight" sorted by (i, j).
void write_skillnet(std::ostream& out, const SkillNet& net);

// A central skill turned into a trainable document: its neighbors are the
// tokens, the lambda vector marks which topics (criteria labels) the skill
// was observed under.
struct PseudoDocument {
  int central_skill = -1;
  std::vector<std::pair<int, int>> tokens;  // (skill id, multiplicity), sorted
  std::vector<std::uint8_t> lambda;         // length K

  long long token_count() const;  // N_m
  std::vector<int> lambda_indices() const;
};

enum class MultiplicityMode { Weighted, Binary };

// Lambda_k = 1 iff the skill appears in at least min_support postings
// carrying label k. K is the taxonomy size for posting-derived corpora.
std::vector<std::uint8_t> criteria_vector(int skill, std::span<const JobPosting> postings,
                                          int min_support = 1,
                                          int num_labels = kNumCriteriaLabels);

struct DocumentReport {
  std::size_t emitted = 0;
  std::size_t isolated_skipped = 0;     // graph nodes without neighbors
  std::size_t zero_lambda_skipped = 0;  // empty label support (min_support > 1)
};

std::vector<PseudoDocument> make_documents(const SkillNet& net,
                                           std::span<const JobPosting> postings,
                                           const SkillDictionary& dict,
                                           MultiplicityMode mode = MultiplicityMode::Weighted,
                                           int min_support = 1,
                                           DocumentReport* report = nullptr);

// Document dump: a meta line {"meta": {num_topics, num_skills,
// num_categories, skill_category}} followed by one record per line
// {central_skill, tokens: [[skill, count], ...], lambda: [indices]}.
struct DocumentCorpus {
  int num_topics = 0;
  int num_skills = 0;
  int num_categories = 0;
  std::vector<int> skill_category;
  std::vector<PseudoDocument> docs;
};

void write_documents(std::ostream& out, const DocumentCorpus& corpus);
DocumentCorpus read_documents(std::istream& in);
DocumentCorpus read_documents_file(const std::string& path);

}  // namespace sptm
