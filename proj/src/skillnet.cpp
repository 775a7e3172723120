#include "sptm/skillnet.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "sptm/errors.hpp"
#include "sptm/text.hpp"

namespace sptm {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

int SkillNet::weight(int a, int b) const {
  if (a == b) return 0;
  if (a > b) std::swap(a, b);
  auto it = edges.find({a, b});
  return it == edges.end() ? 0 : it->second;
}

std::vector<std::vector<std::pair<int, int>>> SkillNet::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(num_skills);
  for (const auto& [key, w] : edges) {
    adj[key.first].emplace_back(key.second, w);
    adj[key.second].emplace_back(key.first, w);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

SkillNet build_skillnet(std::span<const JobPosting> postings, int num_skills) {
  SkillNet net;
  net.num_skills = num_skills;
  for (const auto& p : postings) {
    // distinct unordered pairs per posting; multiplicity within the posting
    // does not matter, only co-presence
    for (std::size_t a = 0; a < p.skills.size(); ++a)
      for (std::size_t b = a + 1; b < p.skills.size(); ++b)
        ++net.edges[{p.skills[a].first, p.skills[b].first}];
  }
  return net;
}

void write_skillnet(std::ostream& out, const SkillNet& net) {
  out << "skill_i,skill_j,weight\n";
  for (const auto& [key, w] : net.edges)
    out << key.first << ',' << key.second << ',' << w << '\n';
}

long long PseudoDocument::token_count() const {
  long long n = 0;
  for (auto [skill, count] : tokens) n += count;
  return n;
}

std::vector<int> PseudoDocument::lambda_indices() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < lambda.size(); ++k)
    if (lambda[k]) out.push_back(static_cast<int>(k));
  return out;
}

std::vector<std::uint8_t> criteria_vector(int skill, std::span<const JobPosting> postings,
                                          int min_support, int num_labels) {
  if (skill < 0) throw UnknownSkill("skill id " + std::to_string(skill));
  std::vector<int> support(num_labels, 0);
  bool seen = false;
  for (const auto& p : postings) {
    const bool contains = std::binary_search(
        p.skills.begin(), p.skills.end(), std::pair<int, int>{skill, 0},
        [](const auto& a, const auto& b) { return a.first < b.first; });
    if (!contains) continue;
    seen = true;
    for (int gi : p.labels) ++support[gi];
  }
  if (!seen) throw UnknownSkill("skill id " + std::to_string(skill) + " appears in no posting");
  std::vector<std::uint8_t> lambda(num_labels, 0);
  for (int k = 0; k < num_labels; ++k)
    if (support[k] >= min_support) lambda[k] = 1;
  return lambda;
}

std::vector<PseudoDocument> make_documents(const SkillNet& net,
                                           std::span<const JobPosting> postings,
                                           const SkillDictionary& dict, MultiplicityMode mode,
                                           int min_support, DocumentReport* report) {
  DocumentReport local;
  DocumentReport& rep = report ? *report : local;

  // single pass over postings to get every skill's per-label support
  std::vector<std::vector<int>> support(dict.size(), std::vector<int>());
  for (const auto& p : postings) {
    for (auto [skill, count] : p.skills) {
      auto& sup = support[skill];
      if (sup.empty()) sup.assign(kNumCriteriaLabels, 0);
      for (int gi : p.labels) ++sup[gi];
    }
  }

  const auto adj = net.adjacency();
  std::vector<PseudoDocument> docs;
  for (int s = 0; s < net.num_skills; ++s) {
    if (adj[s].empty()) {
      ++rep.isolated_skipped;
      continue;
    }
    PseudoDocument doc;
    doc.central_skill = s;
    doc.tokens.reserve(adj[s].size());
    for (auto [nbr, w] : adj[s])
      doc.tokens.emplace_back(nbr, mode == MultiplicityMode::Weighted ? w : 1);
    doc.lambda.assign(kNumCriteriaLabels, 0);
    if (!support[s].empty()) {
      for (int k = 0; k < kNumCriteriaLabels; ++k)
        if (support[s][k] >= min_support) doc.lambda[k] = 1;
    }
    if (doc.lambda_indices().empty()) {
      ++rep.zero_lambda_skipped;
      continue;
    }
    ++rep.emitted;
    docs.push_back(std::move(doc));
  }
  return docs;
}

void write_documents(std::ostream& out, const DocumentCorpus& corpus) {
  ordered_json meta;
  meta["num_topics"] = corpus.num_topics;
  meta["num_skills"] = corpus.num_skills;
  meta["num_categories"] = corpus.num_categories;
  meta["skill_category"] = corpus.skill_category;
  ordered_json head;
  head["meta"] = std::move(meta);
  out << head.dump() << '\n';
  for (const auto& d : corpus.docs) {
    ordered_json rec;
    rec["central_skill"] = d.central_skill;
    json toks = json::array();
    for (auto [skill, count] : d.tokens) toks.push_back(json::array({skill, count}));
    rec["tokens"] = std::move(toks);
    rec["lambda"] = d.lambda_indices();
    out << rec.dump() << '\n';
  }
}

DocumentCorpus read_documents(std::istream& in) {
  DocumentCorpus corpus;
  std::string line;
  bool have_meta = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      throw MalformedRecord("bad document line: " + line);
    if (!have_meta) {
      if (!rec.contains("meta")) throw MalformedRecord("document dump must start with a meta line");
      const auto& m = rec["meta"];
      corpus.num_topics = m.at("num_topics").get<int>();
      corpus.num_skills = m.at("num_skills").get<int>();
      corpus.num_categories = m.at("num_categories").get<int>();
      corpus.skill_category = m.at("skill_category").get<std::vector<int>>();
      have_meta = true;
      continue;
    }
    PseudoDocument d;
    d.central_skill = rec.at("central_skill").get<int>();
    for (const auto& t : rec.at("tokens"))
      d.tokens.emplace_back(t.at(0).get<int>(), t.at(1).get<int>());
    std::sort(d.tokens.begin(), d.tokens.end());
    d.lambda.assign(corpus.num_topics, 0);
    for (int k : rec.at("lambda").get<std::vector<int>>()) d.lambda.at(k) = 1;
    corpus.docs.push_back(std::move(d));
  }
  if (!have_meta) throw MalformedRecord("empty document dump");
  return corpus;
}

DocumentCorpus read_documents_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedRecord("cannot open document dump: " + path);
  return read_documents(in);
}

}  // namespace sptm
