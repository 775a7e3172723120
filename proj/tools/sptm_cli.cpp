// sptm -- skill popularity toolkit
//
// Pipeline: ingest job postings, build the skill co-occurrence net, train
// the labeled topic model (or a baseline), then rank / evaluate / score.
// All randomness flows from the configured seed; reports are byte-stable.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sptm/baselines.hpp"
#include "sptm/criteria.hpp"
#include "sptm/dictionary.hpp"
#include "sptm/errors.hpp"
#include "sptm/evalsuite.hpp"
#include "sptm/model.hpp"
#include "sptm/posting.hpp"
#include "sptm/serialize.hpp"
#include "sptm/skillnet.hpp"
#include "sptm/synthgen.hpp"
#include "sptm/text.hpp"

namespace {

using nlohmann::json;

// exit codes shared by all subcommands
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;       // unreadable inputs
constexpr int kExitEmptyCorpus = 3;
constexpr int kExitBadCriteria = 4;
constexpr int kExitEmptyEval = 5;

struct RunConfig {
  std::string postings, dictionary, docs, model, truth;
  double alpha = 0.01, beta = 0.01, delta = 1.0, gamma = 0.01;
  int max_iters = 800;
  double tol = 1e-3;
  int burn_in = 10;
  std::uint64_t seed = 0;
  std::string multiplicity_mode = "weighted";
  int min_support = 1;
};

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw sptm::MalformedRecord("cannot open config file: " + path);
  json rec = json::parse(in, nullptr, false);
  if (rec.is_discarded() || !rec.is_object())
    throw sptm::MalformedRecord("config file is not a JSON object: " + path);
  auto get = [&](const char* key, auto& field) {
    if (rec.contains(key)) rec.at(key).get_to(field);
  };
  get("postings", cfg.postings);
  get("dictionary", cfg.dictionary);
  get("docs", cfg.docs);
  get("model", cfg.model);
  get("truth", cfg.truth);
  get("alpha", cfg.alpha);
  get("beta", cfg.beta);
  get("delta", cfg.delta);
  get("gamma", cfg.gamma);
  get("max_iters", cfg.max_iters);
  get("tol", cfg.tol);
  get("burn_in", cfg.burn_in);
  get("seed", cfg.seed);
  get("multiplicity_mode", cfg.multiplicity_mode);
  get("min_support", cfg.min_support);
}

std::ofstream open_output(const std::string& path) {
  if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw sptm::MalformedRecord("cannot write: " + path);
  return out;
}

std::vector<int> parse_criteria_list(const std::string& csv) {
  std::vector<int> labels;
  for (const auto& part : sptm::split(csv, ',')) {
    if (sptm::trim(part).empty()) continue;
    labels.push_back(sptm::parse_criteria_spec(sptm::trim(part)));
  }
  if (labels.empty()) throw sptm::UnknownLabel("no criteria given");
  return labels;
}

sptm::MultiplicityMode parse_mode(const std::string& mode) {
  if (mode == "weighted") return sptm::MultiplicityMode::Weighted;
  if (mode == "binary") return sptm::MultiplicityMode::Binary;
  throw sptm::MalformedRecord("multiplicity_mode must be weighted or binary, got " + mode);
}

std::string model_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_ingest(const RunConfig& cfg, const std::string& out_postings,
               const std::string& report_path) {
  const auto dict = sptm::SkillDictionary::load_csv_file(cfg.dictionary);
  sptm::ParseReport report;
  const auto postings = sptm::parse_postings_file(cfg.postings, dict, &report);

  if (!out_postings.empty()) {
    auto out = open_output(out_postings);
    sptm::write_postings(out, postings, dict);
  }
  const std::string summary = "parsed=" + std::to_string(report.parsed) +
                              " dropped_no_skills=" + std::to_string(report.dropped_no_skills) +
                              " malformed=" + std::to_string(report.malformed) +
                              " unknown_skill_names=" + std::to_string(report.unknown_skill_names);
  if (!report_path.empty()) {
    auto out = open_output(report_path);
    out << "parsed,dropped_no_skills,malformed,unknown_skill_names\n"
        << report.parsed << ',' << report.dropped_no_skills << ',' << report.malformed << ','
        << report.unknown_skill_names << '\n';
  }
  std::cout << summary << '\n';
  if (report.malformed > 0)
    std::cerr << "warning: skipped " << report.malformed << " malformed record(s)\n";
  if (report.parsed == 0) std::cerr << "warning: no usable postings\n";
  return kExitOk;
}

int cmd_build_net(const RunConfig& cfg, const std::string& edges_path,
                  const std::string& docs_path) {
  const auto dict = sptm::SkillDictionary::load_csv_file(cfg.dictionary);
  const auto postings = sptm::parse_postings_file(cfg.postings, dict);
  const auto net = sptm::build_skillnet(postings, dict.size());

  if (!edges_path.empty()) {
    auto out = open_output(edges_path);
    sptm::write_skillnet(out, net);
  }
  if (!docs_path.empty()) {
    sptm::DocumentReport report;
    sptm::DocumentCorpus corpus;
    corpus.num_topics = sptm::kNumCriteriaLabels;
    corpus.num_skills = dict.size();
    corpus.num_categories = dict.num_categories();
    corpus.skill_category = dict.category_map();
    corpus.docs = sptm::make_documents(net, postings, dict, parse_mode(cfg.multiplicity_mode),
                                       cfg.min_support, &report);
    auto out = open_output(docs_path);
    sptm::write_documents(out, corpus);
    std::cout << "documents=" << report.emitted << " isolated=" << report.isolated_skipped
              << " zero_lambda=" << report.zero_lambda_skipped << '\n';
  }
  std::cout << "edges=" << net.edges.size() << '\n';
  return kExitOk;
}

struct LoadedCorpus {
  sptm::DocumentCorpus corpus;
  std::vector<double> label_prior;
  std::uint64_t dictionary_hash = 0;
};

LoadedCorpus load_training_corpus(const RunConfig& cfg) {
  LoadedCorpus loaded;
  if (!cfg.docs.empty()) {
    loaded.corpus = sptm::read_documents_file(cfg.docs);
    loaded.label_prior =
        sptm::document_label_fractions(loaded.corpus.docs, loaded.corpus.num_topics);
    return loaded;
  }
  const auto dict = sptm::SkillDictionary::load_csv_file(cfg.dictionary);
  const auto postings = sptm::parse_postings_file(cfg.postings, dict);
  const auto net = sptm::build_skillnet(postings, dict.size());
  loaded.corpus.num_topics = sptm::kNumCriteriaLabels;
  loaded.corpus.num_skills = dict.size();
  loaded.corpus.num_categories = dict.num_categories();
  loaded.corpus.skill_category = dict.category_map();
  loaded.corpus.docs = sptm::make_documents(net, postings, dict,
                                            parse_mode(cfg.multiplicity_mode), cfg.min_support);
  loaded.label_prior = sptm::posting_label_fractions(postings);
  loaded.dictionary_hash = dict.hash();
  return loaded;
}

int cmd_train(const RunConfig& cfg, const std::string& baseline, const std::string& out_model,
              const std::string& log_path, const std::string& recovery_path) {
  auto loaded = load_training_corpus(cfg);
  auto& corpus = loaded.corpus;
  if (corpus.docs.empty()) throw sptm::EmptyCorpus("no trainable documents");

  sptm::Hyperparameters hp;
  hp.alpha = cfg.alpha;
  hp.beta = cfg.beta;
  hp.delta = cfg.delta;
  hp.gamma = cfg.gamma;
  hp.num_topics = corpus.num_topics;
  hp.num_skills = corpus.num_skills;
  hp.num_categories = corpus.num_categories;

  sptm::TrainConfig tc;
  tc.max_iters = cfg.max_iters;
  tc.tol = cfg.tol;
  tc.burn_in = cfg.burn_in;
  tc.seed = cfg.seed;

  if (baseline == "frequency") {
    std::vector<sptm::LabeledBag> bags;
    bags.reserve(corpus.docs.size());
    for (const auto& d : corpus.docs) bags.push_back(sptm::bag_from_document(d));
    auto table = sptm::build_frequency_table(bags, corpus.num_topics, corpus.num_skills);
    sptm::save_frequency_file(out_model, table, loaded.dictionary_hash);
    std::cout << "frequency table over " << bags.size() << " documents -> " << out_model << '\n';
    return kExitOk;
  }

  std::vector<sptm::IterationRecord> log;
  sptm::TrainedModel model;
  if (baseline == "llda") {
    model = sptm::llda_train(corpus.docs, hp, tc, &log, &loaded.label_prior,
                             loaded.dictionary_hash);
  } else {
    model = sptm::train(corpus.docs, corpus.skill_category, hp, tc, &log, &loaded.label_prior,
                        loaded.dictionary_hash);
  }
  sptm::save_model_file(out_model, model);

  if (!log_path.empty()) {
    auto out = open_output(log_path);
    out << "sweep,log_likelihood,seconds\n";
    for (const auto& rec : log)
      out << rec.sweep << ',' << sptm::format_double(rec.log_likelihood) << ','
          << sptm::format_double(rec.seconds) << '\n';
  }
  if (!recovery_path.empty()) {
    if (cfg.truth.empty()) throw sptm::MalformedRecord("--recovery-out needs --truth");
    const auto truth = sptm::read_truth_file(cfg.truth);
    const auto report = sptm::recovery_error(model, truth);
    auto out = open_output(recovery_path);
    out << "topic,tv\n";
    for (std::size_t j = 0; j < report.per_topic_tv.size(); ++j)
      out << j << ',' << sptm::format_double(report.per_topic_tv[j]) << '\n';
    out << "mean," << sptm::format_double(report.mean_tv) << '\n';
    std::cout << "recovery mean TV = " << report.mean_tv << '\n';
  }
  std::cout << "trained " << (baseline.empty() ? "sptm" : baseline) << " in " << model.iterations
            << " sweep(s), final LL " << sptm::format_double(model.final_log_likelihood)
            << " -> " << out_model << '\n';
  return kExitOk;
}

int cmd_rank(const RunConfig& cfg, const std::string& criteria_csv, int k,
             const std::string& out_path) {
  const auto labels = parse_criteria_list(criteria_csv);
  const auto model = sptm::load_model_file(cfg.model);
  const auto dict = sptm::SkillDictionary::load_csv_file(cfg.dictionary);
  sptm::verify_dictionary_binding(model, dict);

  const auto ranked = model.popularity(labels);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_output(out_path);
    out = &file;
  }
  *out << "rank,skill,category,score\n";
  for (int i = 0; i < k && i < static_cast<int>(ranked.size()); ++i) {
    const auto [skill, score] = ranked[i];
    *out << (i + 1) << ',' << sptm::csv_quote(dict.skill_name(skill)) << ','
         << sptm::csv_quote(dict.category_name(dict.category_of(skill))) << ','
         << sptm::format_double(score) << '\n';
  }
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const std::vector<std::string>& model_paths,
             const std::string& test_postings, const std::string& test_docs,
             const std::string& out_path) {
  std::vector<sptm::LabeledBag> bags;
  std::size_t skipped = 0;
  if (!test_docs.empty()) {
    const auto corpus = sptm::read_documents_file(test_docs);
    for (const auto& d : corpus.docs) {
      auto bag = sptm::bag_from_document(d);
      if (bag.labels.empty() || bag.skills.empty()) {
        ++skipped;
        continue;
      }
      bags.push_back(std::move(bag));
    }
  } else {
    const auto dict = sptm::SkillDictionary::load_csv_file(cfg.dictionary);
    const auto postings = sptm::parse_postings_file(test_postings, dict);
    for (const auto& p : postings) {
      auto bag = sptm::bag_from_posting(p);
      if (bag.labels.empty() || bag.skills.empty()) {
        ++skipped;
        continue;
      }
      bags.push_back(std::move(bag));
    }
  }
  if (skipped > 0) std::cerr << "warning: skipped " << skipped << " unusable test record(s)\n";
  if (bags.empty()) throw sptm::EmptyTestSet("no usable test records");

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_output(out_path);
    out = &file;
  }
  *out << "model,log_likelihood\n";
  for (const auto& path : model_paths) {
    double ll = 0.0;
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw sptm::MalformedRecord("cannot open model: " + path);
    std::string head(8, '\0');
    probe.read(head.data(), 8);
    if (head.rfind("SPTMFRQ", 0) == 0) {
      const auto table = sptm::load_frequency_file(path);
      ll = table.held_out_log_likelihood(bags);
    } else {
      const auto model = sptm::load_model_file(path);
      ll = model.held_out_log_likelihood(bags);
    }
    *out << sptm::csv_quote(model_name(path)) << ',' << sptm::format_double(ll) << '\n';
  }
  return kExitOk;
}

int cmd_score_resumes(const RunConfig& cfg, const std::string& resumes_path,
                      const std::string& criteria_csv, const std::string& scores_path,
                      const std::string& correlation_path) {
  const auto labels = parse_criteria_list(criteria_csv);
  const auto model = sptm::load_model_file(cfg.model);
  const auto dict = sptm::SkillDictionary::load_csv_file(cfg.dictionary);
  sptm::verify_dictionary_binding(model, dict);

  std::ifstream in(resumes_path);
  if (!in) throw sptm::MalformedRecord("cannot open resumes file: " + resumes_path);

  struct Row {
    std::string id;
    double hr = 0.0;
    double score = 0.0;
    std::size_t unknown = 0;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (sptm::trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("resume_id")) {
      std::cerr << "warning: skipping malformed resume line\n";
      continue;
    }
    Row row;
    row.id = rec.at("resume_id").is_string() ? rec.at("resume_id").get<std::string>()
                                             : std::to_string(rec.at("resume_id").get<long long>());
    row.hr = rec.value("hr_score", 0.0);
    std::map<int, int> counts;
    std::size_t unknown = 0;
    if (rec.contains("skills"))
      for (const auto& s : rec.at("skills")) {
        const int id = dict.find(s.get<std::string>());
        if (id < 0) {
          ++unknown;
        } else {
          ++counts[id];
        }
      }
    std::vector<std::pair<int, int>> skills(counts.begin(), counts.end());
    const auto scored = sptm::resume_skill_score(model, skills, labels);
    row.score = scored.score;
    row.unknown = scored.unknown_skills + unknown;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw sptm::EmptyTestSet("no resumes to score");

  if (!scores_path.empty()) {
    auto out = open_output(scores_path);
    out << "resume_id,hr_score,skill_score,unknown_skills\n";
    for (const auto& r : rows)
      out << sptm::csv_quote(r.id) << ',' << sptm::format_double(r.hr) << ','
          << sptm::format_double(r.score) << ',' << r.unknown << '\n';
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!correlation_path.empty()) {
    file = open_output(correlation_path);
    out = &file;
  }
  *out << "model,spearman,kendall_tau,z,p\n";
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(r.score);
    ys.push_back(r.hr);
  }
  const std::string name = model_name(cfg.model);
  try {
    const double rho = sptm::spearman(xs, ys);
    const double tau = sptm::kendall_tau(xs, ys);
    const double z = sptm::tau_z_test(tau, static_cast<long long>(xs.size()));
    const double p = sptm::normal_two_sided_p(z);
    *out << sptm::csv_quote(name) << ',' << sptm::format_double(rho) << ','
         << sptm::format_double(tau) << ',' << sptm::format_double(z) << ','
         << sptm::format_double(p) << '\n';
  } catch (const sptm::DegenerateInput& e) {
    *out << sptm::csv_quote(name) << ",degenerate,degenerate,degenerate,degenerate\n";
    std::cerr << "warning: " << e.what() << '\n';
  }
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, int k, int s, int l, int m, int n,
              const std::string& docs_path, const std::string& truth_path) {
  sptm::Hyperparameters hp;
  hp.alpha = cfg.alpha;
  hp.beta = cfg.beta;
  hp.delta = cfg.delta;
  hp.gamma = cfg.gamma;
  hp.num_topics = k;
  hp.num_skills = s;
  hp.num_categories = l;
  const auto corpus = sptm::generate_corpus(hp, m, n, cfg.seed);

  sptm::DocumentCorpus dump;
  dump.num_topics = k;
  dump.num_skills = s;
  dump.num_categories = l;
  dump.skill_category = corpus.truth.skill_category;
  dump.docs = corpus.docs;
  {
    auto out = open_output(docs_path);
    sptm::write_documents(out, dump);
  }
  if (!truth_path.empty()) {
    auto out = open_output(truth_path);
    sptm::write_truth(out, corpus.truth);
  }
  std::cout << "generated " << corpus.docs.size() << " documents -> " << docs_path << '\n';
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"skill popularity toolkit: co-occurrence network + labeled topic model"};
  app.require_subcommand(1);

  RunConfig cfg;
  // the config file loads before parsing so explicit flags override it
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") load_config_file(argv[i + 1], cfg);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; flags override its fields");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--postings", cfg.postings, "postings JSONL");
    sub->add_option("--dictionary", cfg.dictionary, "skill dictionary CSV");
    sub->add_option("--docs", cfg.docs, "pseudo-document dump (skips net construction)");
    sub->add_option("--model", cfg.model, "trained model file");
    sub->add_option("--truth", cfg.truth, "synthetic ground-truth file");
    sub->add_option("--alpha", cfg.alpha);
    sub->add_option("--beta", cfg.beta);
    sub->add_option("--delta", cfg.delta);
    sub->add_option("--gamma", cfg.gamma);
    sub->add_option("--max-iters", cfg.max_iters);
    sub->add_option("--tol", cfg.tol);
    sub->add_option("--burn-in", cfg.burn_in);
    sub->add_option("--seed", cfg.seed);
    sub->add_option("--multiplicity-mode", cfg.multiplicity_mode, "weighted|binary");
    sub->add_option("--min-support", cfg.min_support);
  };

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse and validate postings");
  std::string out_postings, report_path;
  add_common(ingest);
  ingest->add_option("--out", out_postings, "canonical postings JSONL");
  ingest->add_option("--report", report_path, "drop report CSV");

  // build-net
  auto* build = app.add_subcommand("build-net", "build the skill co-occurrence network");
  std::string edges_path, docs_out;
  add_common(build);
  build->add_option("--edges", edges_path, "edge list CSV");
  build->add_option("--docs-out", docs_out, "pseudo-document dump");

  // train
  auto* train = app.add_subcommand("train", "train the model or a baseline");
  std::string baseline, out_model, log_path, recovery_path;
  add_common(train);
  train->add_option("--baseline", baseline, "llda|frequency")
      ->check(CLI::IsMember({"llda", "frequency"}));
  train->add_option("--out-model", out_model, "output model file")->required();
  train->add_option("--log", log_path, "iteration log CSV");
  train->add_option("--recovery-out", recovery_path, "parameter-recovery report (needs --truth)");

  // rank
  auto* rank = app.add_subcommand("rank", "rank skills under criteria");
  std::string criteria_csv, rank_out;
  int top_k = 8;
  add_common(rank);
  rank->add_option("--criteria", criteria_csv, "comma-separated category=value pairs")->required();
  rank->add_option("--k", top_k, "list length");
  rank->add_option("--out", rank_out, "report CSV (stdout if omitted)");

  // eval
  auto* eval = app.add_subcommand("eval", "held-out log-likelihood per model");
  std::vector<std::string> model_paths;
  std::string test_postings, test_docs, eval_out;
  add_common(eval);
  eval->add_option("--models", model_paths, "model files (sptm/llda/frequency)")
      ->required()
      ->delimiter(',');
  eval->add_option("--test", test_postings, "test postings JSONL");
  eval->add_option("--test-docs", test_docs, "test pseudo-document dump");
  eval->add_option("--out", eval_out, "report CSV (stdout if omitted)");

  // score-resumes
  auto* score = app.add_subcommand("score-resumes", "resume skill scores and rank correlation");
  std::string resumes_path, score_criteria, scores_out, corr_out;
  add_common(score);
  score->add_option("--resumes", resumes_path, "resumes JSONL")->required();
  score->add_option("--criteria", score_criteria, "comma-separated category=value pairs")
      ->required();
  score->add_option("--scores-out", scores_out, "per-resume scores CSV");
  score->add_option("--correlation-out", corr_out, "correlation report CSV (stdout if omitted)");

  // synth
  auto* synth = app.add_subcommand("synth", "forward-sample a synthetic corpus");
  int sk = 6, ss = 120, sl = 6, sm = 200, sn = 100;
  std::string synth_docs, synth_truth;
  add_common(synth);
  synth->add_option("--topics", sk);
  synth->add_option("--skills", ss);
  synth->add_option("--categories", sl);
  synth->add_option("--documents", sm);
  synth->add_option("--tokens-per-doc", sn);
  synth->add_option("--out-docs", synth_docs, "document dump")->required();
  synth->add_option("--out-truth", synth_truth, "ground-truth dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (ingest->parsed()) return cmd_ingest(cfg, out_postings, report_path);
  if (build->parsed()) return cmd_build_net(cfg, edges_path, docs_out);
  if (train->parsed()) return cmd_train(cfg, baseline, out_model, log_path, recovery_path);
  if (rank->parsed()) return cmd_rank(cfg, criteria_csv, top_k, rank_out);
  if (eval->parsed()) return cmd_eval(cfg, model_paths, test_postings, test_docs, eval_out);
  if (score->parsed())
    return cmd_score_resumes(cfg, resumes_path, score_criteria, scores_out, corr_out);
  if (synth->parsed()) return cmd_synth(cfg, sk, ss, sl, sm, sn, synth_docs, synth_truth);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const sptm::UnknownLabel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadCriteria;
  } catch (const sptm::EmptyCorpus& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEmptyCorpus;
  } catch (const sptm::EmptyTestSet& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEmptyEval;
  } catch (const sptm::MalformedRecord& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const sptm::EmptyDictionary& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const sptm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
