#include "sptm/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "sptm/errors.hpp"
#include "sptm/text.hpp"

namespace sptm {

namespace {

constexpr char kModelMagic[8] = {'S', 'P', 'T', 'M', 'M', 'D', 'L', '\x01'};
constexpr char kFreqMagic[8] = {'S', 'P', 'T', 'M', 'F', 'R', 'Q', '\x01'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  void raw(const void* data, std::size_t n) {
    buf_.append(static_cast<const char*>(data), n);
  }
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    raw(&v, sizeof(T));
  }
  void put_i32(std::int32_t v) { put(v); }
  void put_i64(std::int64_t v) { put(v); }
  void put_u64(std::uint64_t v) { put(v); }
  void put_f64(double v) { put(v); }
  template <typename T>
  void put_vec(const std::vector<T>& v) {
    put_u64(v.size());
    for (const T& x : v) put(x);
  }
  std::string finish() {
    const std::uint64_t checksum = fnv1a64(buf_);
    put_u64(checksum);
    return std::move(buf_);
  }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(const std::string& bytes) : data_(bytes) {
    if (data_.size() < sizeof(std::uint64_t)) throw CorruptModel("truncated file");
    const std::size_t body = data_.size() - sizeof(std::uint64_t);
    std::uint64_t stored;
    std::memcpy(&stored, data_.data() + body, sizeof(stored));
    if (stored != fnv1a64(std::string_view(data_.data(), body)))
      throw CorruptModel("checksum mismatch");
    end_ = body;
  }
  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    if (pos_ + sizeof(T) > end_) throw CorruptModel("truncated payload");
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  template <typename T>
  std::vector<T> get_vec() {
    const std::uint64_t n = get<std::uint64_t>();
    if (n > (end_ - pos_) / sizeof(T)) throw CorruptModel("vector length exceeds payload");
    std::vector<T> v(n);
    for (auto& x : v) x = get<T>();
    return v;
  }
  void expect_magic(const char (&magic)[8]) {
    char got[8];
    if (pos_ + 8 > end_) throw CorruptModel("missing magic");
    std::memcpy(got, data_.data() + pos_, 8);
    pos_ += 8;
    if (std::memcmp(got, magic, 8) != 0) throw CorruptModel("unrecognized magic");
  }

 private:
  const std::string& data_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptModel("cannot open file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

std::string serialize_model(const TrainedModel& m) {
  Writer w;
  w.raw(kModelMagic, 8);
  w.put<std::uint32_t>(kFormatVersion);
  w.put_i32(m.num_topics);
  w.put_i32(m.num_skills);
  w.put_i32(m.num_categories);
  w.put_i32(m.num_documents);
  w.put_u64(m.seed);
  w.put_u64(m.dictionary_hash);
  w.put_f64(m.hp.alpha);
  w.put_f64(m.hp.beta);
  w.put_f64(m.hp.delta);
  w.put_f64(m.hp.gamma);
  w.put_i32(m.iterations);
  w.put_f64(m.final_log_likelihood);
  w.put_vec(m.skill_category);
  w.put_vec(m.skill_topic);
  w.put_vec(m.topic_category);
  w.put_vec(m.label_prior);
  return w.finish();
}

TrainedModel deserialize_model(const std::string& bytes) {
  Reader r(bytes);
  r.expect_magic(kModelMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion)
    throw VersionMismatch("model format v" + std::to_string(version) + ", reader supports v" +
                          std::to_string(kFormatVersion));
  TrainedModel m;
  m.num_topics = r.get<std::int32_t>();
  m.num_skills = r.get<std::int32_t>();
  m.num_categories = r.get<std::int32_t>();
  m.num_documents = r.get<std::int32_t>();
  m.seed = r.get<std::uint64_t>();
  m.dictionary_hash = r.get<std::uint64_t>();
  m.hp.alpha = r.get<double>();
  m.hp.beta = r.get<double>();
  m.hp.delta = r.get<double>();
  m.hp.gamma = r.get<double>();
  m.hp.num_topics = m.num_topics;
  m.hp.num_skills = m.num_skills;
  m.hp.num_categories = m.num_categories;
  m.iterations = r.get<std::int32_t>();
  m.final_log_likelihood = r.get<double>();
  m.skill_category = r.get_vec<int>();
  m.skill_topic = r.get_vec<std::int64_t>();
  m.topic_category = r.get_vec<std::int64_t>();
  m.label_prior = r.get_vec<double>();

  if (m.num_topics < 1 || m.num_skills < 1 || m.num_categories < 1)
    throw CorruptModel("non-positive dimensions");
  if (m.skill_category.size() != static_cast<std::size_t>(m.num_skills) ||
      m.skill_topic.size() != static_cast<std::size_t>(m.num_skills) * m.num_topics ||
      m.topic_category.size() != static_cast<std::size_t>(m.num_topics) * m.num_categories ||
      m.label_prior.size() != static_cast<std::size_t>(m.num_topics))
    throw CorruptModel("table sizes disagree with header dimensions");
  for (int c : m.skill_category)
    if (c < 0 || c >= m.num_categories) throw CorruptModel("category id out of range");

  m.rebuild_derived();
  return m;
}

void save_model_file(const std::string& path, const TrainedModel& model) {
  write_file(path, serialize_model(model));
}

TrainedModel load_model_file(const std::string& path) {
  return deserialize_model(read_file(path));
}

void verify_dictionary_binding(const TrainedModel& model, const SkillDictionary& dict) {
  if (model.dictionary_hash != dict.hash())
    throw VersionMismatch("model was trained against a different dictionary");
  if (model.num_skills != dict.size())
    throw VersionMismatch("model skill count differs from dictionary");
}

std::string serialize_frequency(const FrequencyTable& t, std::uint64_t dictionary_hash) {
  Writer w;
  w.raw(kFreqMagic, 8);
  w.put<std::uint32_t>(kFormatVersion);
  w.put_i32(t.num_labels);
  w.put_i32(t.num_skills);
  w.put_u64(dictionary_hash);
  w.put_vec(t.label_prior);
  w.put_vec(t.label_seen);
  for (int k = 0; k < t.num_labels; ++k) w.put_vec(t.probs[k]);
  return w.finish();
}

FrequencyTable deserialize_frequency(const std::string& bytes, std::uint64_t* dictionary_hash) {
  Reader r(bytes);
  r.expect_magic(kFreqMagic);
  const auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion)
    throw VersionMismatch("frequency format v" + std::to_string(version));
  FrequencyTable t;
  t.num_labels = r.get<std::int32_t>();
  t.num_skills = r.get<std::int32_t>();
  const auto hash = r.get<std::uint64_t>();
  if (dictionary_hash) *dictionary_hash = hash;
  t.label_prior = r.get_vec<double>();
  t.label_seen = r.get_vec<std::uint8_t>();
  if (t.num_labels < 1 || t.label_prior.size() != static_cast<std::size_t>(t.num_labels) ||
      t.label_seen.size() != static_cast<std::size_t>(t.num_labels))
    throw CorruptModel("frequency table header mismatch");
  t.probs.resize(t.num_labels);
  for (int k = 0; k < t.num_labels; ++k) {
    t.probs[k] = r.get_vec<double>();
    if (!t.probs[k].empty() && t.probs[k].size() != static_cast<std::size_t>(t.num_skills))
      throw CorruptModel("frequency row size mismatch");
  }
  return t;
}

void save_frequency_file(const std::string& path, const FrequencyTable& table,
                         std::uint64_t dictionary_hash) {
  write_file(path, serialize_frequency(table, dictionary_hash));
}

FrequencyTable load_frequency_file(const std::string& path, std::uint64_t* dictionary_hash) {
  return deserialize_frequency(read_file(path), dictionary_hash);
}

}  // namespace sptm
