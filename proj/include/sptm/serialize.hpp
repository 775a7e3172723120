#pragma once

#include <string>

#include "sptm/baselines.hpp"
#include "sptm/dictionary.hpp"
#include "sptm/model.hpp"

namespace sptm {

// Versioned little-endian binary container with a trailing FNV-1a checksum.
// Header: magic, format version, K, S, L, M, seed, dictionary hash. Loading
// rejects unknown versions (VersionMismatch) and bad checksums or truncated
// payloads (CorruptModel).
std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& bytes);

void save_model_file(const std::string& path, const TrainedModel& model);
TrainedModel load_model_file(const std::string& path);

// Throws VersionMismatch when the model was trained against a different
// dictionary (compared by content hash).
void verify_dictionary_binding(const TrainedModel& model, const SkillDictionary& dict);

std::string serialize_frequency(const FrequencyTable& table, std::uint64_t dictionary_hash);
FrequencyTable deserialize_frequency(const std::string& bytes,
                                     std::uint64_t* dictionary_hash = nullptr);

void save_frequency_file(const std::string& path, const FrequencyTable& table,
                         std::uint64_t dictionary_hash);
FrequencyTable load_frequency_file(const std::string& path,
                                   std::uint64_t* dictionary_hash = nullptr);

}  // namespace sptm
