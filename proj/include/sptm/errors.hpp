#pragma once

#include <stdexcept>
#include <string>

namespace sptm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SPTM_DEFINE_ERROR(NAME)                                          \
  struct NAME : Error {                                                  \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
  }

// corpus
SPTM_DEFINE_ERROR(DuplicateSkill);
SPTM_DEFINE_ERROR(EmptyDictionary);
SPTM_DEFINE_ERROR(MalformedRecord);

// skillnet
SPTM_DEFINE_ERROR(UnknownSkill);

// sptm_core
SPTM_DEFINE_ERROR(EmptyCorpus);
SPTM_DEFINE_ERROR(InconsistentCounts);
SPTM_DEFINE_ERROR(TopicOutOfRange);
SPTM_DEFINE_ERROR(UnknownLabel);
SPTM_DEFINE_ERROR(EmptyTestSet);
SPTM_DEFINE_ERROR(VersionMismatch);
SPTM_DEFINE_ERROR(CorruptModel);

// baselines
SPTM_DEFINE_ERROR(LabelUnseen);

// evalsuite
SPTM_DEFINE_ERROR(IncompleteJudgments);
SPTM_DEFINE_ERROR(LengthMismatch);
SPTM_DEFINE_ERROR(DegenerateInput);

// synthgen
SPTM_DEFINE_ERROR(InvalidDims);
SPTM_DEFINE_ERROR(DimMismatch);

#undef SPTM_DEFINE_ERROR

}  // namespace sptm
