#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "bsmguard/ml/model.hpp"

namespace bsmguard::ml {

inline constexpr const char* kModelFormat = "bsmguard-model";
inline constexpr int kModelFormatVersion = 1;

/// How a persisted model was produced, so evaluation can rebuild the same split.
struct TrainingProvenance {
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  double window = 0.1;
  std::size_t folds = 5;
  double cv_accuracy = 0.0;
};

struct ModelFile {
  TrainedModel model;
  TrainingProvenance training;
};

/// Writes the JSON document described in docs/model_format.md. Doubles are
/// written in shortest round-trip form, so a reload predicts bit-identically.
void write_model(std::ostream& out, const ModelFile& file);
void save_model(const std::string& path, const ModelFile& file);

/// Throws InputError on a malformed or incompatible document.
ModelFile read_model(std::istream& in);
ModelFile load_model(const std::string& path);

}  // namespace bsmguard::ml
