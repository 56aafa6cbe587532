#pragma once

// Model files: flat INI key-value documents.
//
//   format_version = 1
//   child_states   = 3
//   parent_states  = 3, 3
//   expression     = WMEAN          ; WMEAN | WMIN | WMAX | MIXMINMAX
//   weights        = 0.4, 0.6       ; MIXMINMAX: w_min, w_max
//   variance       = 0.01
//   sample_size    = 5

#include <filesystem>
#include <istream>
#include <string>

#include "rnm/error.hpp"
#include "rnm/model.hpp"

namespace rnm::cli {

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  RankedFragment fragment;
  WeightExpressionSpec spec;
  GenerationParams params;
};

/// Malformed document: missing key, unparsable number, unknown version.
class ModelFileError : public Error {
 public:
  using Error::Error;
};

/// Parses and validates. Throws ModelFileError for document problems,
/// ArgumentError for out-of-range values and ValidationError when the weights
/// fall outside the expression's feasible set.
ModelFile parse_model(std::istream& in);
ModelFile read_model_file(const std::filesystem::path& path);

}  // namespace rnm::cli
