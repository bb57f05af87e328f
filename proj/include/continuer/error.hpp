#pragma once

#include <stdexcept>
#include <string>

namespace continuer {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
// input/parse problems -> 1, an empty feasible set after filtering -> 2.
enum class errc {
  parse_error,
  range_error,
  duplicate_key,
  schema_mismatch,
  non_finite,
  empty_input,
  empty_dataset,
  empty_layer,
  length_mismatch,
  zero_measured,
  insufficient_nodes,
  no_survivors,
  no_feasible_technique,
  unresolved_action,
  missing_profile,
  insufficient_profiles,
  missing_layer_family,
  all_filtered_out,
  invalid_config,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parse_error: return "ParseError";
    case errc::range_error: return "RangeError";
    case errc::duplicate_key: return "DuplicateKey";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::non_finite: return "NonFinite";
    case errc::empty_input: return "EmptyInput";
    case errc::empty_dataset: return "EmptyDataset";
    case errc::empty_layer: return "EmptyLayer";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::zero_measured: return "ZeroMeasured";
    case errc::insufficient_nodes: return "InsufficientNodes";
    case errc::no_survivors: return "NoSurvivors";
    case errc::no_feasible_technique: return "NoFeasibleTechnique";
    case errc::unresolved_action: return "UnresolvedAction";
    case errc::missing_profile: return "MissingProfile";
    case errc::insufficient_profiles: return "InsufficientProfiles";
    case errc::missing_layer_family: return "MissingLayerFamily";
    case errc::all_filtered_out: return "AllFilteredOut";
    case errc::invalid_config: return "InvalidConfig";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace continuer
