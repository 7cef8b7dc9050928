#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symspace/operator_core.hpp"

namespace symspace::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";
// Excluded from determinism comparisons.
inline constexpr const char* kTimestampKey = "generated_at";

struct CommandResult {
  nlohmann::json report;
  int exit_code = 0;
  std::vector<std::string> written_files;
};

struct AnalyzeOptions {
  std::string input;
  int horizon = 64;
  BaseNormKind base_norm = BaseNormKind::euclidean;
};

struct SplitArcOptions {
  std::string input;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double delta = 0.1;
  double tol = 1e-10;
  int nodes = 16;        // initial nodes per loop for adaptive doubling
  int max_nodes = 4096;
  std::string output_dir = ".";
};

struct TwoPointOptions {
  std::string input;
  std::optional<Complex> eta;
  std::optional<int> k;
  double tol = 1e-8;
  std::string output_dir = ".";
};

struct GrowthOptions {
  std::string input;
  int horizon = 64;
  BaseNormKind base_norm = BaseNormKind::euclidean;
  std::string output_dir;  // growth.csv is written only when set
};

struct GenOptions {
  std::string generator;  // rotation | direct-sum | jordan-companion | volterra
  double theta = 0.0;
  int m = 1;
  int n = 2;
  std::vector<std::string> inputs;  // direct-sum blocks
  std::string output;
};

CommandResult cmd_analyze(const AnalyzeOptions& opt);
CommandResult cmd_split_arc(const SplitArcOptions& opt);
CommandResult cmd_two_point(const TwoPointOptions& opt);
CommandResult cmd_growth(const GrowthOptions& opt);
CommandResult cmd_gen(const GenOptions& opt);

/// Report serialized with the timestamp removed.
std::string canonical_dump(const nlohmann::json& report);

/// FNV-1a 64-bit digest of the file contents, as "fnv1a64:<hex>".
std::string file_checksum(const std::string& path);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symspace::cli
