#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcs/interactions.hpp"
#include "json.hpp"

namespace bcs {

inline constexpr const char* kVersion = "bcs-tc-lab/1";

enum class Command { tc, sweep, verify, kernel_eval };

const char* to_string(Command command);
Command command_from_string(const std::string& name);

struct RunConfig {
  Command command = Command::tc;
  std::string description;
  InteractionModel interaction;
  double mu = 1.0;
  int dim = 1;
  std::optional<double> lambda;
  std::optional<std::vector<double>> lambdas;  // absent: the default sweep list
  std::vector<std::string> targets;            // tc0, tl, tu
  double tol = 1e-6;
  int grid_nodes = 24;
  double qmax = 0.0;  // <= 0: 4 sqrt(mu)
  int threads = 1;
  std::vector<std::string> suites;    // verify
  std::vector<std::string> kernels;   // kernel_eval: K, B, N, M
  double p_lo = 0.0, p_hi = 3.0;      // kernel_eval
  int p_points = 61;
  std::vector<double> q_values{0.0, 0.5, 1.0};
  std::vector<double> temps{0.1};
  std::string out;                    // empty: stdout
};

/// Default interaction parameters for a family name (used by --interaction).
InteractionModel default_interaction(InteractionKind kind);

/// The lambda list used when a sweep config has none.
std::vector<double> default_sweep_lambdas();

/// Parses a config document; unknown keys and wrong types throw ConfigError.
/// Keys absent from the document keep the values already in `base`.
RunConfig parse_config(const nlohmann::json& doc, RunConfig base);

/// Schema checks that need the whole config (command-specific requirements).
void validate_config(const RunConfig& config);

/// Canonical form of everything that affects results (the output path is excluded).
nlohmann::ordered_json canonical_json(const RunConfig& config);

/// SHA-256 of canonical_json(config).dump(), lowercase hex.
std::string config_digest(const RunConfig& config);

/// Shortest round-trip decimal form ("inf", "-inf", "nan" for non-finite values).
std::string format_number(double value);

}  // namespace bcs
