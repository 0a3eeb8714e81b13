#include "bcs/run_config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "bcs/errors.hpp"

namespace bcs {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Command command) {
  switch (command) {
    case Command::tc: return "tc";
    case Command::sweep: return "sweep";
    case Command::verify: return "verify";
    case Command::kernel_eval: return "kernel_eval";
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  if (name == "tc") return Command::tc;
  if (name == "sweep") return Command::sweep;
  if (name == "verify") return Command::verify;
  if (name == "kernel_eval") return Command::kernel_eval;
  throw ConfigError("unknown command '" + name + "'");
}

InteractionModel default_interaction(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::gaussian: return make_gaussian(1.0, 1.0);
    case InteractionKind::gaussian_difference:
      // V^(0) = 1.5 and V^(2) = -0.5 at mu = 1.
      return make_gaussian_difference(2.9919563305407246, 1.0, 2.983912661081449, 0.5);
    case InteractionKind::square_well: return make_square_well(1.0, 1.0);
    case InteractionKind::delta: return make_delta(1.0);
  }
  return make_gaussian();
}

std::vector<double> default_sweep_lambdas() { return {0.6, 0.5, 0.42, 0.36, 0.31, 0.27, 0.24}; }

namespace {

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + key + "' must be finite");
  return x;
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> get_numbers(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(get_number(x, key));
  return out;
}

std::vector<std::string> get_strings(const json& v, const std::string& key) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) throw ConfigError("'" + key + "' must be a string or array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw ConfigError("'" + key + "' entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

InteractionModel parse_interaction(const json& v) {
  if (v.is_string()) {
    try {
      return default_interaction(interaction_kind_from_string(v.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (!v.is_object()) throw ConfigError("'interaction' must be a name or an object");
  static const std::set<std::string> keys = {"kind", "amplitudes", "widths"};
  for (const auto& [k, _] : v.items()) {
    if (!keys.count(k)) throw ConfigError("unknown key 'interaction." + k + "'");
  }
  if (!v.contains("kind") || !v["kind"].is_string()) {
    throw ConfigError("'interaction.kind' is required");
  }
  InteractionModel m;
  try {
    m = default_interaction(interaction_kind_from_string(v["kind"].get<std::string>()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (v.contains("amplitudes")) m.amplitudes = get_numbers(v["amplitudes"], "interaction.amplitudes");
  if (v.contains("widths")) m.widths = get_numbers(v["widths"], "interaction.widths");
  return m;
}

}  // namespace

RunConfig parse_config(const json& doc, RunConfig c) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> keys = {
      "version", "command", "description", "interaction", "mu",      "dim",      "lambda",
      "lambdas", "target",  "targets",     "tol",         "grid_nodes", "qmax", "threads",
      "suites",  "kernels", "p_range",     "q_values",    "temps",   "out"};
  for (const auto& [k, _] : doc.items()) {
    if (!keys.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  if (doc.contains("version")) {
    if (!doc["version"].is_string() || doc["version"].get<std::string>() != kVersion) {
      throw ConfigError(std::string("config version must be '") + kVersion + "'");
    }
  }
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) throw ConfigError("'command' must be a string");
    c.command = command_from_string(doc["command"].get<std::string>());
  }
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) throw ConfigError("'description' must be a string");
    c.description = doc["description"].get<std::string>();
  }
  if (doc.contains("interaction")) c.interaction = parse_interaction(doc["interaction"]);
  if (doc.contains("mu")) c.mu = get_number(doc["mu"], "mu");
  if (doc.contains("dim")) c.dim = get_int(doc["dim"], "dim");
  if (doc.contains("lambda")) c.lambda = get_number(doc["lambda"], "lambda");
  if (doc.contains("lambdas")) c.lambdas = get_numbers(doc["lambdas"], "lambdas");
  if (doc.contains("target") && doc.contains("targets")) {
    throw ConfigError("give either 'target' or 'targets'");
  }
  if (doc.contains("target")) c.targets = get_strings(doc["target"], "target");
  if (doc.contains("targets")) c.targets = get_strings(doc["targets"], "targets");
  if (doc.contains("tol")) c.tol = get_number(doc["tol"], "tol");
  if (doc.contains("grid_nodes")) c.grid_nodes = get_int(doc["grid_nodes"], "grid_nodes");
  if (doc.contains("qmax")) c.qmax = get_number(doc["qmax"], "qmax");
  if (doc.contains("threads")) c.threads = get_int(doc["threads"], "threads");
  if (doc.contains("suites")) c.suites = get_strings(doc["suites"], "suites");
  if (doc.contains("kernels")) c.kernels = get_strings(doc["kernels"], "kernels");
  if (doc.contains("p_range")) {
    const json& r = doc["p_range"];
    if (!r.is_array() || r.size() != 3) {
      throw ConfigError("'p_range' must be [lo, hi, points]");
    }
    c.p_lo = get_number(r[0], "p_range");
    c.p_hi = get_number(r[1], "p_range");
    c.p_points = get_int(r[2], "p_range");
  }
  if (doc.contains("q_values")) c.q_values = get_numbers(doc["q_values"], "q_values");
  if (doc.contains("temps")) c.temps = get_numbers(doc["temps"], "temps");
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ConfigError("'out' must be a string");
    c.out = doc["out"].get<std::string>();
  }
  return c;
}

void validate_config(const RunConfig& c) {
  try {
    validate(c.interaction, c.dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("interaction: ") + e.what());
  }
  if (c.dim < 1 || c.dim > 3) throw ConfigError("'dim' must be 1, 2 or 3");
  if (!(c.tol > 0.0) || c.tol >= 0.1) throw ConfigError("'tol' must lie in (0, 0.1)");
  if (c.grid_nodes < 4 || c.grid_nodes > 200) throw ConfigError("'grid_nodes' must lie in [4, 200]");
  if (c.threads < 1 || c.threads > 256) throw ConfigError("'threads' must lie in [1, 256]");
  if (c.qmax < 0.0) throw ConfigError("'qmax' must be >= 0");
  for (const auto& t : c.targets) {
    if (t != "tc0" && t != "tl" && t != "tu") {
      throw ConfigError("unknown target '" + t + "' (expected tc0, tl or tu)");
    }
  }
  switch (c.command) {
    case Command::tc:
      if (!c.lambda || !(*c.lambda > 0.0)) throw ConfigError("tc needs 'lambda' > 0");
      if (c.targets.size() != 1) throw ConfigError("tc needs exactly one target");
      if (!(c.mu > 0.0)) throw ConfigError("'mu' must be > 0");
      if (c.dim == 3) throw ConfigError("critical temperatures are solved for d in {1, 2}");
      if (c.dim == 2 && c.targets[0] != "tc0") throw ConfigError("d = 2 supports target tc0 only");
      break;
    case Command::sweep:
      if (c.lambdas && c.lambdas->empty()) throw ConfigError("empty lambda list");
      if (c.lambdas) {
        for (double l : *c.lambdas) {
          if (!(l > 0.0)) throw ConfigError("lambdas must be > 0");
        }
      }
      if (c.targets.empty()) throw ConfigError("sweep needs at least one target");
      if (!(c.mu > 0.0)) throw ConfigError("'mu' must be > 0");
      if (c.dim == 3) throw ConfigError("critical temperatures are solved for d in {1, 2}");
      for (const auto& t : c.targets) {
        if (c.dim == 2 && t != "tc0") throw ConfigError("d = 2 supports target tc0 only");
      }
      break;
    case Command::verify: {
      static const std::set<std::string> known = {"lemma31", "lemma32", "lemma41", "regions",
                                                  "strong_coupling", "chain", "e_gap"};
      if (c.suites.empty()) throw ConfigError("verify needs at least one suite");
      if (!(c.mu > 0.0)) throw ConfigError("'mu' must be > 0");
      for (const auto& s : c.suites) {
        if (!known.count(s)) throw ConfigError("unknown suite '" + s + "'");
        if (s == "regions" && c.dim != 2 && c.dim != 3) {
          throw ConfigError("regions are defined for d in {2, 3}");
        }
        if (s != "regions" && c.dim != 1) throw ConfigError("suite '" + s + "' needs d = 1");
      }
      if (c.lambda && !(*c.lambda > 0.0)) throw ConfigError("'lambda' must be > 0");
      break;
    }
    case Command::kernel_eval:
      if (c.kernels.empty()) throw ConfigError("kernel_eval needs at least one kernel");
      for (const auto& k : c.kernels) {
        if (k != "K" && k != "B" && k != "N" && k != "M") {
          throw ConfigError("unknown kernel '" + k + "' (expected K, B, N or M)");
        }
      }
      if (c.dim != 1) throw ConfigError("kernel_eval tabulates d = 1 kernels");
      if (c.p_points < 1 || c.p_points > 100000 || !(c.p_hi >= c.p_lo)) {
        throw ConfigError("'p_range' must satisfy lo <= hi and 1 <= points <= 100000");
      }
      if (c.q_values.empty() || c.temps.empty()) {
        throw ConfigError("kernel_eval needs q_values and temps");
      }
      for (double t : c.temps) {
        if (!(t > 0.0)) throw ConfigError("temps must be > 0");
      }
      break;
  }
}

ordered_json canonical_json(const RunConfig& c) {
  ordered_json j;
  j["version"] = kVersion;
  j["command"] = to_string(c.command);
  j["interaction"] = {{"kind", to_string(c.interaction.kind)},
                      {"amplitudes", c.interaction.amplitudes},
                      {"widths", c.interaction.widths}};
  j["mu"] = c.mu;
  j["dim"] = c.dim;
  switch (c.command) {
    case Command::tc:
      j["lambda"] = c.lambda.value_or(0.0);
      j["target"] = c.targets.empty() ? "" : c.targets[0];
      j["tol"] = c.tol;
      j["grid_nodes"] = c.grid_nodes;
      j["qmax"] = c.qmax;
      break;
    case Command::sweep:
      j["lambdas"] = c.lambdas.value_or(default_sweep_lambdas());
      j["targets"] = c.targets;
      j["tol"] = c.tol;
      j["grid_nodes"] = c.grid_nodes;
      j["qmax"] = c.qmax;
      break;
    case Command::verify:
      j["suites"] = c.suites;
      j["lambda"] = c.lambda.value_or(1.0);
      break;
    case Command::kernel_eval:
      j["kernels"] = c.kernels;
      j["p_range"] = {c.p_lo, c.p_hi, c.p_points};
      j["q_values"] = c.q_values;
      j["temps"] = c.temps;
      break;
  }
  return j;
}

std::string config_digest(const RunConfig& c) {
  const std::string text = canonical_json(c).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace bcs
