#include "bcs/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "bcs/bs_spectra.hpp"
#include "bcs/critical_temps.hpp"
#include "bcs/errors.hpp"
#include "bcs/kernels.hpp"

namespace bcs {

using nlohmann::ordered_json;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

void emit(const RunConfig& c, const std::string& path, const std::string& content,
          std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
  (void)c;
}

std::string csv_preamble(const std::string& digest, const std::string& extra) {
  std::string s = std::string("# ") + kVersion + " config_sha256=" + digest;
  if (!extra.empty()) s += " " + extra;
  return s + "\n";
}

SolveSpec solve_spec(const RunConfig& c, const std::string& target) {
  SolveSpec s;
  s.lambda = c.lambda.value_or(1.0);
  s.target = target_from_string(target);
  s.mu = c.mu;
  s.dim = c.dim;
  s.interaction = c.interaction;
  s.rel_tol = c.tol;
  s.sup.grid.nodes_per_panel = c.grid_nodes;
  s.sup.q_max = c.qmax;
  s.sup.threads = c.threads;
  return s;
}

ordered_json interaction_json(const InteractionModel& m) {
  return {{"kind", to_string(m.kind)}, {"amplitudes", m.amplitudes}, {"widths", m.widths}};
}

// a/b.csv + "tu" -> a/b_tu.csv
std::string with_suffix(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  std::filesystem::path name = p.stem();
  name += "_" + suffix;
  name += p.extension();
  return (p.parent_path() / name).string();
}

std::string with_extension(const std::string& path, const std::string& ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  for (const auto& s : out) {
    if (s.empty()) throw ConfigError("empty entry in list '" + text + "'");
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError("bad number '" + s + "' in " + flag);
    }
    out.push_back(v);
  }
  return out;
}

ordered_json error_json(const std::string& kind, const std::string& message) {
  ordered_json j;
  j["version"] = kVersion;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j;
}

}  // namespace

ordered_json report_json(const BoundReport& r, const std::string& digest) {
  ordered_json j;
  j["version"] = kVersion;
  j["config_sha256"] = digest;
  j["suite"] = r.lemma;
  j["grid"] = r.grid;
  j["pass"] = r.pass;
  j["worst_margin"] = r.worst_margin;
  j["c_emp"] = r.c_emp;
  j["c_emp_refined"] = r.c_emp_refined;
  j["checks"] = ordered_json::array();
  for (const auto& [name, ok] : r.checks) j["checks"].push_back({{"name", name}, {"pass", ok}});
  j["metrics"] = ordered_json::object();
  for (const auto& [name, v] : r.metrics) j["metrics"][name] = v;
  j["notes"] = r.notes;
  return j;
}

int cmd_tc(const RunConfig& c, std::ostream& out) {
  const std::string digest = config_digest(c);
  const SolveSpec spec = solve_spec(c, c.targets.at(0));
  const TcResult r = solve_tc(spec);
  ordered_json j;
  j["version"] = kVersion;
  j["config_sha256"] = digest;
  j["command"] = "tc";
  j["target"] = to_string(r.target);
  j["lambda"] = spec.lambda;
  j["mu"] = spec.mu;
  j["dim"] = spec.dim;
  j["interaction"] = interaction_json(spec.interaction);
  j["T"] = r.temp;
  j["ln_mu_over_T"] = std::log(spec.mu / r.temp);
  j["q_star"] = r.q_star;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["boundary_warning"] = r.boundary_warning;
  j["monotone"] = r.monotone;
  j["grid"] = {{"nodes_per_panel", spec.sup.grid.nodes_per_panel},
               {"panels_per_side", spec.sup.grid.panels_per_side},
               {"grid_size", r.grid_size},
               {"q_max", spec.sup.q_max > 0.0 ? spec.sup.q_max : 4.0 * std::sqrt(spec.mu)}};
  out << to_string(r.target) << " T=" << format_number(r.temp)
      << " q_star=" << format_number(r.q_star) << " residual=" << format_number(r.residual)
      << "\n";
  if (c.out.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_file(c.out, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::string digest = config_digest(c);
  const std::vector<double> lambdas = c.lambdas.value_or(default_sweep_lambdas());
  ordered_json summary;
  summary["version"] = kVersion;
  summary["config_sha256"] = digest;
  summary["command"] = "sweep";
  summary["fits"] = ordered_json::array();
  std::vector<std::pair<std::string, std::string>> csvs;
  for (const auto& target : c.targets) {
    const SolveSpec base = solve_spec(c, target);
    const SweepResult s = weak_coupling_sweep(lambdas, base, c.threads);
    std::ostringstream csv;
    csv << csv_preamble(digest, "target=" + target);
    csv << "lambda,temp,ln_mu_over_T,q_star\r\n";
    for (const auto& rec : s.records) {
      if (!rec.solved) continue;
      csv << format_number(rec.lambda) << ',' << format_number(rec.temp) << ','
          << format_number(rec.ln_ratio) << ',' << format_number(rec.q_star) << "\r\n";
    }
    csvs.emplace_back(target, csv.str());
    ordered_json f;
    f["target"] = target;
    f["slope"] = s.fit.slope;
    f["stderr"] = s.fit.stderr_slope;
    f["intercept"] = s.fit.intercept;
    f["r2"] = s.fit.r2;
    f["fit_points"] = s.fit.points;
    f["predicted_slope"] = s.predicted_slope;
    f["heuristic"] = s.heuristic;
    ordered_json unsolved = ordered_json::array();
    for (const auto& rec : s.records) {
      if (!rec.solved) unsolved.push_back({{"lambda", rec.lambda}, {"error", rec.error}});
    }
    f["unsolved"] = unsolved;
    summary["fits"].push_back(f);
  }
  if (c.dim == 1) {
    const SphereSpectrum sp = sphere_operator_spectrum(c.interaction, c.mu, c.dim);
    summary["sphere_spectrum"] = {{"e_s", sp.e_s}, {"e_a", sp.e_a}, {"e0_s", sp.e0_s}};
  }
  if (c.out.empty()) {
    for (const auto& [target, text] : csvs) out << text;
    err << summary.dump() << "\n";
  } else {
    for (const auto& [target, text] : csvs) {
      write_file(c.targets.size() == 1 ? c.out : with_suffix(c.out, target), text);
    }
    write_file(with_extension(c.out, ".fit.json"), summary.dump(2) + "\n");
    out << summary.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const std::string digest = config_digest(c);
  std::vector<BoundReport> reports;
  for (const auto& suite : c.suites) {
    if (suite == "lemma31") {
      reports.push_back(verify_lemma31_approx(c.interaction, c.mu));
    } else if (suite == "lemma32") {
      reports.push_back(verify_lemma32_bounds(c.mu));
    } else if (suite == "lemma41") {
      reports.push_back(verify_lemma41(c.mu));
    } else if (suite == "regions") {
      reports.push_back(verify_region_bounds(c.mu, c.dim));
    } else if (suite == "strong_coupling") {
      reports.push_back(verify_strong_coupling());
    } else if (suite == "chain") {
      reports.push_back(verify_chain(c.interaction, c.mu, c.lambda.value_or(1.0)));
    } else if (suite == "e_gap") {
      reports.push_back(verify_e_gap(c.interaction, c.mu));
    }
  }
  bool all = true;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    all = all && r.pass;
    arr.push_back(report_json(r, digest));
  }
  if (c.out.empty()) {
    out << arr.dump(2) << "\n";
  } else {
    std::filesystem::create_directories(c.out);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      write_file((std::filesystem::path(c.out) / (c.suites[i] + ".json")).string(),
                 arr[i].dump(2) + "\n");
    }
    for (const auto& r : reports) out << r.lemma << (r.pass ? " PASS" : " FAIL") << "\n";
  }
  return all ? kExitOk : kExitNumeric;
}

int cmd_kernel_eval(const RunConfig& c, std::ostream& out) {
  const std::string digest = config_digest(c);
  std::ostringstream csv;
  csv << csv_preamble(digest, "");
  csv << "p,q,temp";
  for (const auto& k : c.kernels) csv << ',' << k;
  csv << "\r\n";
  for (double t : c.temps) {
    const PhysParams params{c.mu, t, 1};
    for (double q : c.q_values) {
      for (int i = 0; i < c.p_points; ++i) {
        const double p = c.p_points == 1
                             ? c.p_lo
                             : c.p_lo + (c.p_hi - c.p_lo) * i / (c.p_points - 1);
        csv << format_number(p) << ',' << format_number(q) << ',' << format_number(t);
        for (const auto& k : c.kernels) {
          double v = 0.0;
          if (k == "K") v = k_t(p, params);
          if (k == "B") v = b_t(p, q, params);
          if (k == "N") v = n_t(p, q, params);
          if (k == "M") v = m_bound(p, q, c.mu);
          csv << ',' << format_number(v);
        }
        csv << "\r\n";
      }
    }
  }
  emit(c, c.out, csv.str(), out);
  return kExitOk;
}

int run_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate_config(c);
  } catch (const std::invalid_argument& e) {
    err << error_json("config", e.what()).dump() << "\n";
    return kExitConfig;
  }
  try {
    switch (c.command) {
      case Command::tc: return cmd_tc(c, out);
      case Command::sweep: return cmd_sweep(c, out, err);
      case Command::verify: return cmd_verify(c, out);
      case Command::kernel_eval: return cmd_kernel_eval(c, out);
    }
  } catch (const std::invalid_argument& e) {
    err << error_json("config", e.what()).dump() << "\n";
    return kExitConfig;
  } catch (const NoRootError& e) {
    out << error_json("no_root", e.what()).dump() << "\n";
    return kExitNumeric;
  } catch (const AccuracyError& e) {
    out << error_json("accuracy", e.what()).dump() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    out << error_json("runtime", e.what()).dump() << "\n";
    return kExitNumeric;
  }
  return kExitNumeric;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Critical temperatures and bound checks for BCS pair operators", "bcs-tc-lab"};
  app.require_subcommand(1);

  struct Flags {
    std::string config, interaction, lambdas, target, out, suite, kernel, p_range, q, temps;
    double mu = 0, lambda = 0, tol = 0, qmax = 0;
    int dim = 0, grid_nodes = 0, threads = 0;
  } f;
  std::vector<std::pair<CLI::App*, Command>> subs = {
      {app.add_subcommand("tc", "solve one critical temperature"), Command::tc},
      {app.add_subcommand("sweep", "weak-coupling sweep with slope fit"), Command::sweep},
      {app.add_subcommand("verify", "run bound-verifier suites"), Command::verify},
      {app.add_subcommand("kernel_eval", "tabulate kernels to CSV"), Command::kernel_eval}};
  for (auto& [sub, cmd] : subs) {
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--interaction", f.interaction,
                    "gaussian, gaussian_difference, square_well or delta");
    sub->add_option("--mu", f.mu, "chemical potential");
    sub->add_option("--dim", f.dim, "dimension");
    sub->add_option("--out", f.out, "output path");
    if (cmd == Command::tc || cmd == Command::sweep || cmd == Command::verify) {
      sub->add_option("--lambda", f.lambda, "coupling");
    }
    if (cmd == Command::tc || cmd == Command::sweep) {
      sub->add_option("--target", f.target, "tc0, tl or tu (comma list for sweep)");
      sub->add_option("--tol", f.tol, "relative temperature tolerance");
      sub->add_option("--grid-nodes", f.grid_nodes, "Gauss-Legendre nodes per panel");
      sub->add_option("--qmax", f.qmax, "upper end of the q search");
      sub->add_option("--threads", f.threads, "worker threads");
    }
    if (cmd == Command::sweep) sub->add_option("--lambdas", f.lambdas, "comma-separated couplings");
    if (cmd == Command::verify) sub->add_option("--suite", f.suite, "comma-separated suites");
    if (cmd == Command::kernel_eval) {
      sub->add_option("--kernel", f.kernel, "comma list of K, B, N, M");
      sub->add_option("--p-range", f.p_range, "lo,hi,points");
      sub->add_option("--q", f.q, "comma-separated q values");
      sub->add_option("--temps", f.temps, "comma-separated temperatures");
    }
  }
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_json("config", e.what()).dump() << "\n";
    return kExitConfig;
  }

  try {
    CLI::App* sub = nullptr;
    Command cmd = Command::tc;
    for (auto& [s, c] : subs) {
      if (s->parsed()) {
        sub = s;
        cmd = c;
      }
    }
    RunConfig c;
    c.command = cmd;
    if (cmd == Command::sweep) c.targets = {"tl", "tu"};
    if (cmd == Command::kernel_eval) c.kernels = {"K", "B", "N", "M"};
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) throw ConfigError("cannot read config '" + f.config + "'");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      if (doc.contains("command") && doc["command"] != to_string(cmd)) {
        throw ConfigError("config is for command '" + doc["command"].dump() + "'");
      }
      c = parse_config(doc, c);
    }
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--interaction")) {
      try {
        c.interaction = default_interaction(interaction_kind_from_string(f.interaction));
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    }
    if (given("--mu")) c.mu = f.mu;
    if (given("--dim")) c.dim = f.dim;
    if (given("--out")) c.out = f.out;
    if (cmd != Command::kernel_eval && given("--lambda")) c.lambda = f.lambda;
    if (cmd == Command::tc || cmd == Command::sweep) {
      if (given("--target")) c.targets = split_list(f.target);
      if (given("--tol")) c.tol = f.tol;
      if (given("--grid-nodes")) c.grid_nodes = f.grid_nodes;
      if (given("--qmax")) c.qmax = f.qmax;
      if (given("--threads")) c.threads = f.threads;
    }
    if (cmd == Command::sweep && given("--lambdas")) {
      c.lambdas = f.lambdas.empty() ? std::vector<double>{} : parse_numbers(f.lambdas, "--lambdas");
    }
    if (cmd == Command::verify && given("--suite")) c.suites = split_list(f.suite);
    if (cmd == Command::kernel_eval) {
      if (given("--kernel")) c.kernels = split_list(f.kernel);
      if (given("--p-range")) {
        const std::vector<double> r = parse_numbers(f.p_range, "--p-range");
        if (r.size() != 3 || r[2] != std::floor(r[2])) {
          throw ConfigError("--p-range needs lo,hi,points");
        }
        c.p_lo = r[0];
        c.p_hi = r[1];
        c.p_points = static_cast<int>(r[2]);
      }
      if (given("--q")) c.q_values = parse_numbers(f.q, "--q");
      if (given("--temps")) c.temps = parse_numbers(f.temps, "--temps");
    }
    return run_command(c, out, err);
  } catch (const std::invalid_argument& e) {
    err << error_json("config", e.what()).dump() << "\n";
    return kExitConfig;
  }
}

}  // namespace bcs
