// Command line front end: bound evaluation, closed-form curve, protocol
// simulation, asymptotic limits, symmetry checking, and Renyi quantities.
// All outputs are CSV with a '#' manifest header; values are nats unless a
// _bits column says otherwise.
//
// Exit codes: 0 ok, 2 bound hypotheses infeasible, 3 numerical tolerance
// not reached, 4 configuration error.

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modsum/bound.hpp"
#include "modsum/channel.hpp"
#include "modsum/config.hpp"
#include "modsum/csv.hpp"
#include "modsum/info.hpp"
#include "modsum/sim.hpp"
#include "modsum/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitConfig = 4;

using modsum::csv::format_double;

struct OutputTarget {
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  bool fresh = true;  // false when appending to an existing non-empty file
  std::ofstream file;
};

OutputTarget open_output(const std::string& path, bool append) {
  OutputTarget target;
  if (path.empty()) return target;
  if (append && std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    target.file.open(path, std::ios::app);
    target.fresh = false;
  } else {
    target.file.open(path, std::ios::trunc);
  }
  if (!target.file) throw modsum::config::ConfigError("cannot open output file '" + path + "'");
  return target;
}

std::vector<std::pair<std::string, std::string>> manifest_config(
    const modsum::config::Document& doc) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [name, section] : doc) {
    for (const auto& [key, value] : section) entries.emplace_back(name + "." + key, value);
  }
  return entries;
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw modsum::config::ConfigError("bad grid '" + spec + "', expected lo:hi:count");
  }
  if (count < 1 || hi < lo || (count == 1 && hi != lo)) {
    throw modsum::config::ConfigError("bad grid '" + spec + "'");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  }
  return grid;
}

std::vector<int> parse_coalition(const std::string& spec, int senders) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int sender = std::stoi(item);
    if (sender < 1 || sender > senders) {
      throw modsum::config::ConfigError("coalition sender out of range: " + item);
    }
    out.push_back(sender - 1);
  }
  return out;
}

std::vector<modsum::info::Variable> parse_variables(const std::string& spec, int senders,
                                                    std::uint32_t q) {
  using modsum::info::Variable;
  std::vector<Variable> out;
  if (spec.empty()) return out;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token == "sum") {
      out.push_back(Variable::total_sum(senders));
    } else if (!token.empty() && token.front() == 'x') {
      const int i = std::stoi(token.substr(1));
      if (i < 1 || i > senders) throw modsum::config::ConfigError("bad variable " + token);
      out.push_back(Variable::input(i - 1, senders));
    } else if (!token.empty() && token.front() == 'd') {
      const auto dash = token.find('-');
      if (dash == std::string::npos) throw modsum::config::ConfigError("bad variable " + token);
      const int a = std::stoi(token.substr(1, dash - 1));
      const int b = std::stoi(token.substr(dash + 1));
      if (a < 1 || a > senders || b < 1 || b > senders) {
        throw modsum::config::ConfigError("bad variable " + token);
      }
      out.push_back(Variable::difference(a - 1, b - 1, senders, q));
    } else {
      throw modsum::config::ConfigError("bad variable token '" + token +
                                        "' (use xN, sum, or dN-M)");
    }
  }
  return out;
}

std::string coalition_label(const std::vector<int>& coalition) {
  std::string label;
  for (std::size_t i = 0; i < coalition.size(); ++i) {
    if (i) label += '+';
    label += std::to_string(coalition[i] + 1);
  }
  return label;
}

std::string channel_field(const modsum::config::Section& section, const char* key) {
  auto it = section.find(key);
  return it == section.end() ? "" : it->second;
}

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  bool seed_set = false;
  bool bits = false;
  double tol = 1e-8;
  int max_panels = 20000;
};

modsum::info::QuadratureOptions quad_options(const CommonArgs& args) {
  modsum::info::QuadratureOptions opts;
  opts.abs_tol = args.tol;
  opts.max_panels_1d = args.max_panels;
  opts.max_panels_2d = 3 * args.max_panels;
  return opts;
}

int run_bound(const CommonArgs& args, const std::string& coalition_spec) {
  const auto doc = modsum::config::parse_file(args.config_path);
  auto it = doc.find("channel");
  if (it == doc.end()) throw modsum::config::ConfigError("missing [channel] section");
  const auto mac = modsum::config::load_channel(it->second);
  const auto opts = quad_options(args);
  const auto report = modsum::bound::capacity_lower_bound(mac, opts);

  std::optional<std::vector<int>> only;
  if (!coalition_spec.empty()) only = parse_coalition(coalition_spec, mac.senders());

  auto target = open_output(args.out_path, false);
  modsum::csv::write_manifest(target.stream(),
                              {"bound", "bound-v1", args.seed, manifest_config(doc), true});
  modsum::csv::Writer writer(target.stream());
  writer.header({"E", "v", "p", "c", "coalition", "sender", "term1_nats", "term2_nats",
                 "term3_nats", "min_nats", "bound_nats", "bound_bits", "achievable_nats",
                 "feasible"});
  const std::string e_field = channel_field(it->second, "E");
  const std::string v_field = channel_field(it->second, "v");
  const std::string p_field = std::to_string(mac.alphabet_size());
  const std::string c_field = std::to_string(mac.senders());
  const std::string feasible = report.feasible ? "1" : "0";
  for (const auto& term : report.terms) {
    if (only && term.coalition != *only) continue;
    writer.row({e_field, v_field, p_field, c_field, coalition_label(term.coalition),
                std::to_string(term.sender + 1), format_double(term.term1),
                format_double(term.term2), format_double(term.term3),
                format_double(term.min_term), "", "", "", feasible});
  }
  writer.row({e_field, v_field, p_field, c_field, "*", "", "", "", "", "",
              report.feasible ? format_double(report.bound) : "not-guaranteed",
              report.feasible ? format_double(report.bound / std::numbers::ln2)
                              : "not-guaranteed",
              format_double(std::max(0.0, report.bound)), feasible});
  if (!report.feasible) return kExitInfeasible;
  if (!report.within_tolerance) return kExitTolerance;
  return kExitOk;
}

int run_curve(const CommonArgs& args, const std::string& grid_spec, double variance,
              bool with_general) {
  const auto grid = parse_grid(grid_spec);
  const auto opts = quad_options(args);
  const auto curve = modsum::bound::bound_curve_p2c3(grid, variance, opts);

  auto target = open_output(args.out_path, false);
  modsum::csv::write_manifest(target.stream(),
                              {"curve", "curve-v1", args.seed,
                               {{"grid", grid_spec}, {"v", format_double(variance, 6)}},
                               true});
  modsum::csv::Writer writer(target.stream());
  std::vector<std::string> cols{"E", "bound_nats", "converged"};
  if (with_general) cols.insert(cols.begin() + 2, "general_nats");
  writer.header(cols);
  bool all_ok = true;
  for (const auto& pt : curve) {
    std::vector<std::string> row{format_double(pt.amplitude), format_double(pt.value)};
    if (with_general) {
      row.push_back(
          format_double(modsum::bound::general_bound_real(2, 3, pt.amplitude, variance, opts)));
    }
    row.push_back(pt.within_tolerance ? "1" : "0");
    writer.row(row);
    all_ok = all_ok && pt.within_tolerance;
  }
  return all_ok ? kExitOk : kExitTolerance;
}

int run_simulate(const CommonArgs& args) {
  auto doc = modsum::config::parse_file(args.config_path);
  auto cfg = modsum::config::load_protocol(doc);
  if (args.seed_set) {
    cfg.seed = args.seed;
    doc["protocol"]["seed"] = std::to_string(args.seed);
  }
  const auto result = modsum::sim::run_experiment(cfg);

  auto target = open_output(args.out_path, true);
  if (target.fresh) {
    modsum::csv::write_manifest(target.stream(),
                                {"simulate", "sim-v1", cfg.seed, manifest_config(doc), true});
    std::vector<std::string> cols{"config_hash", "error_rate", "ci_low", "ci_high", "trials"};
    for (const auto& [coalition, est] : result.leakage) {
      cols.push_back("leakage_" + coalition_label(coalition) + "_nats");
      cols.push_back("leakage_" + coalition_label(coalition) + "_se");
    }
    modsum::csv::Writer(target.stream()).header(cols);
  }
  std::vector<std::string> row{modsum::config::config_hash(doc),
                               format_double(result.error_rate), format_double(result.ci_low),
                               format_double(result.ci_high), std::to_string(result.trials)};
  bool leakage_ok = true;
  for (const auto& [coalition, est] : result.leakage) {
    row.push_back(format_double(est.value));
    row.push_back(format_double(est.error_bar, 12));
    leakage_ok = leakage_ok && est.within_tolerance;
  }
  modsum::csv::Writer(target.stream()).row(row);
  return leakage_ok ? kExitOk : kExitTolerance;
}

int run_asymptote(const CommonArgs& args, int p) {
  const double limit = modsum::bound::high_power_limit(p);
  auto target = open_output(args.out_path, false);
  modsum::csv::write_manifest(target.stream(), {"asymptote", "scalar-v1", args.seed,
                                                {{"p", std::to_string(p)}},
                                                true});
  modsum::csv::Writer writer(target.stream());
  if (args.bits) {
    writer.header({"p", "limit_nats", "limit_bits"});
    writer.row({std::to_string(p), format_double(limit),
                format_double(limit / std::numbers::ln2)});
  } else {
    writer.header({"p", "limit_nats"});
    writer.row({std::to_string(p), format_double(limit)});
  }
  return kExitOk;
}

int run_check_symmetric(const CommonArgs& args) {
  const auto doc = modsum::config::parse_file(args.config_path);
  auto it = doc.find("channel");
  if (it == doc.end()) throw modsum::config::ConfigError("missing [channel] section");
  const auto mac = modsum::config::load_channel(it->second);

  // Canonical candidate action per family: exact translation for the
  // additive model, mean-shift translation for the Gaussian ones.
  modsum::channel::SymmetryAction action = [&] {
    using modsum::channel::SymmetryAction;
    if (mac.output_space() == modsum::channel::OutputSpace::Discrete) {
      return SymmetryAction::additive_translation(mac.field_order(), mac.field_dim());
    }
    std::vector<std::complex<double>> shifts;
    if (const auto* real = mac.as_real()) {
      for (int x = 0; x < real->p; ++x) shifts.emplace_back(real->amplitude * x, 0.0);
    } else {
      const auto pts = mac.constellation();
      shifts.assign(pts.begin(), pts.end());
    }
    return SymmetryAction::translation(std::move(shifts));
  }();

  const auto report = modsum::channel::is_symmetric(mac, action);
  auto target = open_output(args.out_path, false);
  modsum::csv::write_manifest(target.stream(), {"check-symmetric", "scalar-v1", args.seed,
                                                manifest_config(doc), true});
  modsum::csv::Writer writer(target.stream());
  writer.header({"kind", "symmetric", "worst_violation"});
  writer.row({channel_field(it->second, "kind"), report.symmetric ? "1" : "0",
              format_double(report.worst_violation, 12)});
  return kExitOk;
}

int run_renyi(const CommonArgs& args, double s, const std::string& target_spec,
              const std::string& cond_spec) {
  const auto doc = modsum::config::parse_file(args.config_path);
  auto it = doc.find("channel");
  if (it == doc.end()) throw modsum::config::ConfigError("missing [channel] section");
  const auto mac = modsum::config::load_channel(it->second);
  const auto targets = parse_variables(target_spec, mac.senders(), mac.field_order());
  const auto conds = parse_variables(cond_spec, mac.senders(), mac.field_order());
  if (targets.empty()) throw modsum::config::ConfigError("renyi: --target is required");
  const auto opts = quad_options(args);

  const auto upper = modsum::info::renyi_cmi(s, mac, targets, conds, opts);
  const auto lower = modsum::info::renyi_cmi_down(s, mac, targets, conds, opts);
  const auto plain = modsum::info::conditional_mi(mac, targets, conds, opts);

  auto target = open_output(args.out_path, false);
  auto config_entries = manifest_config(doc);
  config_entries.emplace_back("query.s", format_double(s, 6));
  config_entries.emplace_back("query.target", target_spec);
  config_entries.emplace_back("query.cond", cond_spec);
  modsum::csv::write_manifest(target.stream(),
                              {"renyi", "scalar-v1", args.seed, config_entries, true});
  modsum::csv::Writer writer(target.stream());
  writer.header({"quantity", "s", "value_nats", "error_bar", "converged"});
  const auto emit = [&](const char* name, const modsum::info::InfoEstimate& est) {
    writer.row({name, format_double(s, 6), format_double(est.value),
                format_double(est.error_bar, 12), est.within_tolerance ? "1" : "0"});
  };
  emit("renyi_cmi", upper);
  emit("renyi_cmi_down", lower);
  emit("conditional_mi", plain);
  return (upper.within_tolerance && lower.within_tolerance && plain.within_tolerance)
             ? kExitOk
             : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure modulo-sum rate bounds and protocol simulation"};
  app.set_version_flag("--version", std::string("modsum ") + modsum::kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  std::string grid_spec = "0:8:81";
  std::string coalition_spec;
  std::string target_spec;
  std::string cond_spec;
  double variance = 1.0;
  double s_value = 0.25;
  int p_value = 2;
  bool with_general = false;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* config_opt = cmd->add_option("--config", args.config_path, "config file path");
    if (needs_config) config_opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
    cmd->add_option("--seed", args.seed, "seed override")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_flag("--bits", args.bits, "also report values in bits");
    cmd->add_option("--tol", args.tol, "quadrature absolute tolerance");
    cmd->add_option("--max-panels", args.max_panels, "quadrature panel budget");
  };

  auto* bound_cmd = app.add_subcommand("bound", "coalition-term breakdown and overall bound");
  add_common(bound_cmd, true);
  bound_cmd->add_option("--coalition", coalition_spec,
                        "restrict rows to one coalition, e.g. 1,2");

  auto* curve_cmd =
      app.add_subcommand("curve", "closed-form bound for the binary three-sender Gaussian MAC");
  add_common(curve_cmd, false);
  curve_cmd->add_option("--grid", grid_spec, "amplitude grid lo:hi:count");
  curve_cmd->add_option("--v", variance, "noise variance");
  curve_cmd->add_flag("--with-general", with_general, "add the general-formula column");

  auto* sim_cmd = app.add_subcommand("simulate", "run the coded protocol end to end");
  add_common(sim_cmd, true);

  auto* asym_cmd = app.add_subcommand("asymptote", "large-amplitude limit of the bound");
  add_common(asym_cmd, false);
  asym_cmd->add_option("--p", p_value, "input alphabet size")->check(CLI::Range(2, 1000));

  auto* sym_cmd = app.add_subcommand("check-symmetric", "test the translation action");
  add_common(sym_cmd, true);

  auto* renyi_cmd = app.add_subcommand("renyi", "Renyi conditional mutual informations");
  add_common(renyi_cmd, true);
  renyi_cmd->add_option("--s", s_value, "order parameter in (0, 1/2]");
  renyi_cmd->add_option("--target", target_spec, "target variables, e.g. x1 or x1,d2-3");
  renyi_cmd->add_option("--cond", cond_spec, "conditioning variables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bound_cmd->parsed()) return run_bound(args, coalition_spec);
    if (curve_cmd->parsed()) return run_curve(args, grid_spec, variance, with_general);
    if (sim_cmd->parsed()) return run_simulate(args);
    if (asym_cmd->parsed()) return run_asymptote(args, p_value);
    if (sym_cmd->parsed()) return run_check_symmetric(args);
    if (renyi_cmd->parsed()) return run_renyi(args, s_value, target_spec, cond_spec);
  } catch (const modsum::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
