// Command-line front end for the finite-temperature Dicke model library.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dicke/errors.hpp"
#include "dicke/number_format.hpp"
#include "dicke/sweep.hpp"

namespace {

struct ScalarOptions {
  dicke::ModelParams params;
  std::string beta = "inf";
  std::string format = "csv";
};

enum ExitCode { kOk = 0, kConfigError = 1, kRowError = 2, kIOError = 3 };

void add_model_flags(CLI::App* cmd, ScalarOptions& opts) {
  cmd->add_option("--omega0", opts.params.omega0, "Boson frequency")->capture_default_str();
  cmd->add_option("--Omega", opts.params.Omega, "Atomic level splitting")->capture_default_str();
  cmd->add_option("--g1", opts.params.g1, "Rotating coupling")->capture_default_str();
  cmd->add_option("--g2", opts.params.g2, "Counter-rotating coupling")->capture_default_str();
  cmd->add_option("--beta", opts.beta, "Inverse temperature, or inf")->capture_default_str();
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

int run_scalar(dicke::Task task, const ScalarOptions& opts, const dicke::SweepSpec& base) {
  double beta = 0.0;
  try {
    beta = dicke::parse_inverse_temperature(opts.beta).value();
  } catch (const dicke::Error& e) {
    std::cerr << "error: --beta: " << e.what() << '\n';
    return kConfigError;
  }
  dicke::Table table;
  table.task = task;
  table.columns = dicke::task_columns(task, base);
  table.rows.push_back(dicke::evaluate_row(task, opts.params, beta, base));
  std::cout << (opts.format == "json" ? dicke::to_json(table) : dicke::to_csv(table));
  if (table.has_errors()) {
    std::cerr << "error: " << dicke::format_cell(table.rows.front().back()) << '\n';
    return kRowError;
  }
  return kOk;
}

int run_sweep_file(const std::string& config_path, int workers, const std::string& output,
                   const std::string& format) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return kConfigError;
  }
  std::ostringstream text;
  text << in.rdbuf();

  dicke::SweepSpec spec;
  try {
    spec = dicke::parse_config(text.str());
  } catch (const dicke::ConfigError& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << '\n';
    return kConfigError;
  }
  if (!output.empty()) spec.output.path = output;
  if (format == "csv") spec.output.format = dicke::OutputFormat::csv;
  if (format == "json") spec.output.format = dicke::OutputFormat::json;

  const auto tables = dicke::run_sweep(spec, workers);
  try {
    for (const auto& path : dicke::emit_output(tables, spec)) std::cout << path.string() << '\n';
  } catch (const dicke::IOError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIOError;
  }
  const int code = dicke::sweep_exit_code(tables);
  if (code != kOk) std::cerr << "warning: some rows failed; see the error column\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-temperature Dicke model: mean field, spectra, partition function, ED"};
  app.require_subcommand(1);

  ScalarOptions opts;
  dicke::SweepSpec base;
  int workers = 0;
  std::string config_path;
  std::string output;
  std::string sweep_format;
  int n_max = -1;

  struct Entry {
    const char* name;
    dicke::Task task;
    const char* help;
  };
  const Entry entries[] = {
      {"critical", dicke::Task::critical, "Critical inverse temperature and symmetry class"},
      {"gap", dicke::Task::gap, "Mean-field gap equation solution"},
      {"spectrum", dicke::Task::spectrum, "Collective excitation spectrum"},
      {"free-energy", dicke::Task::free_energy, "Mean-field free energy per atom"},
      {"partition", dicke::Task::partition, "Asymptotic ln(Z/Z0) for N atoms"},
      {"ed-compare", dicke::Task::ed_compare, "Exact diagonalization against mean field"},
  };
  std::vector<std::pair<CLI::App*, dicke::Task>> scalar;
  for (const auto& e : entries) {
    CLI::App* cmd = app.add_subcommand(e.name, e.help);
    add_model_flags(cmd, opts);
    if (e.task == dicke::Task::partition) {
      cmd->add_option("--n-atoms", base.partition.n_atoms, "Number of atoms")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
      cmd->add_option("--cutoff", base.partition.cutoff, "Matsubara frequency cutoff")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
    }
    if (e.task == dicke::Task::ed_compare) {
      cmd->add_option("--n-atoms", base.ed.n_atoms, "Number of atoms")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
      cmd->add_option("--n-max", n_max, "Fock cutoff (default: chosen from the condensate)")
          ->check(CLI::NonNegativeNumber);
      cmd->add_option("--k-gaps", base.ed.k_gaps, "Number of excitation gaps")
          ->check(CLI::NonNegativeNumber)
          ->capture_default_str();
      cmd->add_flag("!--no-truncation-check", base.ed.check_truncation,
                    "Skip the n_max + 8 truncation rerun");
    }
    scalar.emplace_back(cmd, e.task);
  }

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
  sweep->add_option("config", config_path, "Sweep configuration")->required();
  sweep->add_option("--workers", workers, "Worker threads (default: from config)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--output", output, "Output path prefix (overrides config)");
  sweep->add_option("--format", sweep_format, "Output format (overrides config)")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (n_max >= 0) base.ed.n_max = n_max;
  for (const auto& [cmd, task] : scalar) {
    if (cmd->parsed()) return run_scalar(task, opts, base);
  }
  return run_sweep_file(config_path, workers, output, sweep_format);
}
