#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

enum class Task { critical, gap, spectrum, free_energy, partition, ed_compare };

std::string_view to_string(Task task) noexcept;
std::optional<Task> task_from_string(std::string_view name) noexcept;

enum class Spacing { linear, log };
enum class OutputFormat { csv, json };

/// One swept parameter. name is one of omega0, Omega, g1, g2, beta.
struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int count = 2;
  Spacing spacing = Spacing::linear;

  [[nodiscard]] std::vector<double> values() const;
};

struct OutputSpec {
  OutputFormat format = OutputFormat::csv;
  /// Prefix; files are written as <path>.<task>.<ext>.
  std::string path = "dicke_sweep";
};

struct PartitionOptions {
  std::int64_t n_atoms = 1000;
  std::int64_t cutoff = 4096;
};

struct EDOptions {
  int n_atoms = 8;
  std::optional<int> n_max;  // default_fock_cutoff when empty
  int k_gaps = 2;
  bool check_truncation = true;
};

struct SweepSpec {
  std::vector<Axis> axes;
  ModelParams fixed;
  /// +inf encodes zero temperature.
  double fixed_beta = std::numeric_limits<double>::infinity();
  std::vector<Task> tasks{Task::gap};
  OutputSpec output;
  PartitionOptions partition;
  EDOptions ed;
  int workers = 1;
  int max_ed_jobs = 2;
};

/// Parses and validates a JSON sweep document. Unknown keys are rejected.
/// ConfigError messages carry the line/column of syntax errors or the JSON
/// pointer of the offending field.
SweepSpec parse_config(std::string_view text);

using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;
using Row = std::vector<Cell>;

struct Table {
  Task task = Task::gap;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  /// True when any row has a non-empty "error" cell.
  [[nodiscard]] bool has_errors() const;
};

/// Input columns shared by every task: omega0, Omega, g1, g2, beta.
const std::vector<std::string>& input_columns();

/// Full column list of a task table, ending in "error".
std::vector<std::string> task_columns(Task task, const SweepSpec& spec);

/// Evaluates one task at one point. Library errors are captured into the
/// trailing error cell instead of propagating.
Row evaluate_row(Task task, const ModelParams& p, double beta, const SweepSpec& spec);

/// Grid points in row-major order over the axes, as (params, beta).
std::vector<std::pair<ModelParams, double>> grid_points(const SweepSpec& spec);

/// Evaluates every task on every grid point with `workers` threads
/// (0 means spec.workers). Output does not depend on the worker count.
std::vector<Table> run_sweep(const SweepSpec& spec, int workers = 0);

std::string format_cell(const Cell& cell);
std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Writes one file per task (or a header-only file when there are no
/// tasks). Throws IOError when a file cannot be written.
std::vector<std::filesystem::path> emit_output(const std::vector<Table>& tables,
                                               const SweepSpec& spec);

/// 0 when every row succeeded, 2 otherwise.
int sweep_exit_code(const std::vector<Table>& tables);

}  // namespace dicke
