#include "dicke/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <semaphore>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "dicke/errors.hpp"
#include "dicke/exact_diag.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/number_format.hpp"
#include "dicke/spectrum.hpp"

namespace dicke {
namespace {

using nlohmann::json;

constexpr std::string_view kAxisNames[] = {"omega0", "Omega", "g1", "g2", "beta"};
constexpr Task kAllTasks[] = {Task::critical,    Task::gap,       Task::spectrum,
                              Task::free_energy, Task::partition, Task::ed_compare};

[[noreturn]] void field_error(const std::string& pointer, const std::string& what) {
  throw ConfigError("field '" + pointer + "': " + what);
}

void reject_unknown(const json& obj, const std::string& pointer,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) field_error(pointer.empty() ? "/" : pointer, "must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      field_error(pointer + "/" + key, "unknown key");
    }
  }
}

double number_at(const json& obj, const std::string& key, const std::string& pointer) {
  const json& v = obj.at(key);
  if (!v.is_number()) field_error(pointer + "/" + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(pointer + "/" + key, "must be finite");
  return x;
}

std::int64_t integer_at(const json& obj, const std::string& key, const std::string& pointer,
                        std::int64_t minimum) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) field_error(pointer + "/" + key, "must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < minimum) field_error(pointer + "/" + key, "must be >= " + std::to_string(minimum));
  return x;
}

std::string string_at(const json& obj, const std::string& key, const std::string& pointer) {
  const json& v = obj.at(key);
  if (!v.is_string()) field_error(pointer + "/" + key, "must be a string");
  return v.get<std::string>();
}

double beta_value(const json& v, const std::string& pointer) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    field_error(pointer, "must be a positive number or \"inf\"");
  }
  if (!v.is_number()) field_error(pointer, "must be a positive number or \"inf\"");
  const double b = v.get<double>();
  if (!(b > 0.0) || std::isnan(b)) field_error(pointer, "must be positive");
  return b;
}

std::string location(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Axis parse_axis(const json& obj, const std::string& pointer) {
  reject_unknown(obj, pointer, {"name", "start", "stop", "count", "spacing"});
  for (const char* key : {"name", "start", "stop", "count"}) {
    if (!obj.contains(key)) field_error(pointer + "/" + key, "is required");
  }
  Axis axis;
  axis.name = string_at(obj, "name", pointer);
  if (std::find(std::begin(kAxisNames), std::end(kAxisNames), axis.name) == std::end(kAxisNames)) {
    field_error(pointer + "/name", "must be one of omega0, Omega, g1, g2, beta");
  }
  axis.start = number_at(obj, "start", pointer);
  axis.stop = number_at(obj, "stop", pointer);
  axis.count = static_cast<int>(integer_at(obj, "count", pointer, 2));
  if (obj.contains("spacing")) {
    const auto s = string_at(obj, "spacing", pointer);
    if (s == "linear") {
      axis.spacing = Spacing::linear;
    } else if (s == "log") {
      axis.spacing = Spacing::log;
    } else {
      field_error(pointer + "/spacing", "must be \"linear\" or \"log\"");
    }
  }
  if (axis.spacing == Spacing::log && !(axis.start > 0.0 && axis.stop > 0.0)) {
    field_error(pointer, "log spacing needs positive start and stop");
  }
  return axis;
}

double& param_ref(ModelParams& p, double& beta, std::string_view name) {
  if (name == "omega0") return p.omega0;
  if (name == "Omega") return p.Omega;
  if (name == "g1") return p.g1;
  if (name == "g2") return p.g2;
  return beta;
}

Cell beta_cell(std::optional<InverseTemperature> b) {
  if (!b) return std::string("none");
  return b->value();
}

std::vector<std::string> task_specific_columns(Task task, const SweepSpec& spec) {
  switch (task) {
    case Task::critical: return {"symmetry", "has_transition", "beta_c"};
    case Task::gap: return {"phase", "omega_delta", "b0_sq", "gap_residual"};
    case Task::spectrum:
      return {"case_tag", "goldstone", "e_lower", "e_upper", "kernel_e_lower", "kernel_e_upper"};
    case Task::free_energy: return {"phase", "free_energy", "phi", "phi_rate_form"};
    case Task::partition:
      return {"n_atoms", "cutoff", "phase", "goldstone_case", "phi", "log_correction", "tail",
              "log_ratio"};
    case Task::ed_compare: {
      std::vector<std::string> cols = {"n_atoms",        "n_max",  "f_ed",     "f_meanfield",
                                       "f_diff",         "photon_density", "b0_sq", "inversion"};
      for (int i = 1; i <= spec.ed.k_gaps; ++i) cols.push_back("gap_" + std::to_string(i));
      for (const char* c : {"parity_residual", "nsum_residual", "ndiff_residual"}) cols.emplace_back(c);
      return cols;
    }
  }
  return {};
}

Phase phase_of(const ModelParams& p, InverseTemperature beta) {
  if (p.coupling_sum() == 0.0) return Phase::normal;
  return solve_gap(p, beta).phase;
}

std::vector<Cell> task_cells(Task task, const ModelParams& p, InverseTemperature beta,
                             const SweepSpec& spec) {
  switch (task) {
    case Task::critical: {
      const auto bc = critical_beta(p);
      return {std::string(to_string(classify_symmetry(p).tag)), bc.has_value(), beta_cell(bc)};
    }
    case Task::gap: {
      const GapSolution gap = solve_gap(p, beta);
      const double residual =
          gap.phase == Phase::superradiant ? gap_residual(p, beta, gap.omega_delta) : 0.0;
      return {std::string(to_string(gap.phase)), gap.omega_delta, gap.b0_sq, residual};
    }
    case Task::spectrum: {
      const SpectrumResult closed = spectrum(p, beta);
      const SpectrumResult roots = spectrum_via_kernel_roots(p, beta);
      return {std::string(to_string(closed.case_tag)), closed.goldstone, closed.energies.front(),
              closed.energies.back(), roots.energies.front(), roots.energies.back()};
    }
    case Task::free_energy: {
      const double f = free_energy_per_atom(p, beta);
      PhiShift phi{0.0, beta.is_infinite()};
      Phase phase = Phase::normal;
      if (p.coupling_sum() > 0.0) {
        const GapSolution gap = solve_gap(p, beta);
        phase = gap.phase;
        phi = phi_shift(p, beta, gap);
      }
      return {std::string(to_string(phase)), f, phi.value, phi.rate_form};
    }
    case Task::partition: {
      const auto& opt = spec.partition;
      const PartitionAsymptotics z = log_partition_ratio(p, beta, opt.n_atoms, opt.cutoff);
      return {opt.n_atoms, opt.cutoff, std::string(to_string(phase_of(p, beta))),
              z.goldstone_case, z.phi, z.log_correction, z.tail, z.log_ratio()};
    }
    case Task::ed_compare: {
      const auto& opt = spec.ed;
      EDConfig cfg;
      cfg.n_atoms = opt.n_atoms;
      cfg.params = p;
      cfg.beta = beta;
      cfg.n_max = opt.n_max.value_or(default_fock_cutoff(opt.n_atoms, p, beta));
      const EDResult ed = thermal_observables(cfg, opt.k_gaps, opt.check_truncation);
      const double f_mf = free_energy_per_atom(p, beta);
      double b0_sq = 0.0;
      if (p.coupling_sum() > 0.0) b0_sq = solve_gap(p, beta).b0_sq;
      std::vector<Cell> cells = {static_cast<std::int64_t>(cfg.n_atoms),
                                 static_cast<std::int64_t>(cfg.n_max),
                                 ed.free_energy_per_atom,
                                 f_mf,
                                 ed.free_energy_per_atom - f_mf,
                                 ed.photon_density,
                                 b0_sq,
                                 ed.inversion};
      for (int i = 0; i < opt.k_gaps; ++i) {
        if (i < static_cast<int>(ed.gaps.size())) {
          cells.emplace_back(ed.gaps[static_cast<std::size_t>(i)]);
        } else {
          cells.emplace_back(std::monostate{});
        }
      }
      cells.emplace_back(ed.parity_residual);
      cells.emplace_back(ed.nsum_residual);
      cells.emplace_back(ed.ndiff_residual);
      return cells;
    }
  }
  return {};
}

json cell_to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else {
          return v;
        }
      },
      cell);
}

std::string file_for(const SweepSpec& spec, std::string_view stem) {
  const char* ext = spec.output.format == OutputFormat::csv ? "csv" : "json";
  std::string path = spec.output.path;
  if (!stem.empty()) {
    path += '.';
    path += stem;
  }
  path += '.';
  path += ext;
  return path;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IOError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string_view to_string(Task task) noexcept {
  switch (task) {
    case Task::critical: return "critical";
    case Task::gap: return "gap";
    case Task::spectrum: return "spectrum";
    case Task::free_energy: return "free-energy";
    case Task::partition: return "partition";
    case Task::ed_compare: return "ed-compare";
  }
  return "?";
}

std::optional<Task> task_from_string(std::string_view name) noexcept {
  for (Task t : kAllTasks) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::vector<double> Axis::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  const double last = count - 1;
  for (int i = 0; i < count; ++i) {
    const double s = i / last;
    if (spacing == Spacing::linear) {
      out[static_cast<std::size_t>(i)] = start + (stop - start) * s;
    } else {
      out[static_cast<std::size_t>(i)] =
          std::exp(std::log(start) + (std::log(stop) - std::log(start)) * s);
    }
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

SweepSpec parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON at " + location(text, e.byte) + ": " + e.what());
  }
  reject_unknown(root, "",
                 {"axes", "fixed", "tasks", "output", "partition", "ed", "workers", "max_ed_jobs"});

  SweepSpec spec;
  if (root.contains("axes")) {
    const json& axes = root.at("axes");
    if (!axes.is_array()) field_error("/axes", "must be an array");
    if (axes.size() > 2) field_error("/axes", "at most two axes may be swept");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const std::string pointer = "/axes/" + std::to_string(i);
      Axis axis = parse_axis(axes[i], pointer);
      if (!seen.insert(axis.name).second) field_error(pointer + "/name", "duplicate axis name");
      spec.axes.push_back(std::move(axis));
    }
  }

  auto swept = [&](std::string_view name) {
    return std::any_of(spec.axes.begin(), spec.axes.end(),
                       [&](const Axis& a) { return a.name == name; });
  };

  if (root.contains("fixed")) {
    const json& fixed = root.at("fixed");
    reject_unknown(fixed, "/fixed", {"omega0", "Omega", "g1", "g2", "beta"});
    for (const auto& [key, value] : fixed.items()) {
      if (swept(key)) field_error("/fixed/" + key, "is also a swept axis");
    }
    if (fixed.contains("omega0")) spec.fixed.omega0 = number_at(fixed, "omega0", "/fixed");
    if (fixed.contains("Omega")) spec.fixed.Omega = number_at(fixed, "Omega", "/fixed");
    if (fixed.contains("g1")) spec.fixed.g1 = number_at(fixed, "g1", "/fixed");
    if (fixed.contains("g2")) spec.fixed.g2 = number_at(fixed, "g2", "/fixed");
    if (fixed.contains("beta")) spec.fixed_beta = beta_value(fixed.at("beta"), "/fixed/beta");
    if (!(spec.fixed.omega0 > 0.0)) field_error("/fixed/omega0", "must be positive");
    if (!(spec.fixed.Omega > 0.0)) field_error("/fixed/Omega", "must be positive");
    if (spec.fixed.g1 < 0.0) field_error("/fixed/g1", "must be non-negative");
    if (spec.fixed.g2 < 0.0) field_error("/fixed/g2", "must be non-negative");
  }

  if (root.contains("tasks")) {
    const json& tasks = root.at("tasks");
    if (!tasks.is_array()) field_error("/tasks", "must be an array");
    spec.tasks.clear();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const std::string pointer = "/tasks/" + std::to_string(i);
      if (!tasks[i].is_string()) field_error(pointer, "must be a string");
      const auto task = task_from_string(tasks[i].get<std::string>());
      if (!task) field_error(pointer, "unknown task '" + tasks[i].get<std::string>() + "'");
      if (std::find(spec.tasks.begin(), spec.tasks.end(), *task) != spec.tasks.end()) {
        field_error(pointer, "duplicate task");
      }
      spec.tasks.push_back(*task);
    }
  }

  if (root.contains("output")) {
    const json& output = root.at("output");
    reject_unknown(output, "/output", {"format", "path"});
    if (output.contains("format")) {
      const auto f = string_at(output, "format", "/output");
      if (f == "csv") {
        spec.output.format = OutputFormat::csv;
      } else if (f == "json") {
        spec.output.format = OutputFormat::json;
      } else {
        field_error("/output/format", "must be \"csv\" or \"json\"");
      }
    }
    if (output.contains("path")) {
      spec.output.path = string_at(output, "path", "/output");
      if (spec.output.path.empty()) field_error("/output/path", "must not be empty");
    }
  }

  if (root.contains("partition")) {
    const json& part = root.at("partition");
    reject_unknown(part, "/partition", {"n_atoms", "cutoff"});
    if (part.contains("n_atoms")) spec.partition.n_atoms = integer_at(part, "n_atoms", "/partition", 1);
    if (part.contains("cutoff")) spec.partition.cutoff = integer_at(part, "cutoff", "/partition", 1);
  }

  if (root.contains("ed")) {
    const json& ed = root.at("ed");
    reject_unknown(ed, "/ed", {"n_atoms", "n_max", "k_gaps", "check_truncation"});
    if (ed.contains("n_atoms")) {
      spec.ed.n_atoms = static_cast<int>(integer_at(ed, "n_atoms", "/ed", 1));
    }
    if (ed.contains("n_max") && !ed.at("n_max").is_null()) {
      spec.ed.n_max = static_cast<int>(integer_at(ed, "n_max", "/ed", 0));
    }
    if (ed.contains("k_gaps")) spec.ed.k_gaps = static_cast<int>(integer_at(ed, "k_gaps", "/ed", 0));
    if (ed.contains("check_truncation")) {
      if (!ed.at("check_truncation").is_boolean()) {
        field_error("/ed/check_truncation", "must be a boolean");
      }
      spec.ed.check_truncation = ed.at("check_truncation").get<bool>();
    }
  }

  if (root.contains("workers")) spec.workers = static_cast<int>(integer_at(root, "workers", "", 1));
  if (root.contains("max_ed_jobs")) {
    spec.max_ed_jobs = static_cast<int>(integer_at(root, "max_ed_jobs", "", 1));
  }
  return spec;
}

bool Table::has_errors() const {
  for (const auto& row : rows) {
    if (const auto* s = std::get_if<std::string>(&row.back()); s && !s->empty()) return true;
  }
  return false;
}

const std::vector<std::string>& input_columns() {
  static const std::vector<std::string> cols = {"omega0", "Omega", "g1", "g2", "beta"};
  return cols;
}

std::vector<std::string> task_columns(Task task, const SweepSpec& spec) {
  std::vector<std::string> cols = input_columns();
  for (auto& c : task_specific_columns(task, spec)) cols.push_back(std::move(c));
  cols.emplace_back("error");
  return cols;
}

Row evaluate_row(Task task, const ModelParams& p, double beta, const SweepSpec& spec) {
  Row row = {p.omega0, p.Omega, p.g1, p.g2, beta};
  const std::size_t width = task_specific_columns(task, spec).size();
  std::string error;
  try {
    const ModelParams valid = validate_params(p);
    const InverseTemperature b =
        std::isinf(beta) && beta > 0 ? InverseTemperature::infinite() : InverseTemperature(beta);
    std::vector<Cell> cells = task_cells(task, valid, b, spec);
    row.insert(row.end(), cells.begin(), cells.end());
  } catch (const std::exception& e) {
    error = e.what();
    if (error.empty()) error = "unknown error";
    row.resize(input_columns().size());
    row.resize(input_columns().size() + width);
  }
  row.emplace_back(std::move(error));
  return row;
}

std::vector<std::pair<ModelParams, double>> grid_points(const SweepSpec& spec) {
  std::vector<std::pair<ModelParams, double>> points{{spec.fixed, spec.fixed_beta}};
  for (const Axis& axis : spec.axes) {
    std::vector<std::pair<ModelParams, double>> next;
    const auto values = axis.values();
    next.reserve(points.size() * values.size());
    for (const auto& base : points) {
      for (double v : values) {
        auto point = base;
        param_ref(point.first, point.second, axis.name) = v;
        next.push_back(point);
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<Table> run_sweep(const SweepSpec& spec, int workers) {
  if (workers <= 0) workers = spec.workers;
  workers = std::max(1, workers);
  const auto points = grid_points(spec);

  std::vector<Table> tables;
  for (Task task : spec.tasks) {
    Table t;
    t.task = task;
    t.columns = task_columns(task, spec);
    t.rows.resize(points.size());
    tables.push_back(std::move(t));
  }

  const std::size_t total = tables.size() * points.size();
  std::atomic<std::size_t> next{0};
  std::counting_semaphore<> ed_slots(std::max(1, spec.max_ed_jobs));

  auto work = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      Table& table = tables[job / points.size()];
      const auto& [params, beta] = points[job % points.size()];
      if (table.task == Task::ed_compare) {
        ed_slots.acquire();
        table.rows[job % points.size()] = evaluate_row(table.task, params, beta, spec);
        ed_slots.release();
      } else {
        table.rows[job % points.size()] = evaluate_row(table.task, params, beta, spec);
      }
    }
  };

  if (workers == 1 || total <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(workers), total);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work);
  }
  return tables;
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return v;
        }
      },
      cell);
}

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&out](const auto& fields, auto&& render) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_field(render(fields[i]));
    }
    out.push_back('\n');
  };
  line(table.columns, [](const std::string& s) { return s; });
  for (const auto& row : table.rows) line(row, [](const Cell& c) { return format_cell(c); });
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      obj[table.columns[i]] = cell_to_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_output(const std::vector<Table>& tables,
                                               const SweepSpec& spec) {
  std::vector<std::filesystem::path> written;
  const bool csv = spec.output.format == OutputFormat::csv;
  if (tables.empty()) {
    Table header_only;
    header_only.columns = input_columns();
    const std::filesystem::path path = file_for(spec, "");
    write_file(path, csv ? to_csv(header_only) : to_json(header_only));
    written.push_back(path);
    return written;
  }
  for (const Table& table : tables) {
    const std::filesystem::path path = file_for(spec, to_string(table.task));
    write_file(path, csv ? to_csv(table) : to_json(table));
    written.push_back(path);
  }
  return written;
}

int sweep_exit_code(const std::vector<Table>& tables) {
  return std::any_of(tables.begin(), tables.end(), [](const Table& t) { return t.has_errors(); })
             ? 2
             : 0;
}

}  // namespace dicke
