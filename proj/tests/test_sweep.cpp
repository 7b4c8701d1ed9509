#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dicke/errors.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/number_format.hpp"
#include "dicke/spectrum.hpp"
#include "dicke/sweep.hpp"

namespace fs = std::filesystem;
using dicke::SweepSpec;
using dicke::Task;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      field.push_back(c);
    }
  }
  return rows;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dicke_sweep_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t column(const dicke::Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  EXPECT_NE(it, t.columns.end()) << name;
  return static_cast<std::size_t>(it - t.columns.begin());
}

}  // namespace

TEST(NumberFormat, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0, 5e-324, 1.7976931348623157e308}) {
    const auto s = dicke::format_double(x);
    EXPECT_EQ(dicke::parse_double(s), x) << s;
  }
  EXPECT_EQ(dicke::format_double(0.1), "0.1");
  EXPECT_EQ(dicke::format_double(1.44), "1.44");
  EXPECT_EQ(dicke::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(dicke::format_double(std::nan("")), "nan");
  EXPECT_THROW(dicke::parse_double("1.0x"), std::invalid_argument);
}

TEST(NumberFormat, CsvQuoting) {
  EXPECT_EQ(dicke::csv_field("plain"), "plain");
  EXPECT_EQ(dicke::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(dicke::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(dicke::csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(ParseConfig, MinimalWithDefaults) {
  const auto spec = dicke::parse_config(R"({"axes": [{"name": "g1", "start": 0.1, "stop": 1.0, "count": 4}]})");
  ASSERT_EQ(spec.axes.size(), 1u);
  EXPECT_EQ(spec.axes[0].name, "g1");
  EXPECT_EQ(spec.axes[0].spacing, dicke::Spacing::linear);
  EXPECT_EQ(spec.tasks, std::vector<Task>{Task::gap});
  EXPECT_EQ(spec.fixed, dicke::ModelParams{});
  EXPECT_TRUE(std::isinf(spec.fixed_beta));
  EXPECT_EQ(spec.output.format, dicke::OutputFormat::csv);
  EXPECT_EQ(spec.output.path, "dicke_sweep");
  EXPECT_EQ(spec.workers, 1);
}

TEST(ParseConfig, FullDocument) {
  const auto spec = dicke::parse_config(R"({
    "axes": [{"name": "beta", "start": 0.5, "stop": 50, "count": 3, "spacing": "log"},
             {"name": "g2", "start": 0, "stop": 1, "count": 2}],
    "fixed": {"omega0": 2, "Omega": 0.5, "g1": 0.4},
    "tasks": ["critical", "ed-compare", "free-energy"],
    "output": {"format": "json", "path": "out/run"},
    "partition": {"n_atoms": 50, "cutoff": 128},
    "ed": {"n_atoms": 6, "n_max": 20, "k_gaps": 3, "check_truncation": false},
    "workers": 4, "max_ed_jobs": 1})");
  EXPECT_EQ(spec.axes[0].spacing, dicke::Spacing::log);
  const auto v = spec.axes[0].values();
  EXPECT_EQ(v.front(), 0.5);
  EXPECT_EQ(v.back(), 50.0);
  EXPECT_NEAR(v[1], 5.0, 1e-14);
  EXPECT_EQ(spec.fixed.omega0, 2.0);
  EXPECT_EQ(spec.fixed.g1, 0.4);
  EXPECT_EQ(spec.tasks.size(), 3u);
  EXPECT_EQ(spec.ed.n_max, 20);
  EXPECT_FALSE(spec.ed.check_truncation);
  EXPECT_EQ(spec.partition.cutoff, 128);
  EXPECT_EQ(spec.max_ed_jobs, 1);
  EXPECT_EQ(dicke::parse_config(R"({"fixed": {"beta": "inf"}})").fixed_beta,
            std::numeric_limits<double>::infinity());
}

TEST(ParseConfig, Rejections) {
  const char* bad[] = {
      R"({"axes": [{"name": "g1", "start": 0, "stop": 1, "count": 1}]})",
      R"({"axes": [{"name": "g1", "start": 0, "stop": 1, "count": 2}, {"name": "g1", "start": 0, "stop": 1, "count": 3}]})",
      R"({"axes": [{"name": "g3", "start": 0, "stop": 1, "count": 2}]})",
      R"({"axes": [{"name": "g1", "start": 0, "stop": 1, "count": 2, "spacing": "log"}]})",
      R"({"axes": [{"name": "g1", "start": 0, "stop": 1, "count": 2, "extra": 1}]})",
      R"({"axes": [{"name": "g1", "start": 0, "count": 2}]})",
      R"({"axes": [1, 2, 3]})",
      R"({"fixed": {"g1": 0.5}, "axes": [{"name": "g1", "start": 0, "stop": 1, "count": 2}]})",
      R"({"fixed": {"omega0": 0}})",
      R"({"fixed": {"beta": -1}})",
      R"({"tasks": ["gap", "gap"]})",
      R"({"tasks": ["plot"]})",
      R"({"output": {"format": "xml"}})",
      R"({"ed": {"n_atoms": 0}})",
      R"({"workers": 0})",
      R"({"unknown": true})",
      R"([1, 2])",
  };
  for (const char* doc : bad) EXPECT_THROW(dicke::parse_config(doc), dicke::ConfigError) << doc;
}

TEST(ParseConfig, ErrorLocations) {
  try {
    dicke::parse_config("{\n  \"axes\": [\n  }");
    FAIL();
  } catch (const dicke::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  try {
    dicke::parse_config(R"({"axes": [{"name": "g1", "start": 0, "stop": 1, "count": 1}]})");
    FAIL();
  } catch (const dicke::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/axes/0/count"), std::string::npos) << e.what();
  }
}

TEST(RunSweep, RowMajorOrder) {
  const auto spec = dicke::parse_config(R"({
    "axes": [{"name": "g1", "start": 0.1, "stop": 0.3, "count": 3},
             {"name": "g2", "start": 1, "stop": 2, "count": 2}]})");
  const auto points = dicke::grid_points(spec);
  ASSERT_EQ(points.size(), 6u);
  EXPECT_EQ(points[0].first.g1, 0.1);
  EXPECT_EQ(points[1].first.g1, 0.1);
  EXPECT_EQ(points[1].first.g2, 2.0);
  EXPECT_EQ(points[2].first.g2, 1.0);
  EXPECT_EQ(points[5].first.g1, 0.3);
}

TEST(RunSweep, BetaSweepCrossesTransitionAtCriticalBeta) {
  const auto spec = dicke::parse_config(R"({
    "axes": [{"name": "beta", "start": 0.5, "stop": 4, "count": 71}],
    "fixed": {"g1": 0.6, "g2": 0.6}, "tasks": ["gap"]})");
  const auto tables = dicke::run_sweep(spec);
  const auto& t = tables.at(0);
  const double bc = dicke::critical_beta({1, 1, 0.6, 0.6})->value();
  const double step = 3.5 / 70;
  const auto b0 = column(t, "b0_sq");
  const auto beta = column(t, "beta");
  bool seen = false;
  for (const auto& row : t.rows) {
    const double b = std::get<double>(row[beta]);
    const double v = std::get<double>(row[b0]);
    if (!seen && v > 0.0) {
      seen = true;
      EXPECT_GT(b, bc);
      EXPECT_LE(b - bc, step);
    }
    if (seen) EXPECT_GT(v, 0.0);
    else EXPECT_EQ(v, 0.0);
  }
  EXPECT_TRUE(seen);
  EXPECT_FALSE(t.has_errors());
}

TEST(RunSweep, RowsEqualDirectCalls) {
  const auto spec = dicke::parse_config(R"({
    "axes": [{"name": "g2", "start": 0, "stop": 1.2, "count": 5}],
    "fixed": {"g1": 0.7, "beta": 3.5}, "tasks": ["spectrum", "free-energy"]})");
  const auto tables = dicke::run_sweep(spec, 3);
  const auto points = dicke::grid_points(spec);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [p, beta] = points[i];
    const auto s = dicke::spectrum(p, dicke::InverseTemperature(beta));
    EXPECT_EQ(std::get<double>(tables[0].rows[i][column(tables[0], "e_lower")]), s.energies[0]);
    EXPECT_EQ(std::get<double>(tables[0].rows[i][column(tables[0], "e_upper")]), s.energies[1]);
    EXPECT_EQ(std::get<double>(tables[1].rows[i][column(tables[1], "free_energy")]),
              dicke::free_energy_per_atom(p, dicke::InverseTemperature(beta)));
  }
}

TEST(RunSweep, ErrorsAreCapturedPerRow) {
  const auto spec = dicke::parse_config(R"({
    "axes": [{"name": "g1", "start": 0, "stop": 1, "count": 3}],
    "tasks": ["partition", "critical"]})");
  const auto tables = dicke::run_sweep(spec);
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_TRUE(tables[0].has_errors());
  for (const auto& row : tables[0].rows) {
    EXPECT_FALSE(std::get<std::string>(row.back()).empty());
    EXPECT_EQ(row.size(), tables[0].columns.size());
  }
  const auto& crit = tables[1];
  EXPECT_FALSE(std::get<std::string>(crit.rows[0].back()).empty());
  EXPECT_TRUE(std::get<std::string>(crit.rows[2].back()).empty());
  EXPECT_EQ(std::get<std::string>(crit.rows[1][column(crit, "beta_c")]), "none");
  EXPECT_EQ(dicke::sweep_exit_code(tables), 2);
}

TEST(RunSweep, IndependentOfWorkerCount) {
  const auto spec = dicke::parse_config(R"({
    "axes": [{"name": "g1", "start": 0.1, "stop": 1.5, "count": 9},
             {"name": "beta", "start": 0.5, "stop": 20, "count": 4, "spacing": "log"}],
    "fixed": {"g2": 0.3},
    "tasks": ["critical", "gap", "spectrum", "free-energy", "partition", "ed-compare"],
    "partition": {"n_atoms": 100, "cutoff": 256},
    "ed": {"n_atoms": 2, "n_max": 12, "check_truncation": false}})");
  const auto serial = dicke::run_sweep(spec, 1);
  for (int w : {2, 5, 16}) {
    const auto parallel = dicke::run_sweep(spec, w);
    ASSERT_EQ(parallel.size(), serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      EXPECT_EQ(dicke::to_csv(parallel[i]), dicke::to_csv(serial[i]));
    }
  }
}

TEST(Emit, CsvAndJsonAgree) {
  auto spec = dicke::parse_config(R"({
    "axes": [{"name": "g1", "start": 0, "stop": 1.5, "count": 4}],
    "tasks": ["critical", "spectrum"]})");
  const auto tables = dicke::run_sweep(spec);
  spec.output.path = scratch("agree").string();
  const auto csv_files = dicke::emit_output(tables, spec);
  spec.output.format = dicke::OutputFormat::json;
  const auto json_files = dicke::emit_output(tables, spec);
  ASSERT_EQ(csv_files.size(), 2u);
  EXPECT_EQ(csv_files[0].filename().string(), "agree.critical.csv");
  for (std::size_t f = 0; f < csv_files.size(); ++f) {
    const auto rows = parse_csv(read_file(csv_files[f]));
    const auto doc = nlohmann::json::parse(read_file(json_files[f]));
    ASSERT_EQ(doc.size() + 1, rows.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& obj = doc[r - 1];
      ASSERT_EQ(obj.size(), rows[0].size());
      for (std::size_t c = 0; c < rows[0].size(); ++c) {
        const auto& value = obj.at(rows[0][c]);
        const std::string& text = rows[r][c];
        if (value.is_null()) {
          EXPECT_EQ(text, "");
        } else if (value.is_boolean()) {
          EXPECT_EQ(text, value.get<bool>() ? "true" : "false");
        } else if (value.is_number()) {
          EXPECT_EQ(dicke::parse_double(text), value.get<double>());
        } else {
          EXPECT_EQ(text, value.get<std::string>());
        }
      }
    }
  }
}

TEST(Emit, EmptyTasksWriteHeaderOnly) {
  auto spec = dicke::parse_config(R"({"tasks": [], "axes": [{"name": "g1", "start": 0, "stop": 1, "count": 3}]})");
  spec.output.path = scratch("empty").string();
  const auto tables = dicke::run_sweep(spec);
  EXPECT_TRUE(tables.empty());
  const auto files = dicke::emit_output(tables, spec);
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(read_file(files[0]), "omega0,Omega,g1,g2,beta\n");
  EXPECT_EQ(dicke::sweep_exit_code(tables), 0);
}

TEST(Emit, UnwritablePath) {
  auto spec = dicke::parse_config("{}");
  spec.output.path = (scratch("missing_dir") / "nested" / "out").string();
  fs::remove_all(scratch("missing_dir"));
  EXPECT_THROW(dicke::emit_output(dicke::run_sweep(spec), spec), dicke::IOError);
}

TEST(Emit, NonFiniteNumbersInJson) {
  dicke::Table t;
  t.columns = {"x", "error"};
  t.rows.push_back({std::numeric_limits<double>::infinity(), std::string()});
  const auto doc = nlohmann::json::parse(dicke::to_json(t));
  EXPECT_EQ(doc[0]["x"], "inf");
  EXPECT_EQ(dicke::to_csv(t), "x,error\ninf,\n");
}
