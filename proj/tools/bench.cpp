// bench: run the sleep-quality classifier benchmark grid, generate synthetic
// dataset fixtures, or re-emit report tables from a saved cells.json.
//
// Exit codes: 0 success, 1 configuration error, 2 partial cell failures.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sleepbench/errors.hpp"
#include "sleepbench/harness.hpp"

namespace fs = std::filesystem;
using namespace sleepbench;

namespace {

int cmd_run(const std::string& config_path) {
  const RunConfig cfg = parse_config_file(config_path);
  const std::vector<BenchmarkCell> cells = run_benchmark(cfg);
  const std::vector<fs::path> written = write_reports(cfg, cells);
  for (const fs::path& path : written) std::cout << "wrote " << path.string() << "\n";

  int failures = 0;
  for (const BenchmarkCell& cell : cells) {
    if (!cell.ok()) {
      ++failures;
      std::cerr << "cell " << to_string(cell.dataset) << "/" << to_string(cell.classifier)
                << " failed: " << cell.error << "\n";
    }
  }
  if (failures > 0) {
    std::cerr << failures << " of " << cells.size() << " cells failed\n";
    return 2;
  }
  return 0;
}

int cmd_fixtures(const std::string& out_dir, std::uint64_t seed, double noise) {
  fs::create_directories(out_dir);
  const FixtureOptions opts{noise};
  for (DatasetId id : {DatasetId::sleep_study, DatasetId::sleep_deprivation,
                       DatasetId::sleep_cycle}) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(id)));
    const std::string csv = make_fixture(id, default_rows(id), rng, opts);
    const fs::path path = fs::path(out_dir) / (std::string(to_string(id)) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << csv;
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

int cmd_report(const std::string& cells_path, const std::string& format_name,
               const std::string& out_dir) {
  const ReportFormat format = report_format_from(format_name);
  std::ifstream in(cells_path, std::ios::binary);
  if (!in) throw ParamError("cannot open cells file '" + cells_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::vector<BenchmarkCell> cells = cells_from_json(buffer.str());

  const std::string table1 = emit_table1(cells, format);
  const std::string table2 = emit_table2(cells, format);
  if (out_dir.empty()) {
    std::cout << table1 << "\n" << table2;
    return 0;
  }
  fs::create_directories(out_dir);
  const std::string ext(format_extension(format));
  for (const auto& [name, content] :
       {std::pair{std::string("table1.") + ext, table1}, {std::string("table2.") + ext, table2}}) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sleep-quality classification benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Run the benchmark grid from a config file");
  run->add_option("--config", config_path, "Path to the run configuration")->required();

  std::string fixtures_out;
  std::uint64_t fixtures_seed = 1;
  double fixtures_noise = 1.25;
  CLI::App* fixtures =
      app.add_subcommand("fixtures", "Generate the three synthetic dataset CSVs");
  fixtures->add_option("--out", fixtures_out, "Output directory")->required();
  fixtures->add_option("--seed", fixtures_seed, "Fixture seed")->required();
  fixtures->add_option("--noise", fixtures_noise, "Noise level (0 = separable)");

  std::string cells_path, report_format = "markdown", report_out;
  CLI::App* report = app.add_subcommand("report", "Re-emit tables from a saved cells.json");
  report->add_option("--cells", cells_path, "Path to cells.json")->required();
  report->add_option("--format", report_format, "markdown|csv|json");
  report->add_option("--out", report_out, "Write files here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (fixtures->parsed()) return cmd_fixtures(fixtures_out, fixtures_seed, fixtures_noise);
    if (report->parsed()) return cmd_report(cells_path, report_format, report_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
