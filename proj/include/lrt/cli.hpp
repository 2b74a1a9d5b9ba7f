#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrt/baselines.hpp"
#include "lrt/iodata.hpp"

namespace lrt::cli {

/// Flat key-value settings. Config files use `key = value` lines, flags are
/// `--key value`, environment variables `LRT_KEY` (upper case, '-' -> '_').
/// Precedence: flags > environment > config file > defaults.
using Settings = std::map<std::string, std::string>;

struct KeyInfo {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
  bool hidden = false;
};

const std::vector<KeyInfo>& known_keys();

Settings default_settings();
/// Throws InvalidArgument on malformed lines or unknown keys.
Settings read_config_file(const std::filesystem::path& path);
/// Values of LRT_* variables for known keys, from `environ`.
Settings read_environment();
/// Later layers override earlier ones.
Settings merge(std::initializer_list<const Settings*> layers);

struct RunConfig {
  std::string command;
  std::filesystem::path data;
  std::vector<std::string> countries;  // empty: every country in the panel
  std::vector<int> years;              // empty: every year
  std::vector<std::string> sectors;    // shocked sectors for response/simulate
  NoiseSpec noise;
  std::optional<double> horizon;  // command-specific default when unset
  std::string method = "analytic";
  double dt = 0.01;
  double length = 1.0e4;
  std::size_t replicas = 4;
  double burn_in = 50.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string shock = "impulse";
  double shock_value = 1.0;
  double step = 0.01;
  double eps = 0.05;
  std::string convention = "second";
  EvaluationTarget target = EvaluationTarget::Changes;
  ArimaOrder arima_order{1, 1, 1};
  std::string calibration = "expanding";
  std::vector<std::string> baselines;
  std::size_t var_samples = 10000;
  int var_year = 0;
  double ridge = 0.0;
  double condition_cap = 1e12;
  double p = 0.05;
  bool two_sided = true;
  std::string format = "edgelist";
  std::filesystem::path scenario;
  bool absolute_changes = false;
  std::size_t synth_countries = 4;
  std::size_t synth_sectors = 5;
  int synth_first_year = 2000;
  int synth_last_year = 2014;
  std::filesystem::path out = "out";
  bool perfect_lrt = false;  // test hook: LRT predictions := observations

  Settings resolved;  // every key after merging, as written to the manifest
};

/// Converts merged settings into a validated RunConfig. Throws InvalidArgument.
RunConfig to_run_config(const std::string& command, const Settings& settings);

/// Files produced by a command; removed again if the command fails.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const noexcept { return dir_; }
  /// Opens `name` below the output directory for writing and records it.
  std::ofstream open(const std::string& name);
  const std::vector<std::filesystem::path>& files() const noexcept { return files_; }
  void remove_all() noexcept;

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  std::vector<std::filesystem::path> created_dirs_;
};

/// Runs one subcommand; throws lrt::Error on failure.
void run_command(const RunConfig& config, OutputSet& outputs, std::ostream& log);

/// Full entry point: parses argv, runs, writes the manifest, maps errors to
/// exit codes (0 ok, 2 usage, 3 data, 4 numerical).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrt::cli
