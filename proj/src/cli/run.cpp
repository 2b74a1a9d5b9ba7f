#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrt/cli.hpp"
#include "lrt/error.hpp"
#include "lrt/simd/kernels.hpp"

namespace lrt::cli {
namespace {

constexpr std::string_view kVersion = "0.1.0";

const std::vector<std::pair<std::string, std::string>>& commands() {
  static const std::vector<std::pair<std::string, std::string>> list = {
      {"ingest", "validate and normalize an input-output panel"},
      {"susceptibility", "susceptibility matrices, sector aggregates and ranking"},
      {"response", "impulse or step response curves for one country-year"},
      {"forecast", "implied shocks and two-year LRT forecasts"},
      {"benchmark", "LRT forecasts against ARIMA, VAR and perturbed-IO baselines"},
      {"scenario", "stationary impacts of a demand-shock scenario"},
      {"backbone", "disparity-filtered susceptibility network"},
      {"simulate", "one stochastic trajectory of the driven economy"},
      {"synth", "write a deterministic synthetic panel"},
  };
  return list;
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numerical: return 4;
  }
  return 1;
}

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Usage: return "usage";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Numerical: return "numerical";
  }
  return "unknown";
}

void report(std::ostream& err, std::string_view name, std::string_view category,
            const std::string& detail) {
  std::string flat = detail;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  err << "error=" << name << " category=" << category << " detail=" << flat << '\n';
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_manifest(const RunConfig& config, OutputSet& outputs) {
  nlohmann::ordered_json m;
  m["tool"] = "lrt";
  m["version"] = kVersion;
  m["command"] = config.command;
  m["seed"] = config.seed;
  m["kernels"] = simd::active_kernels().name;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.resolved) settings[k] = v;
  m["settings"] = settings;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : outputs.files()) {
    files.push_back(std::filesystem::relative(f, outputs.dir()).generic_string());
  }
  m["outputs"] = files;
  m["created"] = utc_timestamp();
  auto out = outputs.open("manifest.json");
  out << m.dump(2) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear response theory for input-output economies", "lrt"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Settings flags;
  std::map<std::string, CLI::Option*> options;
  std::map<std::string, std::string> values;
  for (const auto& k : known_keys()) {
    const std::string key(k.key);
    auto* opt = app.add_option("--" + key, values[key], std::string(k.help));
    if (k.hidden) opt->group("");
    options[key] = opt;
  }
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file (or a manifest.json)");
  for (const auto& [name, help] : commands()) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "InvalidArgument", "usage", e.what());
    return 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  for (const auto& [key, opt] : options) {
    if (opt->count() > 0) flags[key] = values[key];
  }

  std::optional<OutputSet> outputs;
  try {
    const Settings defaults = default_settings();
    Settings file;
    if (!config_path.empty()) file = read_config_file(config_path);
    const Settings env = read_environment();
    const RunConfig config = to_run_config(command, merge({&defaults, &file, &env, &flags}));
    outputs.emplace(config.out);
    run_command(config, *outputs, err);
    write_manifest(config, *outputs);
    return 0;
  } catch (const Error& e) {
    if (outputs) outputs->remove_all();
    report(err, error_name(e.code()), category_name(e.category()), e.detail());
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    if (outputs) outputs->remove_all();
    report(err, "InvalidArgument", "usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    if (outputs) outputs->remove_all();
    report(err, "Internal", "internal", e.what());
    return 1;
  }
}

}  // namespace lrt::cli
