#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "lrt/cli.hpp"
#include "lrt/error.hpp"
#include "lrt/textio.hpp"

namespace lrt::cli {
namespace {

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const std::string& get(const Settings& s, const std::string& key) {
  auto it = s.find(key);
  if (it == s.end()) usage("missing setting '" + key + "'");
  return it->second;
}

double as_double(const Settings& s, const std::string& key) {
  const auto& v = get(s, key);
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  auto d = textio::parse_double(v);
  if (!d) usage(key + ": expected a number, got '" + v + "'");
  return *d;
}

long long as_int(const Settings& s, const std::string& key) {
  const auto& v = get(s, key);
  auto i = textio::parse_int(v);
  if (!i) usage(key + ": expected an integer, got '" + v + "'");
  return *i;
}

std::size_t as_count(const Settings& s, const std::string& key, long long min = 1) {
  const auto v = as_int(s, key);
  if (v < min) usage(key + " must be >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

bool as_bool(const Settings& s, const std::string& key) {
  const auto& v = get(s, key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  usage(key + ": expected true/false, got '" + v + "'");
}

double positive(const Settings& s, const std::string& key) {
  const double v = as_double(s, key);
  if (!(v > 0.0) || !std::isfinite(v)) usage(key + " must be a positive finite number");
  return v;
}

std::vector<std::string> as_list(const Settings& s, const std::string& key) {
  std::vector<std::string> out;
  for (auto part : textio::split(get(s, key))) {
    auto t = textio::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<int> as_years(const Settings& s) {
  std::vector<int> out;
  for (const auto& part : as_list(s, "year")) {
    const auto dash = part.find('-', 1);
    auto first = textio::parse_int(std::string_view(part).substr(0, dash));
    auto last = dash == std::string::npos ? first
                                          : textio::parse_int(std::string_view(part).substr(dash + 1));
    if (!first || !last || *last < *first) usage("year: expected YEAR, FIRST-LAST or a list");
    for (auto y = *first; y <= *last; ++y) out.push_back(static_cast<int>(y));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename T>
T one_of(const Settings& s, const std::string& key,
         std::initializer_list<std::pair<std::string_view, T>> choices) {
  const auto& v = get(s, key);
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (v == name) return value;
    allowed += (allowed.empty() ? "" : "|") + std::string(name);
  }
  usage(key + ": expected " + allowed + ", got '" + v + "'");
}

}  // namespace

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"data", "", "input panel in the canonical long format"},
      {"country", "", "comma-separated ISO-3 codes (empty: all)"},
      {"year", "", "YEAR, FIRST-LAST or a comma list (empty: all)"},
      {"sector", "", "shocked sector codes for response/simulate (empty: all)"},
      {"noise", "output", "noise covariance: output (eta * Y0) or isotropic (epsilon)"},
      {"eta", "0.01", "output-proportional noise scale"},
      {"epsilon", "0.01", "isotropic noise scale"},
      {"horizon", "", "truncation / curve horizon in years (inf allowed)"},
      {"method", "analytic", "analytic or montecarlo"},
      {"dt", "0.01", "integration step, years"},
      {"length", "10000", "Monte Carlo trajectory length per replica, years"},
      {"replicas", "4", "Monte Carlo replicas"},
      {"burn-in", "50", "discarded years before statistics"},
      {"seed", "1", "base random seed"},
      {"workers", "1", "worker threads"},
      {"shock", "impulse", "impulse or step (response, simulate)"},
      {"shock-value", "1", "shock magnitude per shocked sector, millions USD"},
      {"step", "0.01", "response grid spacing, years"},
      {"eps", "0.05", "relative recovery threshold"},
      {"convention", "second", "sector sum over the second (row sums) or first index"},
      {"target", "changes", "evaluate output changes or levels"},
      {"arima-order", "1,1,1", "ARIMA p,d,q with entries in {0,1}"},
      {"calibration", "expanding", "ARIMA calibration: expanding window or full sample"},
      {"baselines", "arima,var,perturbed", "benchmark baselines"},
      {"var-samples", "10000", "synthetic yearly observations for the VAR"},
      {"var-year", "0", "VAR calibration year (0: first year in the panel)"},
      {"ridge", "0", "relative Tikhonov parameter for implied shocks (0: off)"},
      {"condition-cap", "1e12", "largest accepted condition number of rho(t,1)"},
      {"p", "0.05", "disparity filter significance"},
      {"two-sided", "true", "disparity filter on out- and in-direction"},
      {"format", "edgelist", "backbone export format: edgelist or graphml"},
      {"scenario", "", "scenario specification file"},
      {"absolute", "false", "fluctuation regression on absolute output changes"},
      {"synth-countries", "4", "synthetic panel: number of countries"},
      {"synth-sectors", "5", "synthetic panel: number of sectors"},
      {"synth-first-year", "2000", "synthetic panel: first year"},
      {"synth-last-year", "2014", "synthetic panel: last year"},
      {"out", "out", "output directory"},
      {"test-perfect-lrt", "false", "", true},
  };
  return keys;
}

Settings default_settings() {
  Settings s;
  for (const auto& k : known_keys()) s.emplace(k.key, k.default_value);
  return s;
}

Settings read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) usage("cannot open config file " + path.string());
  const auto defaults = default_settings();
  Settings s;
  // A manifest from an earlier run is accepted as a config file.
  if ((in >> std::ws).peek() == '{') {
    try {
      const auto manifest = nlohmann::json::parse(in);
      for (const auto& [key, value] : manifest.at("settings").items()) {
        if (!defaults.count(key)) usage(path.string() + ": unknown key '" + key + "'");
        s[key] = value.get<std::string>();
      }
    } catch (const nlohmann::json::exception& e) {
      usage(path.string() + ": not a valid manifest: " + e.what());
    }
    return s;
  }
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view v = raw;
    if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = textio::trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      usage(path.string() + ":" + std::to_string(line) + ": expected key = value");
    }
    std::string key(textio::trim(v.substr(0, eq)));
    if (!defaults.count(key)) {
      usage(path.string() + ":" + std::to_string(line) + ": unknown key '" + key + "'");
    }
    s[key] = std::string(textio::trim(v.substr(eq + 1)));
  }
  return s;
}

Settings read_environment() {
  Settings s;
  for (const auto& k : known_keys()) {
    std::string name = "LRT_";
    for (char c : k.key) name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
    if (const char* v = std::getenv(name.c_str())) s[std::string(k.key)] = v;
  }
  return s;
}

Settings merge(std::initializer_list<const Settings*> layers) {
  Settings out;
  for (const auto* layer : layers) {
    for (const auto& [k, v] : *layer) out[k] = v;
  }
  return out;
}

RunConfig to_run_config(const std::string& command, const Settings& s) {
  RunConfig c;
  c.command = command;
  c.resolved = s;
  c.data = get(s, "data");
  c.countries = as_list(s, "country");
  c.years = as_years(s);
  c.sectors = as_list(s, "sector");

  const auto noise = one_of<NoiseSpec::Kind>(
      s, "noise", {{"output", NoiseSpec::Kind::OutputProportional},
                   {"isotropic", NoiseSpec::Kind::Isotropic}});
  c.noise = noise == NoiseSpec::Kind::OutputProportional
                ? NoiseSpec::output_proportional(as_double(s, "eta"))
                : NoiseSpec::isotropic(as_double(s, "epsilon"));

  if (!get(s, "horizon").empty()) {
    c.horizon = as_double(s, "horizon");
    if (!(*c.horizon > 0.0)) usage("horizon must be positive");
  }
  c.method = one_of<std::string>(s, "method", {{"analytic", "analytic"},
                                               {"montecarlo", "montecarlo"}});
  c.dt = positive(s, "dt");
  c.length = positive(s, "length");
  c.replicas = as_count(s, "replicas");
  c.burn_in = as_double(s, "burn-in");
  if (!(c.burn_in >= 0.0)) usage("burn-in must be >= 0");
  c.seed = static_cast<std::uint64_t>(as_int(s, "seed"));
  c.workers = as_count(s, "workers");
  c.shock = one_of<std::string>(s, "shock", {{"impulse", "impulse"}, {"step", "step"}});
  c.shock_value = as_double(s, "shock-value");
  c.step = positive(s, "step");
  c.eps = positive(s, "eps");
  c.convention = one_of<std::string>(s, "convention", {{"second", "second"}, {"first", "first"}});
  c.target = one_of<EvaluationTarget>(
      s, "target", {{"changes", EvaluationTarget::Changes}, {"levels", EvaluationTarget::Levels}});

  const auto order = as_list(s, "arima-order");
  if (order.size() != 3) usage("arima-order: expected p,d,q");
  int pdq[3];
  for (int i = 0; i < 3; ++i) {
    auto v = textio::parse_int(order[static_cast<std::size_t>(i)]);
    if (!v || *v < 0 || *v > 1) usage("arima-order: entries must be 0 or 1");
    pdq[i] = static_cast<int>(*v);
  }
  c.arima_order = {pdq[0], pdq[1], pdq[2]};
  c.calibration = one_of<std::string>(s, "calibration", {{"expanding", "expanding"},
                                                         {"full", "full"}});
  c.baselines = as_list(s, "baselines");
  for (const auto& b : c.baselines) {
    if (b != "arima" && b != "var" && b != "perturbed") usage("baselines: unknown baseline '" + b + "'");
  }
  c.var_samples = as_count(s, "var-samples");
  c.var_year = static_cast<int>(as_int(s, "var-year"));
  c.ridge = as_double(s, "ridge");
  if (!(c.ridge >= 0.0)) usage("ridge must be >= 0");
  c.condition_cap = positive(s, "condition-cap");
  c.p = as_double(s, "p");
  c.two_sided = as_bool(s, "two-sided");
  c.format = get(s, "format");
  c.scenario = get(s, "scenario");
  c.absolute_changes = as_bool(s, "absolute");
  c.synth_countries = as_count(s, "synth-countries");
  c.synth_sectors = as_count(s, "synth-sectors");
  c.synth_first_year = static_cast<int>(as_int(s, "synth-first-year"));
  c.synth_last_year = static_cast<int>(as_int(s, "synth-last-year"));
  c.out = get(s, "out");
  if (c.out.empty()) usage("out must not be empty");
  c.perfect_lrt = as_bool(s, "test-perfect-lrt");
  return c;
}

}  // namespace lrt::cli
