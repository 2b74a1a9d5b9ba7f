#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>

#include "lrt/backbone.hpp"
#include "lrt/baselines.hpp"
#include "lrt/cli.hpp"
#include "lrt/dynamics.hpp"
#include "lrt/error.hpp"
#include "lrt/linalg.hpp"
#include "lrt/parallel.hpp"
#include "lrt/response.hpp"
#include "lrt/rng.hpp"
#include "lrt/scenario.hpp"
#include "lrt/sectors.hpp"
#include "lrt/susceptibility.hpp"
#include "lrt/synthetic.hpp"
#include "lrt/textio.hpp"

namespace lrt::cli {

namespace fs = std::filesystem;
using textio::fmt;

std::ofstream OutputSet::open(const std::string& name) {
  const fs::path path = dir_ / name;
  // Remember directories we create so a failed run leaves nothing behind.
  std::vector<fs::path> missing;
  for (fs::path p = path.parent_path(); !p.empty() && !fs::exists(p); p = p.parent_path()) {
    missing.push_back(p);
  }
  fs::create_directories(path.parent_path());
  created_dirs_.insert(created_dirs_.end(), missing.begin(), missing.end());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  files_.push_back(path);
  return out;
}

void OutputSet::remove_all() noexcept {
  std::error_code ec;
  for (const auto& f : files_) fs::remove(f, ec);
  for (const auto& d : created_dirs_) fs::remove(d, ec);  // only succeeds when empty
  files_.clear();
  created_dirs_.clear();
}

namespace {

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

Panel load_panel(const RunConfig& c) {
  if (c.data.empty()) usage(c.command + " needs --data");
  std::ifstream in(c.data, std::ios::binary);
  if (!in) usage("cannot open data file " + c.data.string());
  return parse_panel(in);
}

/// Selected (country, year) cells in sorted order; explicit selectors must
/// exist in the panel.
std::vector<CountryYear> select_cells(const Panel& panel, const RunConfig& c) {
  std::set<std::string> countries(c.countries.begin(), c.countries.end());
  std::set<int> years(c.years.begin(), c.years.end());
  for (const auto& country : countries) {
    if (panel_years(panel, country).empty()) {
      throw Error(ErrorCode::MissingCountryYear, "country " + country + " not in the panel");
    }
  }
  std::vector<CountryYear> out;
  for (const auto& [key, table] : panel) {
    if (!countries.empty() && !countries.count(key.country)) continue;
    if (!years.empty() && !years.count(key.year)) continue;
    out.push_back(key);
  }
  for (int y : years) {
    for (const auto& country : countries) {
      if (!panel.count({country, y})) {
        throw Error(ErrorCode::MissingCountryYear, "no table for " + country + "/" + std::to_string(y));
      }
    }
  }
  if (out.empty()) throw Error(ErrorCode::MissingCountryYear, "selection matches no table");
  return out;
}

const IOTable& single_cell(const Panel& panel, const RunConfig& c) {
  const auto cells = select_cells(panel, c);
  if (cells.size() != 1) {
    usage(c.command + " needs exactly one country-year (use --country and --year)");
  }
  return panel.at(cells.front());
}

std::string cell_name(const CountryYear& k) { return k.country + "_" + std::to_string(k.year); }

Vector sector_shock(const IOTable& t, const RunConfig& c) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(t.size()));
  if (c.sectors.empty()) {
    x.setConstant(c.shock_value);
    return x;
  }
  for (const auto& code : c.sectors) {
    auto k = t.sector_index(code);
    if (!k) usage("sector " + code + " not in " + to_string(t.key()));
    x(static_cast<Eigen::Index>(*k)) += c.shock_value;
  }
  return x;
}

ImpliedShockOptions implied_options(const RunConfig& c) {
  ImpliedShockOptions o;
  o.condition_cap = c.condition_cap;
  o.ridge = c.ridge;
  return o;
}

void require_same_sectors(const Panel& panel, const std::vector<CountryYear>& cells) {
  const auto& ref = panel.at(cells.front()).sectors;
  for (const auto& k : cells) {
    const auto& s = panel.at(k).sectors;
    if (s.size() != ref.size() ||
        !std::equal(s.begin(), s.end(), ref.begin(),
                    [](const SectorId& a, const SectorId& b) { return a.code == b.code; })) {
      throw Error(ErrorCode::MisalignedPanel,
                  to_string(k) + " has a different sector list than " + to_string(cells.front()));
    }
  }
}

// ------------------------------------------------------------------ ingest

void cmd_ingest(const RunConfig& c, OutputSet& outputs, std::ostream& log) {
  const Panel panel = load_panel(c);
  const auto cells = select_cells(panel, c);
  Panel selected;
  auto summary = outputs.open("summary.csv");
  summary << "country,year,sectors,spectral_radius,identity_residual,warnings\n";
  for (const auto& k : cells) {
    const IOTable& t = panel.at(k);
    selected.emplace(k, t);
    const Vector resid = t.output - (t.coefficients * t.output + t.demand);
    const double scale = std::max(t.output.lpNorm<Eigen::Infinity>(), 1e-300);
    summary << k.country << ',' << k.year << ',' << t.size() << ','
            << fmt(linalg::spectral_radius(t.coefficients)) << ','
            << fmt(resid.lpNorm<Eigen::Infinity>() / scale) << ',' << t.warnings.size() << '\n';
    for (const auto& w : t.warnings) log << "warning: " << to_string(k) << ": " << w << '\n';
  }
  auto out = outputs.open("panel.csv");
  serialize_panel(selected, out);
}

// ---------------------------------------------------------------- simulate

void cmd_simulate(const RunConfig& c, OutputSet& outputs, std::ostream&) {
  const Panel panel = load_panel(c);
  const IOTable& t = single_cell(panel, c);
  ShockProfile shock;
  if (!c.sectors.empty()) {
    const Vector x = sector_shock(t, c);
    shock = c.shock == "step" ? ShockProfile::step(x, 0.0) : ShockProfile::impulse(x, 0.0);
  }
  SimulationOptions o;
  o.dt = c.dt;
  o.horizon = c.horizon.value_or(10.0);
  if (std::isinf(o.horizon)) usage("simulate needs a finite horizon");
  o.burn_in = c.burn_in;
  o.seed = c.seed;
  const auto traj = simulate_trajectory(t, noise_covariance(c.noise, t), shock, o);
  auto out = outputs.open("trajectory.csv");
  write_trajectory(traj, out);
}

// ---------------------------------------------------------- susceptibility

SusceptibilityMatrix compute_rho(const IOTable& t, const RunConfig& c, double horizon) {
  if (c.method == "analytic") return susceptibility_analytic(t, horizon);
  if (std::isinf(horizon)) usage("montecarlo susceptibilities need a finite --horizon");
  MonteCarloOptions o;
  o.dt = c.dt;
  o.length = c.length;
  o.replicas = c.replicas;
  o.burn_in = c.burn_in;
  o.seed = derive_seed(c.seed, stable_hash(to_string(t.key())));
  o.workers = 1;  // parallelism is over cells
  o.standard_errors = c.replicas >= 2;
  return susceptibility_monte_carlo(t, noise_covariance(c.noise, t), horizon, o);
}

void cmd_susceptibility(const RunConfig& c, OutputSet& outputs, std::ostream& log) {
  const Panel panel = load_panel(c);
  const auto cells = select_cells(panel, c);
  require_same_sectors(panel, cells);
  const double horizon = c.horizon.value_or(kInfiniteHorizon);
  const auto convention =
      c.convention == "first" ? SumConvention::FirstIndex : SumConvention::SecondIndex;

  std::vector<SusceptibilityMatrix> rho(cells.size());
  parallel_for(cells.size(), c.workers,
               [&](std::size_t i) { rho[i] = compute_rho(panel.at(cells[i]), c, horizon); });

  std::vector<SectorSusceptibilityCell> sector_cells;
  std::set<std::string> countries;
  std::set<int> years;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const IOTable& t = panel.at(cells[i]);
    auto out = outputs.open("matrices/rho_" + cell_name(cells[i]) + ".csv");
    write_susceptibility_matrix(rho[i], t.sectors, out);
    sector_cells.push_back({t.country, t.year, sector_susceptibility(rho[i], convention), t.output});
    countries.insert(t.country);
    years.insert(t.year);
  }

  {
    auto out = outputs.open("sector_susceptibility.csv");
    out << "country,year,sector,value\n";
    for (const auto& cell : sector_cells) {
      const auto& sectors = panel.at({cell.country, cell.year}).sectors;
      for (std::size_t k = 0; k < sectors.size(); ++k) {
        out << cell.country << ',' << cell.year << ',' << sectors[k].code << ','
            << fmt(cell.sector(static_cast<Eigen::Index>(k))) << '\n';
      }
    }
  }

  // Aggregates need the full (country x year) rectangle.
  const std::vector<std::string> cs(countries.begin(), countries.end());
  const std::vector<int> ys(years.begin(), years.end());
  const auto agg = aggregate_susceptibilities(sector_cells, cs, ys);
  const auto& sectors = panel.at(cells.front()).sectors;
  {
    auto out = outputs.open("aggregates.csv");
    write_aggregates(agg, sectors, out);
  }
  {
    auto out = outputs.open("country_average.csv");
    out << "country,rho\n";
    for (const auto& [country, v] : agg.country_average) out << country << ',' << fmt(v) << '\n';
  }
  {
    std::vector<std::size_t> order(sectors.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return agg.weighted_sector[a].value > agg.weighted_sector[b].value;
    });
    auto out = outputs.open("ranking.csv");
    out << "rank,sector,name,group,rho,ci_low,ci_high\n";
    for (std::size_t r = 0; r < order.size(); ++r) {
      const auto& s = sectors[order[r]];
      const auto& w = agg.weighted_sector[order[r]];
      out << r + 1 << ',' << s.code << ",\"" << s.short_name << "\"," << s.group << ','
          << fmt(w.value) << ',' << fmt(w.ci_low) << ',' << fmt(w.ci_high) << '\n';
    }
  }

  if (ys.size() < 2) return;
  // Fluctuation regression: prediction from the first year against the mean
  // observed change over the selected years, pooled over countries and sectors.
  std::vector<double> pred, size, obs;
  auto rows = outputs.open("fluctuations.csv");
  rows << "country,sector,predicted,observed,size\n";
  for (const auto& country : cs) {
    const IOTable& t0 = panel.at({country, ys.front()});
    const Vector p = fluctuation_prediction(t0, 1.0, horizon);
    std::vector<Vector> series;
    for (int y : ys) series.push_back(panel.at({country, y}).output);
    const Vector o = mean_output_change(series, c.absolute_changes);
    for (std::size_t k = 0; k < t0.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      rows << country << ',' << t0.sectors[k].code << ',' << fmt(p(i)) << ',' << fmt(o(i)) << ','
           << fmt(t0.output(i)) << '\n';
      pred.push_back(p(i));
      obs.push_back(o(i));
      size.push_back(t0.output(i));
    }
  }
  auto as_vec = [](const std::vector<double>& v) {
    return Vector(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  try {
    const auto reg = fluctuation_regression(as_vec(pred), as_vec(size), as_vec(obs));
    auto out = outputs.open("fluctuation_regression.csv");
    out << "key,value\n"
        << "count," << reg.count << '\n'
        << "eta," << fmt(reg.eta) << '\n'
        << "r," << fmt(reg.r) << '\n'
        << "r_size," << fmt(reg.r_size) << '\n'
        << "r_control," << fmt(reg.r_control) << '\n'
        << "size_coefficient," << fmt(reg.size_coefficient) << '\n'
        << "size_coefficient_se," << fmt(reg.size_coefficient_se) << '\n';
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::Usage) throw;
    log << "warning: fluctuation regression skipped: " << e.what() << '\n';
  }
}

// ---------------------------------------------------------------- response

void cmd_response(const RunConfig& c, OutputSet& outputs, std::ostream&) {
  const Panel panel = load_panel(c);
  const IOTable& t = single_cell(panel, c);
  const Vector x = sector_shock(t, c);
  const double horizon = c.horizon.value_or(10.0);
  if (std::isinf(horizon)) usage("response curves need a finite --horizon");
  const auto grid = uniform_grid(horizon, c.step);
  ResponseCurve curve;
  if (c.method == "montecarlo") {
    if (c.shock != "impulse") usage("montecarlo response curves support impulse shocks only");
    ResponseMonteCarloOptions o;
    o.dt = c.dt;
    o.length = c.length;
    o.replicas = c.replicas;
    o.burn_in = c.burn_in;
    o.seed = c.seed;
    o.workers = c.workers;
    curve = impulse_response_monte_carlo(t, noise_covariance(c.noise, t), x, grid, o);
  } else {
    curve = c.shock == "step" ? step_response(t, x, grid) : impulse_response(t, x, grid);
  }
  {
    auto out = outputs.open("response.csv");
    write_curve(curve, t.sectors, out);
  }
  if (c.shock == "impulse") {
    const auto rec = recovery_time(curve, c.eps);
    auto out = outputs.open("recovery.csv");
    out << "sector,recovery_years\n";
    for (std::size_t k = 0; k < t.size(); ++k) out << t.sectors[k].code << ',' << fmt(rec[k]) << '\n';
  }
}

// ---------------------------------------------------------------- forecast

struct CountryForecasts {
  struct Row {
    int year;  // t
    LrtForecast forecast;
  };
  std::vector<Row> rows;
};

void cmd_forecast(const RunConfig& c, OutputSet& outputs, std::ostream&) {
  const Panel panel = load_panel(c);
  const auto cells = select_cells(panel, c);
  std::vector<std::string> countries;
  for (const auto& k : cells) {
    if (countries.empty() || countries.back() != k.country) countries.push_back(k.country);
  }
  std::set<CountryYear> selected(cells.begin(), cells.end());
  std::vector<CountryForecasts> results(countries.size());
  parallel_for(countries.size(), c.workers, [&](std::size_t i) {
    for (int t : panel_years(panel, countries[i])) {
      if (!selected.count({countries[i], t}) || !panel.count({countries[i], t + 1})) continue;
      const IOTable& now = panel.at({countries[i], t});
      results[i].rows.push_back(
          {t, lrt_forecast(now, now.output, panel.at({countries[i], t + 1}).output,
                           implied_options(c))});
    }
  });

  auto fc = outputs.open("forecast.csv");
  fc << "country,year,sector,observed,predicted\n";
  auto shocks = outputs.open("implied_shocks.csv");
  shocks << "country,year,sector,shock\n";
  auto diag = outputs.open("forecast_diagnostics.csv");
  diag << "country,year,condition,round_trip_error,one_year_error,ridge_used\n";
  for (std::size_t i = 0; i < countries.size(); ++i) {
    for (const auto& row : results[i].rows) {
      const IOTable& now = panel.at({countries[i], row.year});
      const Vector& next = panel.at({countries[i], row.year + 1}).output;
      auto later = panel.find({countries[i], row.year + 2});
      for (std::size_t k = 0; k < now.size(); ++k) {
        const auto j = static_cast<Eigen::Index>(k);
        fc << countries[i] << ',' << row.year + 2 << ',' << now.sectors[k].code << ','
           << (later != panel.end() ? fmt(later->second.output(j)) : std::string("nan")) << ','
           << fmt(row.forecast.two_year(j)) << '\n';
        shocks << countries[i] << ',' << row.year << ',' << now.sectors[k].code << ','
               << fmt(row.forecast.shock.shock(j)) << '\n';
      }
      const double one_year_error = (row.forecast.one_year - next).lpNorm<Eigen::Infinity>() /
                                    std::max(next.lpNorm<Eigen::Infinity>(), 1e-300);
      diag << countries[i] << ',' << row.year << ',' << fmt(row.forecast.shock.condition) << ','
           << fmt(row.forecast.shock.round_trip_error) << ',' << fmt(one_year_error) << ','
           << (row.forecast.shock.ridge_used ? 1 : 0) << '\n';
    }
  }
}

// --------------------------------------------------------------- benchmark

struct BaselineCells {
  std::vector<ForecastCell> cells;
  std::size_t skipped = 0;
};

std::vector<double> sector_series(const Panel& panel, const std::string& country,
                                  const std::vector<int>& years, std::size_t k) {
  std::vector<double> s;
  for (int y : years) s.push_back(panel.at({country, y}).output(static_cast<Eigen::Index>(k)));
  return s;
}

void cmd_benchmark(const RunConfig& c, OutputSet& outputs, std::ostream& log) {
  const Panel panel = load_panel(c);
  const auto cells = select_cells(panel, c);
  if (c.baselines.empty()) usage("benchmark needs at least one baseline");
  std::vector<std::string> countries;
  for (const auto& k : cells) {
    if (countries.empty() || countries.back() != k.country) countries.push_back(k.country);
  }
  const std::set<int> target_filter(c.years.begin(), c.years.end());

  // results[country][baseline]
  std::vector<std::vector<BaselineCells>> results(
      countries.size(), std::vector<BaselineCells>(c.baselines.size()));
  parallel_for(countries.size(), c.workers, [&](std::size_t ci) {
    const std::string& country = countries[ci];
    const auto years = panel_years(panel, country);
    std::optional<VarModel> var;
    for (std::size_t b = 0; b < c.baselines.size(); ++b) {
      if (c.baselines[b] != "var") continue;
      const int year = c.var_year == 0 ? years.front() : c.var_year;
      const IOTable& cal = panel_at(panel, country, year);
      var = fit_var1(cal, noise_covariance(c.noise, cal), c.var_samples,
                     derive_seed(c.seed, stable_hash(country)),
                     VarFitOptions{c.dt, c.burn_in, 1.0});
    }
    std::vector<std::optional<ArimaModel>> full_fits;
    for (std::size_t y = 0; y + 2 < years.size(); ++y) {
      const int t = years[y];
      if (years[y + 1] != t + 1 || years[y + 2] != t + 2) continue;
      if (!target_filter.empty() && !target_filter.count(t + 2)) continue;
      const IOTable& now = panel.at({country, t});
      const Vector& next = panel.at({country, t + 1}).output;
      const Vector& observed = panel.at({country, t + 2}).output;
      const auto lrt = lrt_forecast(now, now.output, next, implied_options(c));
      const Vector lrt_pred = c.perfect_lrt ? observed : lrt.two_year;
      const auto n = now.size();

      for (std::size_t b = 0; b < c.baselines.size(); ++b) {
        const auto& name = c.baselines[b];
        Vector base(static_cast<Eigen::Index>(n));
        if (name == "perturbed") {
          base = now.output + perturbed_io_forecast(now, lrt.shock.shock);
        } else if (name == "var") {
          base = var_forecast(*var, now.output, 2).back();
        } else {
          // ARIMA per sector, one step ahead from t+1.
          const std::vector<int> window(years.begin(), years.begin() + static_cast<long>(y) + 2);
          bool ok = true;
          for (std::size_t k = 0; k < n && ok; ++k) {
            const auto history = sector_series(panel, country, window, k);
            try {
              ArimaModel model;
              if (c.calibration == "full") {
                if (full_fits.size() < n) full_fits.resize(n);
                if (!full_fits[k]) {
                  full_fits[k] = fit_arima(sector_series(panel, country, years, k), c.arima_order);
                }
                model = *full_fits[k];
              } else {
                model = fit_arima(history, c.arima_order);
              }
              base(static_cast<Eigen::Index>(k)) = arima_forecast(model, history, 1).front();
            } catch (const Error& e) {
              if (e.code() != ErrorCode::TooShortSeries && e.code() != ErrorCode::NonConvergent) {
                throw;
              }
              ok = false;
            }
          }
          if (!ok) {
            ++results[ci][b].skipped;
            continue;
          }
        }
        results[ci][b].cells.push_back({country, t + 2, observed, lrt_pred, base, next});
      }
    }
  });

  auto summary = outputs.open("benchmark_summary.csv");
  summary << "baseline,cells,skipped_cells,mean_pg,ci_low,ci_high,p_value\n";
  for (std::size_t b = 0; b < c.baselines.size(); ++b) {
    const auto& name = c.baselines[b];
    std::vector<ForecastCell> all;
    std::size_t skipped = 0;
    for (const auto& per_country : results) {
      all.insert(all.end(), per_country[b].cells.begin(), per_country[b].cells.end());
      skipped += per_country[b].skipped;
    }
    if (all.empty()) {
      log << "warning: no evaluable cells for baseline " << name << '\n';
      summary << name << ",0," << skipped << ",nan,nan,nan,nan\n";
      continue;
    }
    const auto eval = evaluate_forecasts(all, c.target);
    {
      auto out = outputs.open("benchmark_" + name + ".csv");
      write_evaluation(eval, out);
    }
    {
      auto out = outputs.open("benchmark_" + name + "_histogram.csv");
      out << "bin_low,bin_high,count\n";
      for (std::size_t h = 0; h < eval.histogram.size(); ++h) {
        out << fmt(eval.histogram_edges[h]) << ',' << fmt(eval.histogram_edges[h + 1]) << ','
            << eval.histogram[h] << '\n';
      }
    }
    {
      auto out = outputs.open("predictions_" + name + ".csv");
      out << "country,year,sector,observed,lrt,baseline\n";
      for (const auto& cell : all) {
        const auto& sectors = panel.at({cell.country, cell.year}).sectors;
        for (std::size_t k = 0; k < sectors.size(); ++k) {
          const auto j = static_cast<Eigen::Index>(k);
          out << cell.country << ',' << cell.year << ',' << sectors[k].code << ','
              << fmt(cell.observed(j)) << ',' << fmt(cell.lrt(j)) << ',' << fmt(cell.baseline(j))
              << '\n';
        }
      }
    }
    const auto& p = eval.pooled;
    summary << name << ',' << eval.cells.size() << ',' << skipped + eval.skipped_cells << ','
            << fmt(p.mean_pg) << ',' << fmt(p.ci_low) << ',' << fmt(p.ci_high) << ','
            << (p.degenerate ? std::string("nan") : fmt(p.p_value)) << '\n';
  }
}

// ---------------------------------------------------------------- scenario

void cmd_scenario(const RunConfig& c, OutputSet& outputs, std::ostream&) {
  if (c.scenario.empty()) usage("scenario needs --scenario");
  std::ifstream in(c.scenario);
  if (!in) usage("cannot open scenario file " + c.scenario.string());
  ScenarioSpec spec = parse_scenario(in);
  if (c.horizon) spec.impact_horizon = *c.horizon;
  const Panel panel = load_panel(c);
  const auto result = run_scenario(spec, panel, c.workers);
  {
    auto out = outputs.open("scenario_impacts.csv");
    write_scenario_rows(result, out);
  }
  {
    auto out = outputs.open("scenario_aggregates.csv");
    write_scenario_aggregates(result, out);
  }
  if (c.countries.empty()) return;
  const auto shocks = build_shock_vectors(spec, panel);
  for (const auto& country : c.countries) {
    auto it = shocks.find(country);
    if (it == shocks.end()) continue;
    const IOTable& t = panel_at(panel, country, spec.year);
    const auto curve = scenario_response_curves(t, it->second, spec.horizon, c.step);
    auto out = outputs.open("scenario_curve_" + country + ".csv");
    write_curve(curve, t.sectors, out);
  }
}

// ---------------------------------------------------------------- backbone

void cmd_backbone(const RunConfig& c, OutputSet& outputs, std::ostream&) {
  if (c.format != "edgelist" && c.format != "graphml") {
    throw Error(ErrorCode::UnsupportedFormat, "unknown graph format '" + c.format + "'");
  }
  if (!(c.p > 0.0 && c.p < 1.0)) {
    throw Error(ErrorCode::InvalidP, "significance level must lie in (0, 1), got " + fmt(c.p));
  }
  const Panel panel = load_panel(c);
  const auto cells = select_cells(panel, c);
  const double horizon = c.horizon.value_or(kInfiniteHorizon);
  std::vector<BackboneGraph> graphs(cells.size());
  parallel_for(cells.size(), c.workers, [&](std::size_t i) {
    const IOTable& t = panel.at(cells[i]);
    const auto rho = compute_rho(t, c, horizon);
    graphs[i] = disparity_filter(rho.values, c.p, c.two_sided);
    set_node_attributes(graphs[i], t.sectors, sector_susceptibility(rho));
  });
  const std::string ext = c.format == "graphml" ? ".graphml" : ".csv";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto out = outputs.open("backbone_" + cell_name(cells[i]) + ext);
    export_graph(graphs[i], c.format, out);
  }
}

// ------------------------------------------------------------------- synth

void cmd_synth(const RunConfig& c, OutputSet& outputs, std::ostream&) {
  SyntheticPanelOptions o;
  o.countries = c.synth_countries;
  o.sectors = c.synth_sectors;
  o.first_year = c.synth_first_year;
  o.last_year = c.synth_last_year;
  o.seed = c.seed;
  auto out = outputs.open("panel.csv");
  serialize_panel(synthetic_panel(o), out);
}

}  // namespace

void run_command(const RunConfig& config, OutputSet& outputs, std::ostream& log) {
  const auto& cmd = config.command;
  if (cmd == "ingest") return cmd_ingest(config, outputs, log);
  if (cmd == "simulate") return cmd_simulate(config, outputs, log);
  if (cmd == "susceptibility") return cmd_susceptibility(config, outputs, log);
  if (cmd == "response") return cmd_response(config, outputs, log);
  if (cmd == "forecast") return cmd_forecast(config, outputs, log);
  if (cmd == "benchmark") return cmd_benchmark(config, outputs, log);
  if (cmd == "scenario") return cmd_scenario(config, outputs, log);
  if (cmd == "backbone") return cmd_backbone(config, outputs, log);
  if (cmd == "synth") return cmd_synth(config, outputs, log);
  usage("unknown command '" + cmd + "'");
}

}  // namespace lrt::cli
