#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lrt/iodata.hpp"
#include "lrt/response.hpp"
#include "lrt/types.hpp"

namespace lrt {

struct ScenarioShock {
  enum class Kind { ExportTo, Absolute };

  std::string country;
  std::string sector;
  Kind kind = Kind::ExportTo;
  std::string destination;  // ExportTo only
  double amount = 0.0;      // fraction for ExportTo, millions USD for Absolute
};

/// Demand-shock scenario. Key-value text, one `key = value` per line, `#`
/// comments:
///
///   name = us-steel
///   year = 2014
///   horizon = 20             # response-curve horizon, years
///   impact_horizon = inf     # truncation of rho for impacts
///   compensate = true        # destination absorbs removed export demand
///   shock = EU28,C24,export_to,USA,-1
///   shock = USA,C24,absolute,250
///
/// The country field accepts `EU28` for all EU member states in the panel.
struct ScenarioSpec {
  std::string name = "scenario";
  int year = 0;
  double horizon = 20.0;
  double impact_horizon = kInfiniteHorizon;
  bool compensate = true;
  std::vector<ScenarioShock> shocks;
};

ScenarioSpec parse_scenario(std::istream& in);

/// Shock vector per country (sorted). Export shocks are f * export demand;
/// with compensation the destination receives minus the summed shock on the
/// same sector. Throws MissingExportDetail, MissingCountryYear.
std::map<std::string, Vector> build_shock_vectors(const ScenarioSpec& spec, const Panel& panel);

struct ScenarioRow {
  std::string country;
  std::string sector;
  double delta_usd = 0.0;
  double delta_pct = 0.0;
};

struct CountryImpact {
  std::string country;
  double aggregate_usd = 0.0;
  double direct_usd = 0.0;    // sum of the shock itself
  double indirect_usd = 0.0;  // aggregate minus direct
};

struct ScenarioResult {
  std::vector<ScenarioRow> rows;
  std::vector<CountryImpact> countries;
};

/// dY = rho(horizon) X for one table.
ScenarioResult scenario_impact(const IOTable& table, const Vector& x,
                               double horizon = kInfiniteHorizon);

/// Impacts for every shocked country, merged in sorted country order.
ScenarioResult run_scenario(const ScenarioSpec& spec, const Panel& panel,
                            std::size_t workers = 1);

/// Step response of the scenario shock on 0, step, ..., horizon.
ResponseCurve scenario_response_curves(const IOTable& table, const Vector& x, double horizon,
                                       double step = 0.1);

void write_scenario_rows(const ScenarioResult& result, std::ostream& out);
void write_scenario_aggregates(const ScenarioResult& result, std::ostream& out);

}  // namespace lrt
