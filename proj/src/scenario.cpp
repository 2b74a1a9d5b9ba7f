#include "lrt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "lrt/error.hpp"
#include "lrt/linalg.hpp"
#include "lrt/parallel.hpp"
#include "lrt/sectors.hpp"
#include "lrt/susceptibility.hpp"
#include "lrt/textio.hpp"

namespace lrt {
namespace {

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::InvalidArgument,
              "line " + std::to_string(line) + ": expected a boolean, got '" + std::string(v) + "'");
}

double parse_number(std::string_view v, std::size_t line) {
  if (v == "inf" || v == "infinity") return kInfiniteHorizon;
  auto d = textio::parse_double(v);
  if (!d) {
    throw Error(ErrorCode::InvalidArgument,
                "line " + std::to_string(line) + ": expected a number, got '" + std::string(v) + "'");
  }
  return *d;
}

ScenarioShock parse_shock(std::string_view v, std::size_t line) {
  const auto f = textio::split(v);
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::InvalidArgument, "line " + std::to_string(line) + ": " + why);
  };
  if (f.size() < 4) throw bad("shock needs country,sector,type,...");
  ScenarioShock s;
  s.country = std::string(textio::trim(f[0]));
  s.sector = std::string(textio::trim(f[1]));
  const auto type = textio::trim(f[2]);
  if (type == "export_to") {
    if (f.size() != 5) throw bad("export_to shock needs country,sector,export_to,dest,fraction");
    s.kind = ScenarioShock::Kind::ExportTo;
    s.destination = std::string(textio::trim(f[3]));
    s.amount = parse_number(textio::trim(f[4]), line);
    if (!(s.amount >= -1.0 && s.amount <= 1.0)) throw bad("fraction must lie in [-1, 1]");
  } else if (type == "absolute") {
    if (f.size() != 4) throw bad("absolute shock needs country,sector,absolute,value");
    s.kind = ScenarioShock::Kind::Absolute;
    s.amount = parse_number(textio::trim(f[3]), line);
    if (!std::isfinite(s.amount)) throw bad("absolute shock must be finite");
  } else {
    throw bad("unknown shock type '" + std::string(type) + "'");
  }
  return s;
}

std::vector<std::string> expand_country(const std::string& c, const Panel& panel, int year) {
  if (c != "EU28" && c != "EU") return {c};
  std::vector<std::string> out;
  for (auto code : eu28_countries()) {
    if (panel.count({std::string(code), year})) out.emplace_back(code);
  }
  return out;
}

const IOTable& table_for(const Panel& panel, const std::string& country, int year) {
  auto it = panel.find({country, year});
  if (it == panel.end()) {
    throw Error(ErrorCode::MissingCountryYear, "no table for " + country + "/" + std::to_string(year));
  }
  return it->second;
}

std::size_t sector_of(const IOTable& t, const std::string& code) {
  auto k = t.sector_index(code);
  if (!k) {
    throw Error(ErrorCode::InvalidArgument,
                "sector " + code + " not present for " + to_string(t.key()));
  }
  return *k;
}

}  // namespace

ScenarioSpec parse_scenario(std::istream& in) {
  ScenarioSpec spec;
  std::string raw;
  std::size_t line = 0;
  bool have_year = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = textio::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line) + ": expected key = value");
    }
    const auto key = textio::trim(s.substr(0, eq));
    const auto value = textio::trim(s.substr(eq + 1));
    if (key == "name") {
      spec.name = std::string(value);
    } else if (key == "year") {
      auto y = textio::parse_int(value);
      if (!y) throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line) + ": bad year");
      spec.year = static_cast<int>(*y);
      have_year = true;
    } else if (key == "horizon") {
      spec.horizon = parse_number(value, line);
    } else if (key == "impact_horizon") {
      spec.impact_horizon = parse_number(value, line);
    } else if (key == "compensate") {
      spec.compensate = parse_bool(value, line);
    } else if (key == "shock") {
      spec.shocks.push_back(parse_shock(value, line));
    } else {
      throw Error(ErrorCode::InvalidArgument,
                  "line " + std::to_string(line) + ": unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_year) throw Error(ErrorCode::InvalidArgument, "scenario has no year");
  return spec;
}

std::map<std::string, Vector> build_shock_vectors(const ScenarioSpec& spec, const Panel& panel) {
  std::map<std::string, Vector> out;
  auto slot = [&](const IOTable& t) -> Vector& {
    auto [it, fresh] = out.try_emplace(t.country);
    if (fresh) it->second = Vector::Zero(static_cast<Eigen::Index>(t.size()));
    return it->second;
  };
  // Removed export demand per (destination, sector), compensated afterwards
  // so the order of shocks does not matter.
  std::map<std::pair<std::string, std::string>, std::vector<double>> removed;

  for (const auto& shock : spec.shocks) {
    for (const auto& country : expand_country(shock.country, panel, spec.year)) {
      const IOTable& t = table_for(panel, country, spec.year);
      const auto k = static_cast<Eigen::Index>(sector_of(t, shock.sector));
      if (shock.kind == ScenarioShock::Kind::Absolute) {
        slot(t)(k) += shock.amount;
        continue;
      }
      auto d = t.destination_index(shock.destination);
      if (!d || t.export_demand.cols() == 0) {
        throw Error(ErrorCode::MissingExportDetail,
                    "no final demand detail " + country + " -> " + shock.destination + " for " +
                        shock.sector + " in " + std::to_string(spec.year));
      }
      const double x = shock.amount * t.export_demand(k, static_cast<Eigen::Index>(*d));
      slot(t)(k) += x;
      removed[{shock.destination, shock.sector}].push_back(x);
    }
  }
  if (spec.compensate) {
    for (const auto& [key, parts] : removed) {
      const IOTable& t = table_for(panel, key.first, spec.year);
      const auto k = static_cast<Eigen::Index>(sector_of(t, key.second));
      slot(t)(k) -= linalg::compensated_sum(parts);
    }
  }
  return out;
}

ScenarioResult scenario_impact(const IOTable& table, const Vector& x, double horizon) {
  const auto n = static_cast<Eigen::Index>(table.size());
  if (x.size() != n) throw Error(ErrorCode::InvalidArgument, "shock vector has wrong length");
  Vector dy;
  if (std::isinf(horizon)) {
    dy = linalg::CheckedLu(Matrix::Identity(n, n) - table.coefficients).solve(x);
  } else {
    dy = susceptibility_analytic(table, horizon).values * x;
  }
  ScenarioResult r;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double y = table.output(k);
    r.rows.push_back({table.country, table.sectors[static_cast<std::size_t>(k)].code, dy(k),
                      y > 0.0 ? 100.0 * dy(k) / y : 0.0});
  }
  CountryImpact c;
  c.country = table.country;
  c.aggregate_usd = linalg::compensated_sum({dy.data(), static_cast<std::size_t>(n)});
  c.direct_usd = linalg::compensated_sum({x.data(), static_cast<std::size_t>(n)});
  const Vector indirect = dy - x;
  c.indirect_usd = linalg::compensated_sum({indirect.data(), static_cast<std::size_t>(n)});
  r.countries.push_back(c);
  return r;
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const Panel& panel, std::size_t workers) {
  const auto shocks = build_shock_vectors(spec, panel);
  std::vector<std::pair<std::string, const Vector*>> tasks;
  for (const auto& [c, x] : shocks) tasks.emplace_back(c, &x);
  std::vector<ScenarioResult> parts(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    parts[i] = scenario_impact(table_for(panel, tasks[i].first, spec.year), *tasks[i].second,
                               spec.impact_horizon);
  });
  ScenarioResult out;
  for (auto& p : parts) {
    out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
    out.countries.insert(out.countries.end(), p.countries.begin(), p.countries.end());
  }
  return out;
}

ResponseCurve scenario_response_curves(const IOTable& table, const Vector& x, double horizon,
                                       double step) {
  if (!(horizon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be >= 0");
  return step_response(table, x, horizon == 0.0 ? std::vector<double>{0.0}
                                                : uniform_grid(horizon, step));
}

void write_scenario_rows(const ScenarioResult& result, std::ostream& out) {
  out << "country,sector,delta_usd,delta_pct\n";
  for (const auto& r : result.rows) {
    out << r.country << ',' << r.sector << ',' << textio::fmt(r.delta_usd) << ','
        << textio::fmt(r.delta_pct) << '\n';
  }
}

void write_scenario_aggregates(const ScenarioResult& result, std::ostream& out) {
  out << "country,aggregate_usd,direct_usd,indirect_usd\n";
  for (const auto& c : result.countries) {
    out << c.country << ',' << textio::fmt(c.aggregate_usd) << ',' << textio::fmt(c.direct_usd)
        << ',' << textio::fmt(c.indirect_usd) << '\n';
  }
}

}  // namespace lrt
