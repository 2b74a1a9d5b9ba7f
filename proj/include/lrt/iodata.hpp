#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrt/types.hpp"

namespace lrt {

struct SectorId {
  std::string code;
  std::size_t index = 0;
  std::string short_name;
  std::string group;
};

/// A national input-output table for one country and year.
///
/// Flows and outputs are in millions USD. `coefficients` is A with
/// A_ij = Z_ij / Y_j; `demand` is the residual D = (I - A) Y, so the
/// accounting identity Y = A Y + D holds to rounding. Final demand by
/// destination is kept for scenario construction: `domestic_final` is the
/// part consumed in `country`, `export_demand` (N x destinations) the rest.
struct IOTable {
  std::string country;
  int year = 0;
  std::vector<SectorId> sectors;
  Matrix flows;
  Vector output;
  Matrix coefficients;
  Vector demand;
  Vector domestic_final;
  std::vector<std::string> destinations;
  Matrix export_demand;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return sectors.size(); }
  CountryYear key() const { return {country, year}; }
  std::optional<std::size_t> sector_index(std::string_view code) const;
  std::optional<std::size_t> destination_index(std::string_view dest) const;
  /// A - I, the relaxation matrix of the output dynamics.
  Matrix drift() const;
};

/// Final-demand entries of one sector, keyed by destination country.
using FinalDemandByDestination = std::map<std::string, Vector>;

/// Assembles and validates a table from raw flows. Throws ZeroOutputSector,
/// NonProductiveEconomy or MalformedRow (negative flows or outputs).
IOTable build_io_table(std::string country, int year, std::vector<std::string> codes,
                       Matrix flows, Vector output,
                       const FinalDemandByDestination& final_demand);

using Panel = std::map<CountryYear, IOTable>;

/// Parses the canonical long format
///   record_type,country,year,row_sector,col_sector_or_dest,value
/// into one table per country-year present in the stream.
Panel parse_panel(std::istream& in);

/// Parses and returns a single country-year; MissingCountryYear if absent.
IOTable parse_io_table(std::istream& in, const std::string& country, int year);

void serialize_io_table(const IOTable& table, std::ostream& out, bool header = true);
void serialize_panel(const Panel& panel, std::ostream& out);

/// Countries in a panel (sorted) and the years available for one country.
std::vector<std::string> panel_countries(const Panel& panel);
std::vector<int> panel_years(const Panel& panel, const std::string& country);
const IOTable& panel_at(const Panel& panel, const std::string& country, int year);

struct NoiseSpec {
  enum class Kind { Isotropic, OutputProportional };
  Kind kind = Kind::OutputProportional;
  double scale = 0.01;

  static NoiseSpec isotropic(double epsilon) { return {Kind::Isotropic, epsilon}; }
  static NoiseSpec output_proportional(double eta) {
    return {Kind::OutputProportional, eta};
  }
};

/// Covariance nu of the equilibrium driving noise: eps^2 I for isotropic
/// noise, diag((eta Y_i)^2) for output-proportional noise.
Matrix noise_covariance(const NoiseSpec& spec, const IOTable& table);

}  // namespace lrt
