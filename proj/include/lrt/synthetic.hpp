#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrt/iodata.hpp"
#include "lrt/types.hpp"

namespace lrt {

/// Random nonnegative N x N matrix with column sums drawn from
/// [min_col_sum, max_col_sum]; productive whenever max_col_sum < 1.
Matrix random_productive_matrix(std::size_t n, std::uint64_t seed, double min_col_sum = 0.2,
                                double max_col_sum = 0.7);

struct SyntheticPanelOptions {
  std::size_t countries = 4;
  std::size_t sectors = 5;
  int first_year = 2000;
  int last_year = 2014;
  std::uint64_t seed = 1;
  double growth = 0.03;      // mean log growth of final demand per year
  double volatility = 0.05;  // sd of the log growth per sector and year
  double export_share = 0.25;
};

/// Country codes used by the generator: USA, DEU, then further WIOD codes.
std::vector<std::string> synthetic_country_codes(std::size_t count);

/// Deterministic multi-country panel with destination-tagged final demand,
/// in the same shape parse_panel produces. Sector codes are the first
/// `sectors` WIOD codes (S01, S02, ... beyond 56).
Panel synthetic_panel(const SyntheticPanelOptions& options);

}  // namespace lrt
