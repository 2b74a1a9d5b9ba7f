#include "lrt/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "lrt/error.hpp"
#include "lrt/rng.hpp"
#include "lrt/sectors.hpp"

namespace lrt {
namespace {

constexpr std::string_view kCountries[] = {"USA", "DEU", "FRA", "ITA", "ESP", "NLD", "POL",
                                           "GBR", "AUT", "BEL", "CHN", "JPN", "KOR", "BRA",
                                           "IND", "CAN", "MEX", "AUS", "SWE", "IRL"};

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Matrix random_productive_matrix(std::size_t n, std::uint64_t seed, double min_col_sum,
                                double max_col_sum) {
  if (!(min_col_sum >= 0.0 && min_col_sum <= max_col_sum && max_col_sum < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "column sums must satisfy 0 <= min <= max < 1");
  }
  Uniform u(seed);
  const auto size = static_cast<Eigen::Index>(n);
  Matrix a(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < size; ++i) {
      // Sparse-ish: a quarter of the entries are tiny.
      a(i, j) = u() < 0.25 ? 0.01 * u() : u();
      total += a(i, j);
    }
    a.col(j) *= u(min_col_sum, max_col_sum) / total;
  }
  return a;
}

std::vector<std::string> synthetic_country_codes(std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < count; ++c) {
    if (c < std::size(kCountries)) {
      out.emplace_back(kCountries[c]);
    } else {
      out.push_back((c < 10 ? "X0" : "X") + std::to_string(c));
    }
  }
  return out;
}

Panel synthetic_panel(const SyntheticPanelOptions& options) {
  if (options.countries == 0 || options.sectors == 0 || options.last_year < options.first_year) {
    throw Error(ErrorCode::InvalidArgument, "synthetic panel needs countries, sectors and years");
  }
  const auto n = static_cast<Eigen::Index>(options.sectors);
  const auto countries = synthetic_country_codes(options.countries);
  std::vector<std::string> codes;
  for (std::size_t k = 0; k < options.sectors; ++k) {
    const auto wiod = wiod_sectors();
    if (k < wiod.size()) {
      codes.emplace_back(wiod[k].code);
    } else {
      char buf[8];
      std::snprintf(buf, sizeof buf, "S%02zu", k + 1);
      codes.emplace_back(buf);
    }
  }

  Panel panel;
  for (std::size_t c = 0; c < countries.size(); ++c) {
    const std::uint64_t base = derive_seed(options.seed, stable_hash(countries[c]));
    const Matrix a0 = random_productive_matrix(options.sectors, derive_seed(base, 0), 0.2, 0.6);
    Uniform u(derive_seed(base, 1));
    GaussianStream g(derive_seed(base, 2));

    Vector demand(n);
    for (Eigen::Index k = 0; k < n; ++k) demand(k) = u(50.0, 1000.0);
    // Destination shares of each sector's final demand; fixed over time.
    Matrix shares(n, static_cast<Eigen::Index>(countries.size()));
    for (Eigen::Index k = 0; k < n; ++k) {
      double exports = 0.0;
      for (std::size_t d = 0; d < countries.size(); ++d) {
        const double w = d == c ? 0.0 : u();
        shares(k, static_cast<Eigen::Index>(d)) = w;
        exports += w;
      }
      const double export_share = countries.size() > 1 ? options.export_share * u(0.5, 1.5) : 0.0;
      if (exports > 0.0) shares.row(k) *= export_share / exports;
      shares(k, static_cast<Eigen::Index>(c)) = 1.0 - export_share;
    }

    for (int year = options.first_year; year <= options.last_year; ++year) {
      if (year > options.first_year) {
        for (Eigen::Index k = 0; k < n; ++k) {
          demand(k) *= std::exp(options.growth + options.volatility * g.next());
        }
      }
      Matrix a = a0;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) a(i, j) *= std::exp(0.02 * g.next());
        const double s = a.col(j).sum();
        if (s > 0.9) a.col(j) *= 0.9 / s;
      }
      const Vector y = (Matrix::Identity(n, n) - a).partialPivLu().solve(demand);
      const Matrix z = a * y.asDiagonal();
      FinalDemandByDestination finals;
      for (std::size_t d = 0; d < countries.size(); ++d) {
        finals.emplace(countries[d],
                       (shares.col(static_cast<Eigen::Index>(d)).array() * demand.array()).matrix());
      }
      panel.emplace(CountryYear{countries[c], year},
                    build_io_table(countries[c], year, codes, z, y, finals));
    }
  }
  return panel;
}

}  // namespace lrt
