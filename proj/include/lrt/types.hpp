#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <string>

namespace lrt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// ISO-3 country code plus data year; the key of every panel cell.
struct CountryYear {
  std::string country;
  int year = 0;

  auto operator<=>(const CountryYear&) const = default;
};

inline std::string to_string(const CountryYear& key) {
  return key.country + "/" + std::to_string(key.year);
}

}  // namespace lrt
