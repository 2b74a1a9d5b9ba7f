#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lrt {

/// One row of the WIOD 2016 sector list (56 ISIC rev. 4 aggregates).
struct SectorInfo {
  std::string_view code;
  std::string_view short_name;
  std::string_view group;
};

std::span<const SectorInfo> wiod_sectors() noexcept;

/// Looks a code up in the WIOD list. Accepts the release's underscore
/// spelling ("C31_C32", "R_S") as well as the hyphenated one.
std::optional<SectorInfo> find_wiod_sector(std::string_view code) noexcept;

/// The sector-type vocabulary used for grouping ("Manufacturing", "Trade", ...).
std::span<const std::string_view> sector_groups() noexcept;

/// EU member states present in the WIOD 2016 release (EU-28).
std::span<const std::string_view> eu28_countries() noexcept;

}  // namespace lrt
