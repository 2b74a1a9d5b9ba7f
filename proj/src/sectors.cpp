#include "lrt/sectors.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace lrt {
namespace {

constexpr std::array<SectorInfo, 56> kSectors{{
    {"A01", "Agriculture", "Agriculture"},
    {"A02", "Forestry", "Agriculture"},
    {"A03", "Fishing", "Agriculture"},
    {"B", "Mining", "Mining"},
    {"C10-C12", "Food", "Manufacturing"},
    {"C13-C15", "Textiles", "Manufacturing"},
    {"C16", "Wood", "Manufacturing"},
    {"C17", "Paper", "Manufacturing"},
    {"C18", "Printing", "Manufacturing"},
    {"C19", "Coke", "Manufacturing"},
    {"C20", "Chemicals", "Manufacturing"},
    {"C21", "Pharmaceuticals", "Manufacturing"},
    {"C22", "Rubber", "Manufacturing"},
    {"C23", "Mineral products", "Manufacturing"},
    {"C24", "Metals", "Manufacturing"},
    {"C25", "Metal products", "Manufacturing"},
    {"C26", "Computer", "Manufacturing"},
    {"C27", "Electricals", "Manufacturing"},
    {"C28", "Machinery", "Manufacturing"},
    {"C29", "Motor vehicles", "Manufacturing"},
    {"C30", "Transport equ.", "Manufacturing"},
    {"C31-C32", "Furniture", "Manufacturing"},
    {"C33", "Repair", "Manufacturing"},
    {"D35", "Electricity", "Electricity & Water"},
    {"E36", "Water", "Electricity & Water"},
    {"E37-E39", "Waste", "Electricity & Water"},
    {"F", "Construction", "Construction"},
    {"G45", "Car trade", "Trade"},
    {"G46", "Wholesale trade", "Trade"},
    {"G47", "Retail trade", "Trade"},
    {"H49", "Land transport", "Transport"},
    {"H50", "Water transport", "Transport"},
    {"H51", "Air transport", "Transport"},
    {"H52", "Warehousing", "Transport"},
    {"H53", "Post", "Transport"},
    {"I", "Accommodation", "Accommodation"},
    {"J58", "Publishing", "Inform. & Comm."},
    {"J59-J60", "Entertainment", "Inform. & Comm."},
    {"J61", "Telecommunication", "Inform. & Comm."},
    {"J62-J63", "Computer programming", "Inform. & Comm."},
    {"K64", "Financial services", "Finance"},
    {"K65", "Insurance", "Finance"},
    {"K66", "Auxiliary financial serv.", "Finance"},
    {"L68", "Real estate", "Other"},
    {"M69-M70", "Legal activities", "Other"},
    {"M71", "Architecture", "Other"},
    {"M72", "Research", "Research"},
    {"M73", "Advertising", "Research"},
    {"M74-M75", "Other technical activities", "Research"},
    {"N", "Administration", "Administration"},
    {"O84", "Public administration", "Administration"},
    {"P85", "Education", "Other"},
    {"Q", "Health", "Other"},
    {"R-S", "Other services", "Other"},
    {"T", "Household activities", "Other"},
    {"U", "Extraterrestrial org.", "Other"},
}};

constexpr std::array<std::string_view, 13> kGroups{
    "Agriculture", "Mining",        "Manufacturing",   "Electricity & Water",
    "Construction", "Trade",        "Transport",       "Accommodation",
    "Inform. & Comm.", "Finance",   "Research",        "Administration",
    "Other"};

constexpr std::array<std::string_view, 28> kEu28{
    "AUT", "BEL", "BGR", "CYP", "CZE", "DEU", "DNK", "ESP", "EST", "FIN",
    "FRA", "GBR", "GRC", "HRV", "HUN", "IRL", "ITA", "LTU", "LUX", "LVA",
    "MLT", "NLD", "POL", "PRT", "ROU", "SVK", "SVN", "SWE"};

// "C31_C32" -> "C31-C32", "R_S" -> "R-S"
std::string canonical(std::string_view code) {
  std::string out(code);
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

}  // namespace

std::span<const SectorInfo> wiod_sectors() noexcept { return kSectors; }

std::optional<SectorInfo> find_wiod_sector(std::string_view code) noexcept {
  const std::string key = canonical(code);
  for (const auto& s : kSectors) {
    if (s.code == key) return s;
  }
  return std::nullopt;
}

std::span<const std::string_view> sector_groups() noexcept { return kGroups; }

std::span<const std::string_view> eu28_countries() noexcept { return kEu28; }

}  // namespace lrt
