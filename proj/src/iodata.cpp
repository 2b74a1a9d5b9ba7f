#include "lrt/iodata.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>

#include "lrt/error.hpp"
#include "lrt/linalg.hpp"
#include "lrt/sectors.hpp"
#include "lrt/textio.hpp"

namespace lrt {
namespace {

constexpr std::string_view kHeader = "record_type,country,year,row_sector,col_sector_or_dest,value";

struct RawCell {
  std::vector<std::string> codes;
  std::unordered_map<std::string, std::size_t> index;
  struct Flow {
    std::size_t row, col;
    double value;
  };
  std::vector<Flow> flows;
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> finals;
  std::unordered_map<std::size_t, double> outputs;

  std::size_t intern(std::string_view code) {
    auto it = index.find(std::string(code));
    if (it != index.end()) return it->second;
    const std::size_t id = codes.size();
    codes.emplace_back(code);
    index.emplace(codes.back(), id);
    return id;
  }
};

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + what);
}

IOTable assemble(const CountryYear& key, RawCell&& raw) {
  const auto n = static_cast<Eigen::Index>(raw.codes.size());
  Matrix z = Matrix::Zero(n, n);
  for (const auto& f : raw.flows) {
    z(static_cast<Eigen::Index>(f.row), static_cast<Eigen::Index>(f.col)) += f.value;
  }
  Vector y = Vector::Zero(n);
  for (std::size_t i = 0; i < raw.codes.size(); ++i) {
    auto it = raw.outputs.find(i);
    if (it == raw.outputs.end()) {
      throw Error(ErrorCode::MalformedRow, to_string(key) + ": sector " + raw.codes[i] +
                                               " has no OUTPUT record");
    }
    y(static_cast<Eigen::Index>(i)) = it->second;
  }
  FinalDemandByDestination finals;
  for (auto& [dest, entries] : raw.finals) {
    Vector v = Vector::Zero(n);
    for (const auto& [i, value] : entries) v(static_cast<Eigen::Index>(i)) += value;
    finals.emplace(dest, std::move(v));
  }
  return build_io_table(key.country, key.year, std::move(raw.codes), std::move(z),
                        std::move(y), finals);
}

}  // namespace

std::optional<std::size_t> IOTable::sector_index(std::string_view code) const {
  for (const auto& s : sectors) {
    if (s.code == code) return s.index;
  }
  // Fall back to the WIOD spelling variants.
  if (auto info = find_wiod_sector(code)) {
    for (const auto& s : sectors) {
      auto other = find_wiod_sector(s.code);
      if (other && other->code == info->code) return s.index;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> IOTable::destination_index(std::string_view dest) const {
  auto it = std::find(destinations.begin(), destinations.end(), dest);
  if (it == destinations.end()) return std::nullopt;
  return static_cast<std::size_t>(it - destinations.begin());
}

Matrix IOTable::drift() const {
  const auto n = static_cast<Eigen::Index>(size());
  return coefficients - Matrix::Identity(n, n);
}

IOTable build_io_table(std::string country, int year, std::vector<std::string> codes,
                       Matrix flows, Vector output,
                       const FinalDemandByDestination& final_demand) {
  const auto n = static_cast<Eigen::Index>(codes.size());
  const std::string where = country + "/" + std::to_string(year);
  if (n == 0) throw Error(ErrorCode::MalformedRow, where + ": table has no sectors");
  if (flows.rows() != n || flows.cols() != n || output.size() != n) {
    throw Error(ErrorCode::InvalidArgument, where + ": flow/output dimensions do not match sectors");
  }
  {
    std::set<std::string> seen(codes.begin(), codes.end());
    if (seen.size() != codes.size()) {
      throw Error(ErrorCode::MalformedRow, where + ": duplicate sector codes");
    }
  }

  IOTable t;
  t.country = std::move(country);
  t.year = year;
  t.sectors.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    SectorId s;
    s.code = codes[i];
    s.index = i;
    if (auto info = find_wiod_sector(codes[i])) {
      s.short_name = std::string(info->short_name);
      s.group = std::string(info->group);
    } else {
      s.short_name = codes[i];
      s.group = "Other";
    }
    t.sectors.push_back(std::move(s));
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(output(i)) || output(i) < 0.0) {
      throw Error(ErrorCode::MalformedRow,
                  where + ": sector " + codes[static_cast<std::size_t>(i)] + " has negative output");
    }
  }
  if (!flows.allFinite() || flows.minCoeff() < 0.0) {
    throw Error(ErrorCode::MalformedRow, where + ": negative or non-finite intermediate flow");
  }

  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (output(j) > 0.0) {
      a.col(j) = flows.col(j) / output(j);
    } else if (flows.col(j).cwiseAbs().maxCoeff() > 0.0) {
      throw Error(ErrorCode::ZeroOutputSector,
                  where + ": sector " + codes[static_cast<std::size_t>(j)] +
                      " has zero output but nonzero input flows");
    }
  }
  const double radius = linalg::spectral_radius(a);
  if (!(radius < 1.0)) {
    throw Error(ErrorCode::NonProductiveEconomy,
                where + ": spectral radius of A is " + textio::fmt(radius));
  }

  t.flows = std::move(flows);
  t.output = std::move(output);
  t.coefficients = std::move(a);
  t.demand = t.output - t.coefficients * t.output;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (t.demand(i) < 0.0) {
      t.warnings.push_back(where + ": negative residual demand " + textio::fmt(t.demand(i)) +
                           " in sector " + codes[static_cast<std::size_t>(i)]);
    }
  }

  t.domestic_final = Vector::Zero(n);
  for (const auto& [dest, v] : final_demand) {
    if (v.size() != n) {
      throw Error(ErrorCode::InvalidArgument, where + ": final demand vector has wrong length");
    }
    if (dest == t.country) {
      t.domestic_final += v;
    } else {
      t.destinations.push_back(dest);
    }
  }
  t.export_demand = Matrix::Zero(n, static_cast<Eigen::Index>(t.destinations.size()));
  for (std::size_t c = 0; c < t.destinations.size(); ++c) {
    t.export_demand.col(static_cast<Eigen::Index>(c)) = final_demand.at(t.destinations[c]);
  }

  if (!final_demand.empty()) {
    const Vector total = t.domestic_final + t.export_demand.rowwise().sum();
    const double scale = std::max(t.output.cwiseAbs().maxCoeff(), 1e-300);
    const double gap = (total - t.demand).cwiseAbs().maxCoeff() / scale;
    if (gap > 1e-9) {
      t.warnings.push_back(where + ": recorded final demand differs from residual demand by " +
                           textio::fmt(gap) + " (relative to max output)");
    }
  }
  return t;
}

Panel parse_panel(std::istream& in) {
  std::map<CountryYear, RawCell> cells;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = textio::trim(view);
    if (view.empty()) continue;
    if (!header_seen) {
      if (view != kHeader) malformed(line_no, "expected header '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = textio::split(view);
    if (fields.size() != 6) {
      malformed(line_no, "expected 6 fields, found " + std::to_string(fields.size()));
    }
    const auto year = textio::parse_int(fields[2]);
    if (!year) malformed(line_no, "invalid year '" + std::string(fields[2]) + "'");
    const auto value = textio::parse_double(fields[5]);
    if (!value || !std::isfinite(*value)) {
      malformed(line_no, "invalid value '" + std::string(fields[5]) + "'");
    }
    if (fields[1].empty() || fields[3].empty()) malformed(line_no, "empty country or sector");

    RawCell& cell = cells[CountryYear{std::string(fields[1]), static_cast<int>(*year)}];
    const std::string_view kind = fields[0];
    if (kind == "FLOW") {
      if (fields[4].empty()) malformed(line_no, "FLOW without column sector");
      const std::size_t r = cell.intern(fields[3]);
      const std::size_t c = cell.intern(fields[4]);
      cell.flows.push_back({r, c, *value});
    } else if (kind == "FINAL") {
      if (fields[4].empty()) malformed(line_no, "FINAL without destination country");
      const std::size_t r = cell.intern(fields[3]);
      cell.finals[std::string(fields[4])].emplace_back(r, *value);
    } else if (kind == "OUTPUT") {
      if (!fields[4].empty()) malformed(line_no, "OUTPUT must have an empty column field");
      const std::size_t r = cell.intern(fields[3]);
      if (!cell.outputs.emplace(r, *value).second) {
        malformed(line_no, "duplicate OUTPUT for sector " + std::string(fields[3]));
      }
    } else {
      malformed(line_no, "unknown record type '" + std::string(kind) + "'");
    }
  }
  if (!header_seen) throw Error(ErrorCode::MalformedRow, "line 1: missing header row");

  Panel panel;
  for (auto& [key, raw] : cells) panel.emplace(key, assemble(key, std::move(raw)));
  return panel;
}

IOTable parse_io_table(std::istream& in, const std::string& country, int year) {
  Panel panel = parse_panel(in);
  auto it = panel.find(CountryYear{country, year});
  if (it == panel.end()) {
    throw Error(ErrorCode::MissingCountryYear,
                country + "/" + std::to_string(year) + " not present in input");
  }
  return std::move(it->second);
}

void serialize_io_table(const IOTable& t, std::ostream& out, bool header) {
  if (header) out << kHeader << '\n';
  const std::string prefix = "," + t.country + "," + std::to_string(t.year) + ",";
  const auto n = static_cast<Eigen::Index>(t.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out << "OUTPUT" << prefix << t.sectors[static_cast<std::size_t>(i)].code << ",,"
        << textio::fmt(t.output(i)) << '\n';
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (t.flows(i, j) == 0.0) continue;
      out << "FLOW" << prefix << t.sectors[static_cast<std::size_t>(i)].code << ','
          << t.sectors[static_cast<std::size_t>(j)].code << ',' << textio::fmt(t.flows(i, j))
          << '\n';
    }
  }
  auto write_final = [&](const std::string& dest, const Eigen::Ref<const Vector>& v) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v(i) == 0.0) continue;
      out << "FINAL" << prefix << t.sectors[static_cast<std::size_t>(i)].code << ',' << dest
          << ',' << textio::fmt(v(i)) << '\n';
    }
  };
  write_final(t.country, t.domestic_final);
  for (std::size_t c = 0; c < t.destinations.size(); ++c) {
    write_final(t.destinations[c], t.export_demand.col(static_cast<Eigen::Index>(c)));
  }
}

void serialize_panel(const Panel& panel, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& [key, table] : panel) serialize_io_table(table, out, false);
}

std::vector<std::string> panel_countries(const Panel& panel) {
  std::vector<std::string> out;
  for (const auto& [key, table] : panel) {
    if (out.empty() || out.back() != key.country) out.push_back(key.country);
  }
  return out;
}

std::vector<int> panel_years(const Panel& panel, const std::string& country) {
  std::vector<int> out;
  for (auto it = panel.lower_bound(CountryYear{country, INT32_MIN});
       it != panel.end() && it->first.country == country; ++it) {
    out.push_back(it->first.year);
  }
  return out;
}

const IOTable& panel_at(const Panel& panel, const std::string& country, int year) {
  auto it = panel.find(CountryYear{country, year});
  if (it == panel.end()) {
    throw Error(ErrorCode::MissingCountryYear,
                country + "/" + std::to_string(year) + " not present in panel");
  }
  return it->second;
}

Matrix noise_covariance(const NoiseSpec& spec, const IOTable& table) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
    throw Error(ErrorCode::NonPositiveScale,
                "noise scale must be positive, got " + textio::fmt(spec.scale));
  }
  const auto n = static_cast<Eigen::Index>(table.size());
  if (spec.kind == NoiseSpec::Kind::Isotropic) {
    return Matrix::Identity(n, n) * (spec.scale * spec.scale);
  }
  const Vector sd = spec.scale * table.output;
  return sd.cwiseProduct(sd).asDiagonal();
}

}  // namespace lrt
