#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "lrt/baselines.hpp"
#include "lrt/error.hpp"
#include "lrt/stats.hpp"
#include "lrt/textio.hpp"

namespace lrt {
namespace {

constexpr std::size_t kHistogramBins = 40;

PgSummary summarize(int year, const std::vector<double>& pg) {
  PgSummary s;
  s.year = year;
  s.n = pg.size();
  s.mean_pg = stats::mean(pg);
  try {
    const auto t = stats::one_sample_t_test(pg);
    s.ci_low = t.ci_low;
    s.ci_high = t.ci_high;
    s.p_value = t.p_value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateInput) throw;
    s.degenerate = true;
    s.ci_low = s.ci_high = s.mean_pg;
    s.p_value = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

}  // namespace

ForecastEvaluation evaluate_forecasts(const std::vector<ForecastCell>& cells,
                                      EvaluationTarget target) {
  std::map<CountryYear, const ForecastCell*> ordered;
  for (const auto& c : cells) {
    const auto n = c.observed.size();
    if (c.lrt.size() != n || c.baseline.size() != n ||
        (target == EvaluationTarget::Changes && c.reference.size() != n)) {
      throw Error(ErrorCode::MisalignedPanel,
                  "prediction vectors for " + c.country + "/" + std::to_string(c.year) +
                      " do not align with observations");
    }
    if (!ordered.emplace(CountryYear{c.country, c.year}, &c).second) {
      throw Error(ErrorCode::MisalignedPanel,
                  "duplicate cell " + c.country + "/" + std::to_string(c.year));
    }
  }

  ForecastEvaluation eval;
  std::map<int, std::vector<double>> by_year;
  std::vector<double> pooled;
  for (const auto& [key, cell] : ordered) {
    Vector obs = cell->observed, lrt = cell->lrt, base = cell->baseline;
    if (target == EvaluationTarget::Changes) {
      obs -= cell->reference;
      lrt -= cell->reference;
      base -= cell->reference;
    }
    const auto n = static_cast<std::size_t>(obs.size());
    CellEvaluation ce;
    ce.country = key.country;
    ce.year = key.year;
    try {
      ce.r_lrt = stats::pearson_r({obs.data(), n}, {lrt.data(), n});
      ce.r_baseline = stats::pearson_r({obs.data(), n}, {base.data(), n});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateInput && e.code() != ErrorCode::InvalidArgument) throw;
      ++eval.skipped_cells;
      continue;
    }
    ce.pg = ce.r_lrt - ce.r_baseline;
    by_year[ce.year].push_back(ce.pg);
    pooled.push_back(ce.pg);
    eval.cells.push_back(ce);
  }
  for (const auto& [year, pg] : by_year) eval.years.push_back(summarize(year, pg));
  eval.pooled = summarize(0, pooled);

  eval.histogram_edges.resize(kHistogramBins + 1);
  for (std::size_t b = 0; b <= kHistogramBins; ++b) {
    eval.histogram_edges[b] = -2.0 + 4.0 * static_cast<double>(b) / kHistogramBins;
  }
  eval.histogram.assign(kHistogramBins, 0);
  for (double v : pooled) {
    auto b = static_cast<std::size_t>(std::floor((v + 2.0) / 4.0 * kHistogramBins));
    eval.histogram[std::min(b, kHistogramBins - 1)]++;
  }
  return eval;
}

void write_evaluation(const ForecastEvaluation& eval, std::ostream& out) {
  out << "country,year,r_lrt,r_baseline,pg\n";
  for (const auto& c : eval.cells) {
    out << c.country << ',' << c.year << ',' << textio::fmt(c.r_lrt) << ','
        << textio::fmt(c.r_baseline) << ',' << textio::fmt(c.pg) << '\n';
  }
  out << '\n' << "year,mean_pg,ci_low,ci_high,p_value\n";
  auto line = [&](const std::string& label, const PgSummary& s) {
    out << label << ',' << textio::fmt(s.mean_pg) << ',' << textio::fmt(s.ci_low) << ','
        << textio::fmt(s.ci_high) << ',' << (s.degenerate ? "nan" : textio::fmt(s.p_value))
        << '\n';
  };
  for (const auto& y : eval.years) line(std::to_string(y.year), y);
  line("pooled", eval.pooled);
}

}  // namespace lrt
