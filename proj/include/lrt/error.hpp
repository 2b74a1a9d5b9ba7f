#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lrt {

/// Failure classes raised by the library. Each maps onto one CLI exit code.
enum class ErrorCode {
  // usage
  InvalidArgument,
  InvalidP,
  UnsupportedFormat,
  // data
  MalformedRow,
  MissingCountryYear,
  ZeroOutputSector,
  MissingPanelCell,
  MissingExportDetail,
  MisalignedPanel,
  GridMismatch,
  TooShortSeries,
  DegenerateInput,
  InsufficientSamples,
  // numerical
  NonProductiveEconomy,
  NonPositiveScale,
  SingularSystem,
  UnstableDrift,
  NumericalBlowup,
  IllConditioned,
  NonConvergent,
  RankDeficientRegressors,
};

enum class ErrorCategory { Usage, Data, Numerical };

std::string_view error_name(ErrorCode code) noexcept;
ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace lrt
