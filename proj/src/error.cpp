#include "lrt/error.hpp"

namespace lrt {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::MissingCountryYear: return "MissingCountryYear";
    case ErrorCode::ZeroOutputSector: return "ZeroOutputSector";
    case ErrorCode::MissingPanelCell: return "MissingPanelCell";
    case ErrorCode::MissingExportDetail: return "MissingExportDetail";
    case ErrorCode::MisalignedPanel: return "MisalignedPanel";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::TooShortSeries: return "TooShortSeries";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NonProductiveEconomy: return "NonProductiveEconomy";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::UnstableDrift: return "UnstableDrift";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::RankDeficientRegressors: return "RankDeficientRegressors";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidP:
    case ErrorCode::UnsupportedFormat:
      return ErrorCategory::Usage;
    case ErrorCode::MalformedRow:
    case ErrorCode::MissingCountryYear:
    case ErrorCode::ZeroOutputSector:
    case ErrorCode::MissingPanelCell:
    case ErrorCode::MissingExportDetail:
    case ErrorCode::MisalignedPanel:
    case ErrorCode::GridMismatch:
    case ErrorCode::TooShortSeries:
    case ErrorCode::DegenerateInput:
    case ErrorCode::InsufficientSamples:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Numerical;
  }
}

}  // namespace lrt
