#include "metaseo/error.hpp"

namespace metaseo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::QuotaExceeded: return "QuotaExceeded";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::AllProvidersFailed: return "AllProvidersFailed";
    case ErrorCode::InvalidUrl: return "InvalidUrl";
    case ErrorCode::UndecodableContent: return "UndecodableContent";
    case ErrorCode::ZeroWeights: return "ZeroWeights";
    case ErrorCode::EmptyRun: return "EmptyRun";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::PageOutOfRange: return "PageOutOfRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace metaseo
