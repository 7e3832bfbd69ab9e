#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace metaseo {

enum class ErrorCode {
  EmptyQuery,
  MalformedResponse,
  QuotaExceeded,
  ProviderUnavailable,
  AllProvidersFailed,
  InvalidUrl,
  UndecodableContent,
  ZeroWeights,
  EmptyRun,
  AllZero,
  Empty,
  TooFewRows,
  PageOutOfRange,
  InvalidConfig,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// callers (CLI, HTTP handlers) can map it to an exit code or status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace metaseo
