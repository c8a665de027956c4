#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace newsreuse {

enum class ErrorCode {
  // ingestion
  MissingField,
  BadTimestamp,
  BadLanguage,
  BadRecord,
  DuplicateId,
  FileNotFound,
  Io,
  // linguistic
  RoleMismatch,
  AnnotationMissing,
  AnnotationMismatch,
  // embedding
  EmptyText,
  ProviderUnavailable,
  DimMismatch,
  BadMagic,
  TruncatedFile,
  TrailingData,
  DuplicateKey,
  // matcher / analysis
  MissingVector,
  IndexOutOfRange,
  UnknownArticle,
  DegenerateTable,
  EmptyMatrix,
  // calibration
  EmptyGroup,
  NoSeparation,
  // configuration
  BadConfig,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for an error reaching the command line:
/// 2 missing input, 3 parse error, 4 provider error, 5 invariant violation.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the leading code name.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace newsreuse
