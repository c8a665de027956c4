#include "newsreuse/error.hpp"

namespace newsreuse {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::BadTimestamp: return "BadTimestamp";
    case ErrorCode::BadLanguage: return "BadLanguage";
    case ErrorCode::BadRecord: return "BadRecord";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::Io: return "Io";
    case ErrorCode::RoleMismatch: return "RoleMismatch";
    case ErrorCode::AnnotationMissing: return "AnnotationMissing";
    case ErrorCode::AnnotationMismatch: return "AnnotationMismatch";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::TrailingData: return "TrailingData";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MissingVector: return "MissingVector";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownArticle: return "UnknownArticle";
    case ErrorCode::DegenerateTable: return "DegenerateTable";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::NoSeparation: return "NoSeparation";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound:
      return 2;
    case ErrorCode::MissingField:
    case ErrorCode::BadTimestamp:
    case ErrorCode::BadLanguage:
    case ErrorCode::BadRecord:
    case ErrorCode::DuplicateId:
    case ErrorCode::AnnotationMissing:
    case ErrorCode::AnnotationMismatch:
    case ErrorCode::BadMagic:
    case ErrorCode::TruncatedFile:
    case ErrorCode::TrailingData:
    case ErrorCode::DuplicateKey:
    case ErrorCode::BadConfig:
      return 3;
    case ErrorCode::ProviderUnavailable:
    case ErrorCode::DimMismatch:
      return 4;
    default:
      return 5;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace newsreuse
