#include "mkg/error.hpp"

namespace mkg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::NoCoreLabel: return "NoCoreLabel";
    case ErrorKind::MissingDoi: return "MissingDoi";
    case ErrorKind::MissingYear: return "MissingYear";
    case ErrorKind::MalformedSyntax: return "MalformedSyntax";
    case ErrorKind::FileUnreadable: return "FileUnreadable";
    case ErrorKind::EmptyPhrase: return "EmptyPhrase";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidEps: return "InvalidEps";
    case ErrorKind::InvalidMinPts: return "InvalidMinPts";
    case ErrorKind::WrongLabelClass: return "WrongLabelClass";
    case ErrorKind::MissingDictionary: return "MissingDictionary";
    case ErrorKind::DictionaryConflict: return "DictionaryConflict";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::MalformedPattern: return "MalformedPattern";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorKind::WrongNodeKind: return "WrongNodeKind";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::EmptyValidationGraph: return "EmptyValidationGraph";
    case ErrorKind::DoiMismatch: return "DoiMismatch";
    case ErrorKind::EmptySplit: return "EmptySplit";
    case ErrorKind::NotEnoughTriples: return "NotEnoughTriples";
    case ErrorKind::UnknownDomain: return "UnknownDomain";
  }
  return "Unknown";
}

static std::string format_message(ErrorKind kind, const std::string& message,
                                  std::size_t line) {
  std::string out(to_string(kind));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(format_message(kind, message, line)),
      kind_(kind),
      line_(line) {}

}  // namespace mkg
