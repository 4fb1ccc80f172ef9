#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mkg {

enum class ErrorKind {
  InvalidArgument,
  UnknownLabel,
  NoCoreLabel,
  MissingDoi,
  MissingYear,
  MalformedSyntax,
  FileUnreadable,
  EmptyPhrase,
  DimensionMismatch,
  InvalidEps,
  InvalidMinPts,
  WrongLabelClass,
  MissingDictionary,
  DictionaryConflict,
  UnknownNode,
  MalformedPattern,
  IoError,
  MalformedFile,
  WeightsNotNormalized,
  WrongNodeKind,
  EmptyGraph,
  UnknownId,
  EmptyValidationGraph,
  DoiMismatch,
  EmptySplit,
  NotEnoughTriples,
  UnknownDomain,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type. `line` is
// 1-based and only meaningful for errors raised while reading files.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace mkg
