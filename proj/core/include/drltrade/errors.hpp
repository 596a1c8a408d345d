#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drltrade {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- data ingestion ---

struct MissingColumnError : Error {
  std::string column;
  explicit MissingColumnError(std::string col)
      : Error("missing column '" + col + "'"), column(std::move(col)) {}
};

struct MalformedRowError : Error {
  std::size_t line_no;
  std::string reason;
  MalformedRowError(std::size_t line, std::string why)
      : Error("line " + std::to_string(line) + ": " + why),
        line_no(line),
        reason(std::move(why)) {}
};

struct EmptySeriesError : Error {
  EmptySeriesError() : Error("series has no valid rows") {}
  explicit EmptySeriesError(const std::string& what) : Error(what) {}
};

struct DegenerateSplitError : Error {
  explicit DegenerateSplitError(const std::string& what) : Error(what) {}
};

struct NetworkError : Error {
  explicit NetworkError(const std::string& what) : Error(what) {}
};

struct HttpStatusError : Error {
  int status;
  explicit HttpStatusError(int code)
      : Error("http status " + std::to_string(code)), status(code) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

// --- features / environment ---

struct InsufficientHistoryError : Error {
  std::size_t needed;
  std::size_t got;
  InsufficientHistoryError(std::size_t need, std::size_t have)
      : Error("insufficient history: need " + std::to_string(need) + ", got " +
              std::to_string(have)),
        needed(need),
        got(have) {}
};

struct SteppedAfterDoneError : Error {
  SteppedAfterDoneError() : Error("step() called on a finished episode") {}
};

// --- neural / agents ---

struct ShapeMismatchError : Error {
  explicit ShapeMismatchError(const std::string& what) : Error(what) {}
};

struct EmptyBatchError : Error {
  EmptyBatchError() : Error("training batch is empty") {}
};

struct EmptyRolloutError : Error {
  EmptyRolloutError() : Error("rollout is empty") {}
};

struct NotApplicableError : Error {
  explicit NotApplicableError(const std::string& what) : Error(what) {}
};

}  // namespace drltrade
