#pragma once

#include <stdexcept>
#include <string>

namespace boxlite {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& msg)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

#define BOXLITE_ERROR(Name)          \
  class Name : public Error {        \
   public:                           \
    using Error::Error;              \
  };

BOXLITE_ERROR(NamedFormViolation)
BOXLITE_ERROR(DisjointnessViolation)
BOXLITE_ERROR(UnsatKB)
BOXLITE_ERROR(DimensionMismatch)
BOXLITE_ERROR(UnknownSymbol)
BOXLITE_ERROR(InvalidTarget)
BOXLITE_ERROR(CompileError)
BOXLITE_ERROR(InfeasiblePoint)
BOXLITE_ERROR(InfeasibleDetected)
BOXLITE_ERROR(EmptyCandidateSet)
BOXLITE_ERROR(EmptyRecords)
BOXLITE_ERROR(EmptyGraph)
BOXLITE_ERROR(UnsatSample)
BOXLITE_ERROR(FormatError)

#undef BOXLITE_ERROR

}  // namespace boxlite
