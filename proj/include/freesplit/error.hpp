#pragma once

#include <stdexcept>
#include <string>

namespace freesplit {

enum class ErrorKind {
  InvalidInput,
  BudgetExhausted,
  NumericalTolerance,
  NotApplicable,
  FixtureInvalid,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void invalid_input(const std::string& what) {
  throw Error(ErrorKind::InvalidInput, what);
}

[[noreturn]] inline void budget_exhausted(const std::string& what) {
  throw Error(ErrorKind::BudgetExhausted, what);
}

[[noreturn]] inline void not_applicable(const std::string& what) {
  throw Error(ErrorKind::NotApplicable, what);
}

[[noreturn]] inline void fixture_invalid(const std::string& what) {
  throw Error(ErrorKind::FixtureInvalid, what);
}

}  // namespace freesplit
