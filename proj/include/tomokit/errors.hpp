#pragma once

#include <stdexcept>
#include <string>

namespace tomo {

/// Bad sizes, mismatched geometries, out-of-range parameters.
class invalid_argument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A solver produced a non-finite value or broke down.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what, long iteration = -1)
        : std::runtime_error(what), iteration_(iteration) {}

    /// Iteration at which the failure occurred, -1 if not applicable.
    long iteration() const noexcept { return iteration_; }

  private:
    long iteration_;
};

/// File could not be read or written.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace tomo
