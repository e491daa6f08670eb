#pragma once

#include <stdexcept>
#include <string>

namespace gcalc {

/// Base class for all library errors. Messages are prefixed with the module
/// that raised them, e.g. "simplicial: resolution below minimum".
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// A cochain was evaluated on a tuple whose points are farther apart than
/// the cochain's locality radius.
class LocalityError : public Error {
 public:
  explicit LocalityError(const std::string& what) : Error("cochain", what) {}
};

}  // namespace gcalc
