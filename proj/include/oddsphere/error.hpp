#pragma once

#include <stdexcept>
#include <string>

namespace oddsphere {

/// Bad user input: malformed symbols, out-of-range parameters, dimension mismatch.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parse failure carrying the byte offset of the offending token.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A mathematical invariant failed. Always a bug, never the caller's fault.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

inline void ensure(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

}  // namespace oddsphere
