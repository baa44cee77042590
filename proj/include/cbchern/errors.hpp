#pragma once

#include <stdexcept>
#include <string>

namespace cbchern {

/// Malformed textual input (weights, partitions, JSON documents).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cbchern
