#pragma once

#include <stdexcept>
#include <string>

namespace gsm {

/// Malformed input or an invalid parameter combination (CLI exit code 1).
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested computation is well formed but too large to run, e.g. an
/// exhaustive signal-set enumeration above its cap (CLI exit code 2).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed, e.g. a covariance that is not positive
/// definite (CLI exit code 3).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A detected antenna support whose combinadic rank is outside the allowed
/// pattern set.
class pattern_out_of_range : public usage_error {
 public:
  using usage_error::usage_error;
};

/// A vector entry that is not a (scaled) constellation point.
class malformed_symbol : public usage_error {
 public:
  using usage_error::usage_error;
};

}  // namespace gsm
