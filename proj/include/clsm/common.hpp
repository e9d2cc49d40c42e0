#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace clsm {

// Bad configuration, dimension mismatch, or schema violation. CLI maps
// this (and ParseError) to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (CSV/JSON).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training could not produce a usable result (all trials failed,
// non-finite loss). CLI maps this to exit code 3.
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool is_finite(double v) { return std::isfinite(v); }

// Caps OpenMP parallelism for the whole process. n <= 0 leaves the
// runtime default in place.
void set_max_threads(int n);

// Reads CLSM_THREADS from the environment and applies it (0 or unset = auto).
void apply_thread_env();

}  // namespace clsm
