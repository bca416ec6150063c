#ifndef SPACENORM_ERRORS_HPP
#define SPACENORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spacenorm {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& msg) : Error("cube enumeration cap exceeded: " + msg) {}
};

class OutOfDomain : public Error {
 public:
  explicit OutOfDomain(const std::string& msg) : Error("out of domain: " + msg) {}
};

class DegenerateBall : public Error {
 public:
  explicit DegenerateBall(const std::string& msg) : Error("degenerate ball: " + msg) {}
};

class ModeMismatch : public Error {
 public:
  explicit ModeMismatch(const std::string& msg) : Error("mode mismatch: " + msg) {}
};

class NonpositiveNormalizer : public Error {
 public:
  explicit NonpositiveNormalizer(const std::string& msg) : Error("nonpositive normalizer: " + msg) {}
};

class EmptyDomain : public Error {
 public:
  explicit EmptyDomain(const std::string& msg) : Error("empty domain: " + msg) {}
};

class NyquistTooLow : public Error {
 public:
  explicit NyquistTooLow(const std::string& msg) : Error("nyquist too low: " + msg) {}
};

class ScaleRangeEmpty : public Error {
 public:
  explicit ScaleRangeEmpty(const std::string& msg) : Error("scale range empty: " + msg) {}
};

class InsufficientScales : public Error {
 public:
  explicit InsufficientScales(const std::string& msg) : Error("insufficient scales: " + msg) {}
};

}  // namespace spacenorm

#endif
