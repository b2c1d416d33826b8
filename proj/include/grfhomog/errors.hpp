#pragma once

#include <stdexcept>
#include <string>

namespace grfhomog {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct AntisymmetryViolation : Error {
  using Error::Error;
};

struct JacobiViolation : Error {
  JacobiViolation(const std::string& msg, int i, int j, int k, double defect)
      : Error(msg), i(i), j(j), k(k), defect(defect) {}
  int i, j, k;     // worst basis triple (0-based)
  double defect;   // max-norm of the cyclic bracket sum there
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotReductive : Error {
  using Error::Error;
};

struct DegreeOverflow : Error {
  using Error::Error;
};

struct DegreeUnderflow : Error {
  using Error::Error;
};

struct SingularMetric : Error {
  using Error::Error;
};

struct NotUnimodular : Error {
  using Error::Error;
};

struct NonInvariantMetric : Error {
  using Error::Error;
};

struct OutOfDomain : Error {
  using Error::Error;
};

struct ChartDegenerate : Error {
  using Error::Error;
};

struct NotCoprime : Error {
  using Error::Error;
};

struct BadOrder : Error {
  using Error::Error;
};

struct NotCompactType : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace grfhomog
