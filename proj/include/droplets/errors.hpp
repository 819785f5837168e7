#pragma once

#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace droplets {

using cplx = std::complex<double>;

inline std::string to_string(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i)";
  return os.str();
}

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation requested at (or numerically on top of) a singular point.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, cplx location)
      : Error(what + " at w = " + to_string(location)), location_(location) {}
  cplx location() const { return location_; }

 private:
  cplx location_;
};

/// A contour passes through (or too close to) a zero of the integrand.
class ContourError : public Error {
 public:
  ContourError(const std::string& what, cplx location)
      : Error(what + " near " + to_string(location)), location_(location) {}
  cplx location() const { return location_; }

 private:
  cplx location_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry: zero-length segments, vanishing map derivative, ...
class DegenerateError : public Error {
 public:
  DegenerateError(const std::string& what, std::vector<std::size_t> nodes = {})
      : Error(what), nodes_(std::move(nodes)) {}
  const std::vector<std::size_t>& nodes() const { return nodes_; }

 private:
  std::vector<std::size_t> nodes_;
};

/// A printed closed form disagrees with the evaluated object beyond tolerance.
class ClosedFormMismatch : public Error {
 public:
  ClosedFormMismatch(const std::string& what, double deviation)
      : Error(what + " (max deviation " + std::to_string(deviation) + ")"), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

}  // namespace droplets
