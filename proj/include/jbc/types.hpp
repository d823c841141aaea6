#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

namespace jbc {

using Complex = std::complex<double>;

// S-basis coefficient algebra runs in binary128. The Gram matrix of the
// S-basis reaches condition numbers near 1e12 already at N = 5 (T = 1), so
// coefficients stored in double cannot reproduce W^T f = d to 1e-9.
using Wide = boost::multiprecision::float128;
using WideComplex = boost::multiprecision::complex128;
using WideVector = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;
using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
using WideComplexVector = Eigen::Matrix<WideComplex, Eigen::Dynamic, 1>;

/// Element of the state space H^N = C^N.
using StateVector = Eigen::VectorXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Spectral data that contradicts controllability (singular Gram matrix) or
/// objects built over different spectral data being mixed.
class InconsistentDataError : public Error {
 public:
  using Error::Error;
};

/// A reconstruction step produced a non-positive (w, g) inner product.
class IllPosedError : public Error {
 public:
  IllPosedError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Numerical rank of the connecting operator differs from the expected N.
class RankError : public Error {
 public:
  RankError(const std::string& what, int detected, int expected)
      : Error(what), detected_(detected), expected_(expected) {}
  int detected() const { return detected_; }
  int expected() const { return expected_; }

 private:
  int detected_;
  int expected_;
};

inline WideComplex to_wide(Complex z) { return WideComplex(Wide(z.real()), Wide(z.imag())); }

inline Complex to_complex(const WideComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline WideComplexVector to_wide(const Eigen::VectorXcd& v) {
  WideComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_wide(v(i));
  return out;
}

inline Eigen::VectorXcd to_complex(const WideComplexVector& v) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_complex(v(i));
  return out;
}

}  // namespace jbc
