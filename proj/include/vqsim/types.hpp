#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vqsim {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Raised for malformed user input: configs, documents, out-of-range arguments.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a linear system has no usable singular values.
class DegenerateSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::size_t dimension(int n_qubits) { return std::size_t{1} << n_qubits; }

}  // namespace vqsim
