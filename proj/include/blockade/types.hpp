#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace blockade {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

using MatrixXc = DenseMatrix<Complex>;
using VectorXc = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using SparseXc = SparseMatrix<Complex>;

inline constexpr Complex I{0.0, 1.0};

// Error hierarchy. The CLI maps ConfigError to exit code 1 and every
// numerical failure (SolverError and subclasses) to exit code 2.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public SolverError {
 public:
  using SolverError::SolverError;
};

class IntegrationError : public SolverError {
 public:
  IntegrationError(const std::string& what, double tau)
      : SolverError(what), tau_(tau) {}
  double tau() const noexcept { return tau_; }

 private:
  double tau_;
};

class UndefinedCorrelation : public SolverError {
 public:
  using SolverError::SolverError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace blockade
