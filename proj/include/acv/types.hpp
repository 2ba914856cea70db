#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace acv {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Error signals raised by the library. The CLI maps these to exit code 2.
enum class ErrorCode {
  unsupported_entry_law,
  dimension_mismatch,
  domain_violation,
  numerical_failure,
  singular_matrix,
  unequal_supports,
  size_cap_exceeded,
  undefined_at_origin,
  unbounded_density,
  no_convergence,
  invalid_config,
  parse_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// N x n sampling shape. gamma() is the finite-size aspect ratio N/n.
struct MatrixShape {
  int rows = 0;  // N
  int cols = 0;  // n

  MatrixShape() = default;
  MatrixShape(int n_rows, int n_cols) : rows(n_rows), cols(n_cols) {
    if (rows < 1 || cols < 1)
      fail(ErrorCode::domain_violation, "MatrixShape: rows and cols must be >= 1");
  }
  double gamma() const { return static_cast<double>(rows) / cols; }
};

}  // namespace acv
