#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

/// Common linear-algebra aliases and error types used across the library.
namespace curvebeam {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Invalid user input: malformed scenario, inconsistent knot vector, bad section dims, ...
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical breakdown: singular metric, antipodal frame transport, non-positive
/// sectional Jacobian, singular linear system, ...
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A load increment failed to converge within the iteration/cutback budget.
class NonconvergenceError : public std::runtime_error {
 public:
  NonconvergenceError(const std::string& what, int increment, int iterations)
      : std::runtime_error(what), increment(increment), iterations(iterations) {}
  int increment = -1;   ///< 0-based index of the failing increment
  int iterations = 0;   ///< iterations spent in the failing increment
};

/// Gauss-Legendre abscissae/weights on [a,b].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace curvebeam
