#include "wfr/quadrature.hpp"

#include <stdexcept>

namespace wfr {

double trapezoid_2d(const Eigen::Ref<const Eigen::MatrixXd>& values, double dx,
                    double dt) {
  const Eigen::Index nx = values.rows();
  const Eigen::Index nt = values.cols();
  if (nx < 2 || nt < 2) {
    throw std::invalid_argument(
        "trapezoid_2d: need at least 2 samples per axis");
  }
  if (dx <= 0.0 || dt <= 0.0) {
    throw std::invalid_argument("trapezoid_2d: spacings must be positive");
  }
  double acc = 0.0;
  for (Eigen::Index j = 0; j < nt; ++j) {
    const double wj = (j == 0 || j == nt - 1) ? 0.5 : 1.0;
    double col = 0.0;
    col += 0.5 * values(0, j);
    for (Eigen::Index i = 1; i < nx - 1; ++i) col += values(i, j);
    col += 0.5 * values(nx - 1, j);
    acc += wj * col;
  }
  return acc * dx * dt;
}

}  // namespace wfr
