#pragma once

#include <Eigen/Dense>

namespace wfr {

// Composite trapezoidal rule over a uniform rectangular grid of samples:
// corner weight 1/4, edge weight 1/2, interior weight 1, times dx * dt.
// Throws std::invalid_argument for fewer than 2 samples per axis or
// non-positive spacings.
double trapezoid_2d(const Eigen::Ref<const Eigen::MatrixXd>& values, double dx,
                    double dt);

}  // namespace wfr
