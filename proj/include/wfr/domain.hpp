#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace wfr {

struct GridShape {
  Eigen::Index nx = 0;
  Eigen::Index nt = 0;
};

// Rectangular integration window, axis-aligned with the sampling grid.
// It spans grid indices [center_x - half_cells_x, center_x + half_cells_x] by
// [center_t - half_cells_t, center_t + half_cells_t]: an odd number of
// samples per axis with the center on a grid point.  The physical half-width
// is H = half_cells * delta; local coordinates x_bar = (x - x_center) / H_x
// run over a uniform grid on [-1, 1].
struct IntegrationDomain {
  Eigen::Index center_x = 0;
  Eigen::Index center_t = 0;
  Eigen::Index half_cells_x = 1;
  Eigen::Index half_cells_t = 1;

  Eigen::Index npoints_x() const { return 2 * half_cells_x + 1; }
  Eigen::Index npoints_t() const { return 2 * half_cells_t + 1; }
  Eigen::Index first_x() const { return center_x - half_cells_x; }
  Eigen::Index first_t() const { return center_t - half_cells_t; }
  bool fits(const GridShape& grid) const {
    return first_x() >= 0 && first_t() >= 0 &&
           first_x() + npoints_x() <= grid.nx &&
           first_t() + npoints_t() <= grid.nt;
  }
};

// Draws `count` domains of the given half-widths with centers uniform over
// all placements that keep the window inside the grid.  Deterministic given
// `seed`; domains may overlap.  Throws std::invalid_argument if the window
// does not fit in the grid, if a half-width is < 1, or if count == 0.
std::vector<IntegrationDomain> sample_domains(std::size_t count,
                                              Eigen::Index half_cells_x,
                                              Eigen::Index half_cells_t,
                                              const GridShape& grid,
                                              std::uint64_t seed);

}  // namespace wfr
