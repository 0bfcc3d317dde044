#include "wfr/domain.hpp"

#include <stdexcept>

#include "wfr/rng.hpp"

namespace wfr {

std::vector<IntegrationDomain> sample_domains(std::size_t count,
                                              Eigen::Index half_cells_x,
                                              Eigen::Index half_cells_t,
                                              const GridShape& grid,
                                              std::uint64_t seed) {
  if (count == 0) {
    throw std::invalid_argument("sample_domains: count must be >= 1");
  }
  if (half_cells_x < 1 || half_cells_t < 1) {
    throw std::invalid_argument(
        "sample_domains: domains need at least 2 grid cells per axis");
  }
  const Eigen::Index lo_x = half_cells_x;
  const Eigen::Index hi_x = grid.nx - 1 - half_cells_x;
  const Eigen::Index lo_t = half_cells_t;
  const Eigen::Index hi_t = grid.nt - 1 - half_cells_t;
  if (hi_x < lo_x || hi_t < lo_t) {
    throw std::invalid_argument(
        "sample_domains: domain does not fit inside the grid");
  }
  std::mt19937_64 engine(mix_seed(seed));
  std::vector<IntegrationDomain> domains;
  domains.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    IntegrationDomain d;
    d.half_cells_x = half_cells_x;
    d.half_cells_t = half_cells_t;
    d.center_x = uniform_index(engine, lo_x, hi_x);
    d.center_t = uniform_index(engine, lo_t, hi_t);
    domains.push_back(d);
  }
  return domains;
}

}  // namespace wfr
