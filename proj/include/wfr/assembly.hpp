#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wfr/domain.hpp"
#include "wfr/field.hpp"
#include "wfr/terms.hpp"
#include "wfr/weights.hpp"

namespace wfr {

// Weak-form library matrix Q: one column per candidate term, one row per
// (integration domain, weight) pair, ordered domain-major:
//   row r = domain_index * weights.size() + weight_index.
// Entry (r, n) approximates
//   prefactor_n * integral over the domain of u^{p_n} * d^{nu_n}(g_n * w)
// by the composite trapezoidal rule on the sampling grid, i.e. the
// integration-by-parts form of term n tested against weight w.
struct LibraryMatrix {
  Eigen::MatrixXd entries;
  std::vector<MonomialTerm> terms;
  std::vector<WeightSpec> weights;
  std::vector<IntegrationDomain> domains;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

// Assembles the library matrix.  The parallel version distributes domains
// across OpenMP threads; every row is written independently, so the result
// is bit-identical to the serial reference for any thread count.
//
// Throws std::invalid_argument for empty inputs, domains that do not fit the
// grid, or derivative orders exceeding a weight envelope power, and
// std::runtime_error if the field contains non-finite samples.
LibraryMatrix assemble_library(const Field2D& field,
                               const std::vector<MonomialTerm>& terms,
                               const std::vector<WeightSpec>& weights,
                               const std::vector<IntegrationDomain>& domains);

// Plain serial loop over domains; kept as the reference implementation for
// correctness tests and benchmarking of the parallel path.
LibraryMatrix assemble_library_serial(const Field2D& field,
                                      const std::vector<MonomialTerm>& terms,
                                      const std::vector<WeightSpec>& weights,
                                      const std::vector<IntegrationDomain>& domains);

}  // namespace wfr
