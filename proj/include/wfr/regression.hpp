#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wfr/assembly.hpp"

namespace wfr {

// Solution of min ||Q c|| over unit vectors c: the right singular vector of
// the smallest singular value.  `eta` is that singular value (= ||Q c||).
// `degenerate` flags a smallest singular value separated from the next one
// by less than 1e-12 relative: the minimizer is then not unique and c is one
// representative.
struct NullVectorResult {
  Eigen::VectorXd c;
  double eta = 0.0;
  bool degenerate = false;
};

// Throws std::invalid_argument if Q is empty, has fewer rows than columns,
// or contains non-finite entries.  The sign is fixed so the entry of largest
// magnitude (first such entry on ties) is positive.
NullVectorResult min_singular_vector(const Eigen::MatrixXd& Q);

struct EliminationStep {
  int term = 0;  // library column index removed
  double eta_before = 0.0;
  double eta_after = 0.0;
};

// A recovered model: the surviving library columns and the unit-norm
// coefficient vector over them, with sum_n c_n f_n = 0 as the model reading.
struct SparseModel {
  std::vector<int> active_terms;   // ascending library column indices
  Eigen::VectorXd coefficients;    // unit 2-norm, aligned with active_terms
  double residual = 0.0;           // eta of the final step (see below)
  std::vector<EliminationStep> trace;  // committed removals, in order
  bool degenerate_warning = false;
};

// Backward elimination on the matrix as assembled.  Each step solves for
// the minimum-singular-value direction c, finds the active term with the
// smallest importance ||c_n q_n|| / ||q_n|| = |c_n| (ties broken toward the
// lowest column index), tentatively removes it and recomputes eta; the
// removal is committed only while eta_new < gamma * eta_old, otherwise the
// loop terminates.  The last remaining column is never removed.
//
// Columns are deliberately *not* rescaled: their norms measure the physical
// size of each candidate term under the common weights, and that scaling is
// what lets the true balance win over near-collinear impostor pairs at high
// noise.  Consequences: eta and the elimination sequence are invariant
// under any orthogonal transformation of the rows and under global scaling
// of Q, but not under rescaling individual columns.
//
// Throws std::invalid_argument for gamma <= 1 or an unusable matrix (empty,
// fewer rows than columns, non-finite entries).
SparseModel iterative_elimination(const Eigen::MatrixXd& Q, double gamma = 1.4);
SparseModel iterative_elimination(const LibraryMatrix& library,
                                  double gamma = 1.4);

// Coefficients rescaled so the reference term's coefficient equals 1
// (aligned with model.active_terms).  Throws std::runtime_error if the
// reference term was eliminated or its coefficient magnitude is <= 1e-12:
// the model cannot be read as an evolution equation in that term.
std::vector<double> normalize_to_term(const SparseModel& model,
                                      int reference_term);

// Human-readable rendering "f_ref + c_a f_a + ... = 0" using library labels.
std::string model_equation_string(const SparseModel& model,
                                  const std::vector<MonomialTerm>& terms,
                                  int reference_term);

}  // namespace wfr
