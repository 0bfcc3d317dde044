#include "wfr/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wfr {

namespace {

// Flip the sign so the entry of largest magnitude (first on ties) is
// positive; makes recovered coefficient vectors comparable across runs.
void fix_sign(Eigen::VectorXd& c) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double mag = std::abs(c(i));
    if (mag > best) {
      best = mag;
      imax = i;
    }
  }
  if (c(imax) < 0.0) c = -c;
}

}  // namespace

NullVectorResult min_singular_vector(const Eigen::MatrixXd& Q) {
  const Eigen::Index rows = Q.rows();
  const Eigen::Index cols = Q.cols();
  if (cols < 1 || rows < 1) {
    throw std::invalid_argument("min_singular_vector: empty matrix");
  }
  if (rows < cols) {
    throw std::invalid_argument(
        "min_singular_vector: need at least as many rows as columns");
  }
  if (!Q.allFinite()) {
    throw std::invalid_argument("min_singular_vector: non-finite entries");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q, Eigen::ComputeThinV);
  NullVectorResult result;
  result.c = svd.matrixV().col(cols - 1);
  result.eta = svd.singularValues()(cols - 1);
  if (cols >= 2) {
    const double next = svd.singularValues()(cols - 2);
    result.degenerate = (next - result.eta) <= 1e-12 * next;
  }
  fix_sign(result.c);
  return result;
}

SparseModel iterative_elimination(const Eigen::MatrixXd& Q, double gamma) {
  if (!(gamma > 1.0)) {
    throw std::invalid_argument(
        "iterative_elimination: gamma must be > 1 (elimination must be "
        "allowed to raise the residual)");
  }
  const Eigen::Index K = Q.rows();
  const Eigen::Index N = Q.cols();
  if (N < 1 || K < N) {
    throw std::invalid_argument(
        "iterative_elimination: need a non-empty matrix with rows >= columns");
  }
  if (!Q.allFinite()) {
    throw std::invalid_argument("iterative_elimination: non-finite entries");
  }

  // The SVD runs on the matrix as assembled: every column is an integral of
  // a candidate term against the same weights, so the column norms measure
  // the physical size of each term in the data.  Keeping that scaling is
  // essential at high noise: a near-collinear pair involving a large-norm
  // column (e.g. a cubic term tracking a linear one) carries a large raw
  // residual and loses to the true balance, whereas after unit
  // normalization such a pair can masquerade as the best sparse model.
  // With this scaling, the importance ratio ||c_n q_n||/||q_n|| is just
  // |c_n|.
  std::vector<int> active(static_cast<std::size_t>(N));
  for (Eigen::Index n = 0; n < N; ++n) active[static_cast<std::size_t>(n)] = n;

  auto svd_of = [&](const std::vector<int>& cols) {
    Eigen::MatrixXd sub(K, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      sub.col(static_cast<Eigen::Index>(i)) = Q.col(cols[i]);
    }
    return min_singular_vector(sub);
  };

  SparseModel model;
  NullVectorResult current = svd_of(active);
  model.degenerate_warning = current.degenerate;

  while (active.size() > 1) {
    std::size_t weakest = 0;
    double smallest = std::abs(current.c(0));
    for (std::size_t i = 1; i < active.size(); ++i) {
      const double mag = std::abs(current.c(static_cast<Eigen::Index>(i)));
      if (mag < smallest) {
        smallest = mag;
        weakest = i;
      }
    }
    std::vector<int> candidate = active;
    candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(weakest));
    NullVectorResult next = svd_of(candidate);
    if (next.eta < gamma * current.eta) {
      model.trace.push_back(
          EliminationStep{active[weakest], current.eta, next.eta});
      active = std::move(candidate);
      current = std::move(next);
      model.degenerate_warning |= current.degenerate;
    } else {
      break;
    }
  }

  model.active_terms = active;
  model.residual = current.eta;
  model.coefficients = current.c;
  return model;
}

SparseModel iterative_elimination(const LibraryMatrix& library, double gamma) {
  return iterative_elimination(library.entries, gamma);
}

std::vector<double> normalize_to_term(const SparseModel& model,
                                      int reference_term) {
  const auto it = std::find(model.active_terms.begin(),
                            model.active_terms.end(), reference_term);
  if (it == model.active_terms.end()) {
    throw std::runtime_error(
        "normalize_to_term: reference term " + std::to_string(reference_term) +
        " is not in the recovered support; the model cannot be normalized to "
        "an evolution equation in that term");
  }
  const Eigen::Index idx =
      static_cast<Eigen::Index>(it - model.active_terms.begin());
  const double ref = model.coefficients(idx);
  if (std::abs(ref) <= 1e-12) {
    throw std::runtime_error(
        "normalize_to_term: reference coefficient is numerically zero");
  }
  std::vector<double> out(model.active_terms.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = model.coefficients(static_cast<Eigen::Index>(i)) / ref;
  }
  return out;
}

std::string model_equation_string(const SparseModel& model,
                                  const std::vector<MonomialTerm>& terms,
                                  int reference_term) {
  const std::vector<double> coeffs = normalize_to_term(model, reference_term);
  std::string tail;
  for (std::size_t i = 0; i < model.active_terms.size(); ++i) {
    const int term = model.active_terms[i];
    if (term == reference_term) continue;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", coeffs[i]);
    if (!tail.empty()) tail += " + ";
    tail += std::string(buf) + " " +
            terms.at(static_cast<std::size_t>(term)).label;
  }
  std::string text = terms.at(static_cast<std::size_t>(reference_term)).label;
  if (!tail.empty()) text += " + " + tail;
  return text + " = 0";
}

}  // namespace wfr
