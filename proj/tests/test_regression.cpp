#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wfr/regression.hpp"
#include "wfr/rng.hpp"
#include "wfr/terms.hpp"

using wfr::NullVectorResult;
using wfr::SparseModel;

namespace {

// A matrix with an exact planted null vector on a known support, plus tiny
// perturbations so eta ratios are well defined: the support columns get
// noise far below the non-support structure.
struct Planted {
  Eigen::MatrixXd q;
  std::vector<int> support;       // ascending
  Eigen::VectorXd support_coeffs; // unit norm, aligned with support
};

Planted make_planted(int rows, int cols, std::uint64_t seed) {
  Planted p;
  p.support = {1, 3, 5, 8};
  Eigen::Vector4d c(1.0, -0.7, 0.4, 1.3);
  c.normalize();
  p.support_coeffs = c;

  wfr::GaussianSampler gauss(seed);
  p.q.resize(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      p.q(i, j) = gauss.next();
    }
  }
  // Force sum_k c_k q_{s_k} = 0 by solving for the last support column.
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(rows);
  for (int k = 0; k < 3; ++k) {
    acc += c[k] * p.q.col(p.support[static_cast<std::size_t>(k)]);
  }
  p.q.col(p.support[3]) = -acc / c[3];

  // Perturb: 1e-12 on the support (so eta_before is nonzero but tiny),
  // 1e-8 elsewhere.
  wfr::GaussianSampler noise(seed + 1);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const bool on_support =
        std::find(p.support.begin(), p.support.end(), static_cast<int>(j)) !=
        p.support.end();
    const double eps = on_support ? 1e-12 : 1e-8;
    for (Eigen::Index i = 0; i < rows; ++i) {
      p.q(i, j) += eps * noise.next();
    }
  }
  return p;
}

}  // namespace

TEST_CASE("minimum singular vector of an exactly rank-deficient matrix") {
  Eigen::MatrixXd q(2, 2);
  q << 1.0, -1.0, 2.0, -2.0;
  const NullVectorResult r = wfr::min_singular_vector(q);
  CHECK(r.eta <= 1e-14);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(r.c[0] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(r.c[1] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(r.c.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("orthonormal columns give eta 1 and a degeneracy flag") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(5, 3);
  const NullVectorResult r = wfr::min_singular_vector(q);
  CHECK(r.eta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.degenerate);
}

TEST_CASE("minimum singular vector rejects unusable matrices") {
  Eigen::MatrixXd empty;
  CHECK_THROWS_AS(wfr::min_singular_vector(empty), std::invalid_argument);
  Eigen::MatrixXd wide(2, 5);
  wide.setOnes();
  CHECK_THROWS_AS(wfr::min_singular_vector(wide), std::invalid_argument);
  Eigen::MatrixXd bad(3, 2);
  bad.setOnes();
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(wfr::min_singular_vector(bad), std::invalid_argument);
}

TEST_CASE("sign convention: the largest-magnitude entry is positive") {
  Eigen::MatrixXd q(3, 2);
  // Null direction proportional to (1, -2): largest entry is the second.
  q << 2.0, 1.0, 4.0, 2.0, 6.0, 3.0;
  const NullVectorResult r = wfr::min_singular_vector(q);
  CHECK(std::abs(r.c[1]) > std::abs(r.c[0]));
  CHECK(r.c[1] > 0.0);
}

TEST_CASE("elimination recovers a planted support exactly") {
  const Planted p = make_planted(120, 10, 42);
  const SparseModel model = wfr::iterative_elimination(p.q, 1.4);

  REQUIRE(model.active_terms == p.support);
  REQUIRE(model.coefficients.size() == 4);
  CHECK(model.coefficients.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // Up to overall sign the coefficients match the planted ones.
  const double dot = model.coefficients.dot(p.support_coeffs);
  CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(model.residual <= 1e-8);
  CHECK_FALSE(model.degenerate_warning);

  // Eta never decreases along the elimination trace (removing a column can
  // only raise the minimum singular value), and the trace removed exactly
  // the non-support columns.
  CHECK(model.trace.size() == 6);
  for (const wfr::EliminationStep& step : model.trace) {
    CHECK(step.eta_after >= step.eta_before - 1e-15);
    CHECK(std::find(p.support.begin(), p.support.end(), step.term) ==
          p.support.end());
  }
}

TEST_CASE("adding irrelevant columns does not change the recovered model") {
  // Same support construction embedded in 6 and in 10 columns; the support
  // columns are generated identically, so the recovered coefficients agree.
  const Planted small = make_planted(120, 10, 7);
  Eigen::MatrixXd wider(120, 13);
  wider.leftCols(10) = small.q;
  wfr::GaussianSampler extra(99);
  for (Eigen::Index j = 10; j < 13; ++j) {
    for (Eigen::Index i = 0; i < 120; ++i) {
      wider(i, j) = extra.next();
    }
  }
  const SparseModel a = wfr::iterative_elimination(small.q, 1.4);
  const SparseModel b = wfr::iterative_elimination(wider, 1.4);
  REQUIRE(a.active_terms == small.support);
  REQUIRE(b.active_terms == small.support);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(a.coefficients[i] == doctest::Approx(b.coefficients[i]).epsilon(1e-9));
  }
}

TEST_CASE("elimination is invariant under global scaling and row rotation") {
  // The elimination works on the matrix as assembled; its invariances are
  // global scaling (etas scale, decisions identical) and orthogonal
  // transformations of the rows (everything identical).  Individual column
  // norms are meaningful and deliberately not normalized away.
  const Planted p = make_planted(150, 10, 11);
  const SparseModel base = wfr::iterative_elimination(p.q, 1.4);
  REQUIRE(base.active_terms == p.support);

  SUBCASE("global scaling") {
    const double a = 1e6;
    const SparseModel re = wfr::iterative_elimination(a * p.q, 1.4);
    REQUIRE(base.active_terms == re.active_terms);
    REQUIRE(base.trace.size() == re.trace.size());
    for (std::size_t k = 0; k < base.trace.size(); ++k) {
      CHECK(base.trace[k].term == re.trace[k].term);
      CHECK(a * base.trace[k].eta_before ==
            doctest::Approx(re.trace[k].eta_before).epsilon(1e-9));
      CHECK(a * base.trace[k].eta_after ==
            doctest::Approx(re.trace[k].eta_after).epsilon(1e-9));
    }
    CHECK(a * base.residual == doctest::Approx(re.residual).epsilon(1e-9));
    for (Eigen::Index i = 0; i < base.coefficients.size(); ++i) {
      CHECK(re.coefficients[i] ==
            doctest::Approx(base.coefficients[i]).epsilon(1e-9));
    }
  }

  SUBCASE("orthogonal row mixing") {
    // Householder reflection built from a fixed unit vector.
    wfr::GaussianSampler gauss(23);
    Eigen::VectorXd v(p.q.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss.next();
    v.normalize();
    const Eigen::MatrixXd mixed = p.q - 2.0 * v * (v.transpose() * p.q);

    const SparseModel re = wfr::iterative_elimination(mixed, 1.4);
    REQUIRE(base.active_terms == re.active_terms);
    REQUIRE(base.trace.size() == re.trace.size());
    for (std::size_t k = 0; k < base.trace.size(); ++k) {
      CHECK(base.trace[k].term == re.trace[k].term);
      CHECK(base.trace[k].eta_before ==
            doctest::Approx(re.trace[k].eta_before).epsilon(1e-9));
      CHECK(base.trace[k].eta_after ==
            doctest::Approx(re.trace[k].eta_after).epsilon(1e-9));
    }
    CHECK(base.residual == doctest::Approx(re.residual).epsilon(1e-9));
    for (Eigen::Index i = 0; i < base.coefficients.size(); ++i) {
      CHECK(re.coefficients[i] ==
            doctest::Approx(base.coefficients[i]).epsilon(1e-9));
    }
  }

  SUBCASE("an exactly scaled null relation is still recovered") {
    // Scaling one support column preserves the planted null space (with the
    // coefficient scaled inversely); modest scalings leave the support
    // recoverable.
    Eigen::MatrixXd scaled = p.q;
    scaled.col(p.support[1]) *= 4.0;
    const SparseModel re = wfr::iterative_elimination(scaled, 1.4);
    REQUIRE(re.active_terms == p.support);
    Eigen::VectorXd expected = base.coefficients;
    expected[1] /= 4.0;
    expected.normalize();
    Eigen::Index imax;
    expected.cwiseAbs().maxCoeff(&imax);
    if (expected[imax] < 0) expected = -expected;
    for (Eigen::Index i = 0; i < expected.size(); ++i) {
      CHECK(re.coefficients[i] == doctest::Approx(expected[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("gamma at or below 1 is rejected") {
  Eigen::MatrixXd q(3, 2);
  q.setRandom();
  CHECK_THROWS_AS(wfr::iterative_elimination(q, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(wfr::iterative_elimination(q, 0.5), std::invalid_argument);
}

TEST_CASE("the last column is never removed") {
  Eigen::MatrixXd q(5, 1);
  q.setOnes();
  const SparseModel one = wfr::iterative_elimination(q, 1000.0);
  CHECK(one.active_terms == std::vector<int>{0});

  wfr::GaussianSampler gauss(5);
  Eigen::MatrixXd two(50, 2);
  for (Eigen::Index j = 0; j < 2; ++j) {
    for (Eigen::Index i = 0; i < 50; ++i) {
      two(i, j) = gauss.next();
    }
  }
  const SparseModel kept = wfr::iterative_elimination(two, 1e12);
  CHECK(kept.active_terms.size() == 1);
}

TEST_CASE("normalization to a reference term and the rendered equation") {
  const Planted p = make_planted(120, 10, 3);
  const SparseModel model = wfr::iterative_elimination(p.q, 1.4);
  REQUIRE(model.active_terms == p.support);

  const std::vector<double> normalized = wfr::normalize_to_term(model, 1);
  const std::size_t ref_pos = 0;  // term 1 is the first active term
  CHECK(normalized[ref_pos] == 1.0);
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    CHECK(normalized[i] ==
          doctest::Approx(model.coefficients[static_cast<Eigen::Index>(i)] /
                          model.coefficients[0])
              .epsilon(1e-12));
  }
  CHECK_THROWS_AS(wfr::normalize_to_term(model, 0), std::runtime_error);

  std::vector<wfr::MonomialTerm> lib(10);
  for (int i = 0; i < 10; ++i) {
    lib[static_cast<std::size_t>(i)].label = "f" + std::to_string(i);
  }
  const std::string eq = wfr::model_equation_string(model, lib, 1);
  CHECK(eq.rfind("f1", 0) == 0);  // reference term leads
  CHECK(eq.find("= 0") != std::string::npos);
  CHECK(eq.find("f3") != std::string::npos);
  CHECK(eq.find("f5") != std::string::npos);
  CHECK(eq.find("f8") != std::string::npos);
  CHECK(eq.find("f0") == std::string::npos);
}

TEST_CASE("library-matrix overload carries the term bookkeeping through") {
  const Planted p = make_planted(60, 10, 21);
  wfr::LibraryMatrix lm;
  lm.entries = p.q;
  lm.terms = wfr::default_ks_library();
  const SparseModel direct = wfr::iterative_elimination(p.q, 1.4);
  const SparseModel viaLm = wfr::iterative_elimination(lm, 1.4);
  CHECK(direct.active_terms == viaLm.active_terms);
  CHECK((direct.coefficients - viaLm.coefficients).cwiseAbs().maxCoeff() ==
        0.0);
}
