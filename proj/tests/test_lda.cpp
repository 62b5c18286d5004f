#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "autorisk/design.hpp"
#include "autorisk/errors.hpp"
#include "autorisk/lda.hpp"
#include "autorisk/rng.hpp"

using namespace autorisk;

namespace {

// Two 2-D Gaussian clouds sharing one covariance, plus intercept column.
DesignMatrix make_gaussian_design(std::size_t n_per_class,
                                  std::uint64_t seed,
                                  double dx = 2.0, double dy = 1.0) {
  Rng rng(seed);
  const std::size_t n = 2 * n_per_class;
  DesignMatrix d;
  d.feature_names = {"intercept", "x", "y"};
  d.rows = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), 3);
  d.response.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const bool cls = i >= n_per_class;
    const double e1 = rng.normal();
    const double e2 = rng.normal();
    // correlated noise via a fixed Cholesky factor
    const double x = (cls ? dx : 0.0) + e1;
    const double y = (cls ? dy : 0.0) + 0.5 * e1 + 0.8 * e2;
    d.rows(static_cast<Eigen::Index>(i), 1) = x;
    d.rows(static_cast<Eigen::Index>(i), 2) = y;
    d.response(static_cast<Eigen::Index>(i)) = cls ? 1.0 : 0.0;
    d.row_ids.push_back("r" + std::to_string(i));
  }
  d.response_kind = ResponseKind::Binary;
  return d;
}

// Direct two-class Bayes rule with Gaussian densities, no log-space tricks.
double bayes_posterior(const LdaModel& m, const Eigen::Vector2d& x) {
  const Eigen::Matrix2d cov = m.pooled_covariance;
  const Eigen::Matrix2d inv = cov.inverse();
  const double det = cov.determinant();
  const auto density = [&](const Eigen::Vector2d& mu) {
    const Eigen::Vector2d c = x - mu;
    const double q = c.dot(inv * c);
    return std::exp(-0.5 * q) /
           (2.0 * std::numbers::pi * std::sqrt(det));
  };
  const double f0 = m.priors[0] * density(m.mean0);
  const double f1 = m.priors[1] * density(m.mean1);
  return f1 / (f0 + f1);
}

}  // namespace

TEST_CASE("fit recovers empirical moments") {
  const auto d = make_gaussian_design(300, 7);
  const auto m = fit_lda(d);
  CHECK(m.n == 600);
  CHECK(m.priors[0] == 0.5);
  CHECK(m.priors[1] == 0.5);
  CHECK(m.feature_names == std::vector<std::string>{"x", "y"});

  // class means straight from the data
  Eigen::Vector2d mu0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d mu1 = Eigen::Vector2d::Zero();
  for (int i = 0; i < 600; ++i) {
    const Eigen::Vector2d x(d.rows(i, 1), d.rows(i, 2));
    (d.response(i) == 1.0 ? mu1 : mu0) += x;
  }
  mu0 /= 300.0;
  mu1 /= 300.0;
  CHECK((m.mean0 - mu0).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((m.mean1 - mu1).lpNorm<Eigen::Infinity>() < 1e-12);

  // pooled covariance: within-class scatter over n - 2, ridge of
  // 1e-8 * trace/k on the diagonal
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 600; ++i) {
    const Eigen::Vector2d x(d.rows(i, 1), d.rows(i, 2));
    const Eigen::Vector2d c = x - (d.response(i) == 1.0 ? mu1 : mu0);
    scatter += c * c.transpose();
  }
  Eigen::Matrix2d pooled = scatter / (600.0 - 2.0);
  const double ridge = 1e-8 * pooled.trace() / 2.0;
  pooled += ridge * Eigen::Matrix2d::Identity();
  CHECK((m.pooled_covariance - pooled).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("posteriors match the direct Bayes formula") {
  const auto d = make_gaussian_design(250, 11);
  const auto m = fit_lda(d);
  const auto p = predict_proba(m, d);
  REQUIRE(p.size() == 500);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector2d x(d.rows(i, 1), d.rows(i, 2));
    CHECK(std::abs(p(i) - bayes_posterior(m, x)) < 1e-10);
  }
}

TEST_CASE("posterior pairs sum to one") {
  const auto d = make_gaussian_design(200, 13);
  const auto m = fit_lda(d);
  // flip the classes: class-0 posterior of the flipped model must be the
  // complement
  auto flipped_design = d;
  flipped_design.response = Eigen::VectorXd::Ones(d.response.size()) -
                            d.response;
  const auto flipped = fit_lda(flipped_design);
  const auto p = predict_proba(m, d);
  const auto q = predict_proba(flipped, d);
  for (Eigen::Index i = 0; i < p.size(); ++i)
    CHECK(std::abs(p(i) + q(i) - 1.0) < 1e-12);
}

TEST_CASE("midpoint of a symmetric problem scores one half") {
  // equal priors, identity-like covariance, means mirrored about zero
  Rng rng(17);
  DesignMatrix d;
  d.feature_names = {"intercept", "x", "y"};
  d.rows = Eigen::MatrixXd::Ones(400, 3);
  d.response.resize(400);
  for (int i = 0; i < 400; ++i) {
    const bool cls = i % 2 == 1;
    const double sx = rng.normal();
    const double sy = rng.normal();
    d.rows(i, 1) = (cls ? 1.5 : -1.5) + sx;
    d.rows(i, 2) = (cls ? 0.5 : -0.5) + sy;
    d.response(i) = cls ? 1.0 : 0.0;
  }
  d.response_kind = ResponseKind::Binary;
  auto m = fit_lda(d);
  // force exact symmetry so the midpoint posterior is analytic
  m.priors = {0.5, 0.5};
  m.mean1 = Eigen::Vector2d(1.5, 0.5);
  m.mean0 = -m.mean1;
  DesignMatrix mid;
  mid.feature_names = {"intercept", "x", "y"};
  mid.rows = Eigen::MatrixXd::Zero(1, 3);
  mid.rows(0, 0) = 1.0;
  const auto p = predict_proba(m, mid);
  CHECK(std::abs(p(0) - 0.5) < 1e-12);
}

TEST_CASE("prediction accepts designs with or without the intercept") {
  const auto d = make_gaussian_design(100, 19);
  const auto m = fit_lda(d);
  DesignMatrix bare;
  bare.feature_names = {"x", "y"};
  bare.rows = d.rows.rightCols(2);
  const auto with = predict_proba(m, d);
  const auto without = predict_proba(m, bare);
  CHECK(with == without);

  DesignMatrix wrong;
  wrong.feature_names = {"x", "z"};
  wrong.rows = d.rows.rightCols(2);
  CHECK_THROWS_AS((void)predict_proba(m, wrong), FeatureMismatch);
}

TEST_CASE("unbalanced classes shift the priors") {
  auto d = make_gaussian_design(200, 23);
  // relabel: first 100 of class 1 become class 0
  for (int i = 200; i < 300; ++i) d.response(i) = 0.0;
  const auto m = fit_lda(d);
  CHECK(m.priors[0] == 0.75);
  CHECK(m.priors[1] == 0.25);
  CHECK(m.priors[0] + m.priors[1] == 1.0);
}

TEST_CASE("degenerate inputs raise typed errors") {
  auto d = make_gaussian_design(50, 29);
  d.response.setZero();
  CHECK_THROWS_AS((void)fit_lda(d), OneClassOnly);

  auto frac = make_gaussian_design(50, 31);
  frac.response(3) = 0.5;
  CHECK_THROWS_AS((void)fit_lda(frac), InvalidConfig);

  DesignMatrix empty;
  empty.feature_names = {"intercept", "x"};
  empty.rows = Eigen::MatrixXd::Ones(0, 2);
  empty.response = Eigen::VectorXd(0);
  CHECK_THROWS_AS((void)fit_lda(empty), EmptyDesign);
}

TEST_CASE("ridge keeps a flat cloud predictable") {
  // y column is a constant: scatter is singular without the ridge
  auto d = make_gaussian_design(80, 37);
  d.rows.col(2).setConstant(3.0);
  const auto m = fit_lda(d);
  const auto p = predict_proba(m, d);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    CHECK(std::isfinite(p(i)));
    CHECK(p(i) > 0.0);
    CHECK(p(i) < 1.0);
  }
}

TEST_CASE("model serializes to json and back") {
  const auto d = make_gaussian_design(60, 41);
  const auto m = fit_lda(d);
  const auto back = lda_from_json(lda_to_json(m));
  CHECK(back.feature_names == m.feature_names);
  CHECK(back.priors == m.priors);
  CHECK(back.mean0 == m.mean0);
  CHECK(back.mean1 == m.mean1);
  CHECK(back.pooled_covariance == m.pooled_covariance);
  CHECK(back.n == m.n);
  const auto p0 = predict_proba(m, d);
  const auto p1 = predict_proba(back, d);
  CHECK(p0 == p1);
}
