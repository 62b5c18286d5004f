#include "autorisk/lda.hpp"

#include <cmath>

#include <json.hpp>

#include "autorisk/errors.hpp"
#include "autorisk/glm.hpp"

namespace autorisk {

namespace {

// Column indices of the non-intercept features.
std::vector<Eigen::Index> discriminant_columns(
    const std::vector<std::string>& names) {
  std::vector<Eigen::Index> cols;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] != "intercept") cols.push_back(static_cast<Eigen::Index>(j));
  }
  return cols;
}

std::vector<std::string> strip_intercept(
    const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& name : names) {
    if (name != "intercept") out.push_back(name);
  }
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m,
                               const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(cols[j]);
  }
  return out;
}

}  // namespace

LdaModel fit_lda(const DesignMatrix& design) {
  if (design.n() == 0) {
    throw EmptyDesign("design has no rows");
  }
  if (!design.has_response()) {
    throw EmptyDesign("design carries no response to fit on");
  }
  const auto cols = discriminant_columns(design.feature_names);
  const Eigen::MatrixXd X = select_columns(design.rows, cols);
  const Eigen::VectorXd& y = design.response;
  const auto n = X.rows();
  const auto k = X.cols();

  std::size_t n1 = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) {
      throw InvalidConfig("LDA requires a strictly binary response");
    }
    if (y(i) == 1.0) ++n1;
  }
  const std::size_t n0 = static_cast<std::size_t>(n) - n1;
  if (n0 == 0 || n1 == 0) {
    throw OneClassOnly("both classes must be present to fit LDA");
  }

  Eigen::VectorXd mean0 = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd mean1 = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    (y(i) == 1.0 ? mean1 : mean0) += X.row(i).transpose();
  }
  mean0 /= static_cast<double>(n0);
  mean1 /= static_cast<double>(n1);

  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd d =
        X.row(i).transpose() - (y(i) == 1.0 ? mean1 : mean0);
    scatter += d * d.transpose();
  }
  Eigen::MatrixXd sigma = scatter / static_cast<double>(n - 2);
  const double ridge = 1e-8 * sigma.trace() / static_cast<double>(k);
  sigma.diagonal().array() += ridge;

  Eigen::LDLT<Eigen::MatrixXd> solver(sigma);
  if (solver.info() != Eigen::Success || !solver.isPositive()) {
    throw SingularCovariance(
        "pooled covariance is singular even after ridge stabilization");
  }

  LdaModel model;
  model.feature_names = strip_intercept(design.feature_names);
  model.priors = {static_cast<double>(n0) / static_cast<double>(n),
                  static_cast<double>(n1) / static_cast<double>(n)};
  model.mean0 = mean0;
  model.mean1 = mean1;
  model.pooled_covariance = (sigma + sigma.transpose()) / 2.0;
  model.n = static_cast<std::size_t>(n);
  return model;
}

Eigen::VectorXd predict_proba(const LdaModel& model,
                              const DesignMatrix& design) {
  if (strip_intercept(design.feature_names) != model.feature_names) {
    throw FeatureMismatch("design features do not match the fitted model");
  }
  const auto cols = discriminant_columns(design.feature_names);
  const Eigen::MatrixXd X = select_columns(design.rows, cols);

  Eigen::LDLT<Eigen::MatrixXd> solver(model.pooled_covariance);
  if (solver.info() != Eigen::Success) {
    throw SingularCovariance("stored pooled covariance is singular");
  }
  const Eigen::VectorXd a0 = solver.solve(model.mean0);
  const Eigen::VectorXd a1 = solver.solve(model.mean1);
  const double c0 =
      -0.5 * model.mean0.dot(a0) + std::log(model.priors[0]);
  const double c1 =
      -0.5 * model.mean1.dot(a1) + std::log(model.priors[1]);

  // Two-class posterior: P(1|x) = logistic(d1(x) - d0(x)) with the linear
  // discriminants d_k(x) = x' Sigma^-1 mu_k - mu_k' Sigma^-1 mu_k / 2
  // + log pi_k. The shared quadratic term cancels.
  Eigen::VectorXd p(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double d0 = X.row(i).dot(a0) + c0;
    const double d1 = X.row(i).dot(a1) + c1;
    p(i) = logistic(d1 - d0);
  }
  return p;
}

std::string lda_to_json(const LdaModel& model) {
  nlohmann::json j;
  j["kind"] = "lda";
  j["feature_names"] = model.feature_names;
  j["priors"] = {model.priors[0], model.priors[1]};
  j["mean0"] = std::vector<double>(model.mean0.data(),
                                   model.mean0.data() + model.mean0.size());
  j["mean1"] = std::vector<double>(model.mean1.data(),
                                   model.mean1.data() + model.mean1.size());
  std::vector<double> cov;
  cov.reserve(static_cast<std::size_t>(model.pooled_covariance.size()));
  for (Eigen::Index r = 0; r < model.pooled_covariance.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.pooled_covariance.cols(); ++c) {
      cov.push_back(model.pooled_covariance(r, c));
    }
  }
  j["pooled_covariance"] = cov;
  j["n"] = model.n;
  return j.dump(2) + "\n";
}

LdaModel lda_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("kind").get<std::string>() != "lda") {
    throw InvalidConfig("not an LDA model document");
  }
  LdaModel model;
  model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  const auto priors = j.at("priors").get<std::vector<double>>();
  if (priors.size() != 2) throw InvalidConfig("LDA priors must have 2 entries");
  model.priors = {priors[0], priors[1]};
  const auto m0 = j.at("mean0").get<std::vector<double>>();
  const auto m1 = j.at("mean1").get<std::vector<double>>();
  model.mean0 = Eigen::Map<const Eigen::VectorXd>(
      m0.data(), static_cast<Eigen::Index>(m0.size()));
  model.mean1 = Eigen::Map<const Eigen::VectorXd>(
      m1.data(), static_cast<Eigen::Index>(m1.size()));
  const auto cov = j.at("pooled_covariance").get<std::vector<double>>();
  const auto k = static_cast<Eigen::Index>(m0.size());
  if (cov.size() != m0.size() * m0.size()) {
    throw InvalidConfig("covariance size does not match means");
  }
  model.pooled_covariance.resize(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      model.pooled_covariance(r, c) = cov[static_cast<std::size_t>(r * k + c)];
    }
  }
  model.n = j.at("n").get<std::size_t>();
  return model;
}

}  // namespace autorisk
