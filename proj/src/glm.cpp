#include "autorisk/glm.hpp"

#include <cmath>

#include <json.hpp>

#include "autorisk/errors.hpp"

namespace autorisk {

namespace {

constexpr double kScoreTol = 1e-8;
constexpr std::size_t kMaxIterations = 100;
constexpr double kSeparationCap = 30.0;
constexpr double kProbClamp = 1e-15;

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logistic_raw(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd mean_vector(const Eigen::MatrixXd& X,
                            const Eigen::VectorXd& beta) {
  Eigen::VectorXd eta = X * beta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta(i) = logistic_raw(eta(i));
  return eta;
}

}  // namespace

std::string_view to_string(GlmKind kind) {
  return kind == GlmKind::Logit ? "logit" : "fractional";
}

double logistic(double x) {
  return std::clamp(logistic_raw(x), kProbClamp, 1.0 - kProbClamp);
}

double quasi_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = X * beta;
  double ll = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += y(i) * eta(i) - softplus(eta(i));
  }
  return ll;
}

Eigen::VectorXd quasi_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& beta) {
  return X.transpose() * (y - mean_vector(X, beta));
}

namespace {

FittedGlm fit_bernoulli_family(const DesignMatrix& design, GlmKind kind) {
  if (design.n() == 0) {
    throw EmptyDesign("design has no rows");
  }
  if (!design.has_response()) {
    throw EmptyDesign("design carries no response to fit on");
  }
  const Eigen::MatrixXd& X = design.rows;
  const Eigen::VectorXd& y = design.response;
  const auto n = X.rows();
  const auto k = X.cols();
  if (n <= k) {
    throw Singular("need more rows than coefficients: n=" +
                   std::to_string(n) + ", k=" + std::to_string(k));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (kind == GlmKind::Logit) {
      if (y(i) != 0.0 && y(i) != 1.0) {
        throw InvalidConfig("logit requires a strictly binary response");
      }
    } else if (!(y(i) >= 0.0 && y(i) <= 1.0)) {
      throw InvalidConfig("fractional response must lie in [0,1]");
    }
  }
  // a response glued to one boundary sends the MLE to infinity; with a small
  // sample the score tolerance can be met before the coefficient cap trips,
  // so reject it up front
  if (y.minCoeff() == y.maxCoeff() && (y(0) == 0.0 || y(0) == 1.0)) {
    throw OneClassOnly("response is constant at " + std::to_string(y(0)));
  }

  // Newton runs on sd-scaled covariates (centered too when an intercept
  // column exists to absorb the shift): raw columns differ by orders of
  // magnitude (task encodings vs skill scores), which leaves the absolute
  // score tolerance unreachable in doubles. Coefficients and covariance
  // transform back exactly afterwards.
  Eigen::Index intercept = -1;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double first = X(0, j);
    if (first != 0.0 && (X.col(j).array() == first).all()) {
      intercept = j;
      break;
    }
  }
  Eigen::VectorXd center = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(k);
  Eigen::MatrixXd Xs = X;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j == intercept) continue;
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().sum() /
                                static_cast<double>(n));
    if (sd > 0) {
      if (intercept >= 0) {
        center(j) = mean;
        Xs.col(j).array() -= mean;
      }
      scale(j) = sd;
      Xs.col(j) /= sd;
    }
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  double ll = quasi_log_likelihood(Xs, y, beta);
  bool converged = false;
  std::size_t iterations = 0;

  while (iterations < kMaxIterations) {
    const Eigen::VectorXd mu = mean_vector(Xs, beta);
    const Eigen::VectorXd residual = y - mu;
    const Eigen::VectorXd g = Xs.transpose() * residual;
    const Eigen::VectorXd g_raw = X.transpose() * residual;
    if (g.lpNorm<Eigen::Infinity>() < kScoreTol &&
        g_raw.lpNorm<Eigen::Infinity>() < kScoreTol) {
      converged = true;
      break;
    }
    ++iterations;

    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    const Eigen::MatrixXd H = Xs.transpose() * w.asDiagonal() * Xs;
    Eigen::LDLT<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success) {
      throw Singular("Hessian factorization failed");
    }
    const Eigen::VectorXd delta = solver.solve(g);
    if (!delta.allFinite()) throw Singular("Hessian is not invertible");

    // Near the optimum the true per-step gain drops below the floating
    // point resolution of ll; treating that noise as a worsening would
    // stall the final polish step, so accept anything within slack.
    const double slack = 1e-12 * (1.0 + std::abs(ll));
    double step = 1.0;
    Eigen::VectorXd candidate = beta + delta;
    double candidate_ll = quasi_log_likelihood(Xs, y, candidate);
    while (candidate_ll < ll - slack && step > 1e-12) {
      step /= 2;
      candidate = beta + step * delta;
      candidate_ll = quasi_log_likelihood(Xs, y, candidate);
    }
    beta = candidate;
    ll = candidate_ll;

    // Scaled coefficients are log-odds per standard deviation, so the cap
    // is scale-free.
    if (beta.lpNorm<Eigen::Infinity>() > kSeparationCap) {
      throw Separation(
          "coefficient magnitude exceeded " + std::to_string(kSeparationCap) +
          " with the likelihood still improving; response is separable");
    }
  }
  if (!converged) {
    throw NoConvergence("score norm above tolerance after " +
                        std::to_string(kMaxIterations) + " iterations");
  }

  const Eigen::VectorXd mu = mean_vector(Xs, beta);
  const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
  const Eigen::MatrixXd H = Xs.transpose() * w.asDiagonal() * Xs;
  Eigen::LDLT<Eigen::MatrixXd> solver(H);
  const Eigen::MatrixXd Hinv =
      solver.solve(Eigen::MatrixXd::Identity(k, k));
  if (solver.info() != Eigen::Success || !Hinv.allFinite()) {
    throw Singular("information matrix is not invertible at the optimum");
  }

  // beta = A * beta_scaled maps back to raw covariates; A also carries
  // the covariance: cov_raw = A cov_scaled A'.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j == intercept) {
      A(j, j) = 1.0;
      continue;
    }
    A(j, j) = 1.0 / scale(j);
    if (intercept >= 0 && center(j) != 0.0) {
      A(intercept, j) = -center(j) / (scale(j) * X(0, intercept));
    }
  }

  FittedGlm model;
  model.kind = kind;
  model.feature_names = design.feature_names;
  model.coefficients = A * beta;
  Eigen::MatrixXd cov_scaled;
  if (kind == GlmKind::Logit) {
    cov_scaled = Hinv;
  } else {
    const Eigen::VectorXd r2 = (y - mu).array().square();
    const Eigen::MatrixXd B = Xs.transpose() * r2.asDiagonal() * Xs;
    cov_scaled = Hinv * B * Hinv;
  }
  const Eigen::MatrixXd cov = A * cov_scaled * A.transpose();
  model.covariance = (cov + cov.transpose()) / 2.0;
  model.log_likelihood = ll;
  model.aic = 2.0 * static_cast<double>(k) - 2.0 * ll;
  model.n = static_cast<std::size_t>(n);
  model.converged = true;
  model.iterations = iterations;
  return model;
}

}  // namespace

FittedGlm fit_logit(const DesignMatrix& design) {
  return fit_bernoulli_family(design, GlmKind::Logit);
}

FittedGlm fit_fractional(const DesignMatrix& design) {
  return fit_bernoulli_family(design, GlmKind::Fractional);
}

Eigen::VectorXd predict_proba(const FittedGlm& model,
                              const DesignMatrix& design) {
  if (design.feature_names != model.feature_names) {
    throw FeatureMismatch("design features do not match the fitted model");
  }
  const Eigen::VectorXd eta = design.rows * model.coefficients;
  Eigen::VectorXd p(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) p(i) = logistic(eta(i));
  return p;
}

double aic(const FittedGlm& model) {
  return 2.0 * static_cast<double>(model.coefficients.size()) -
         2.0 * model.log_likelihood;
}

std::string glm_to_json(const FittedGlm& model) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(model.kind));
  j["feature_names"] = model.feature_names;
  j["coefficients"] = std::vector<double>(
      model.coefficients.data(),
      model.coefficients.data() + model.coefficients.size());
  std::vector<double> cov;
  cov.reserve(static_cast<std::size_t>(model.covariance.size()));
  for (Eigen::Index r = 0; r < model.covariance.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.covariance.cols(); ++c) {
      cov.push_back(model.covariance(r, c));
    }
  }
  j["covariance"] = cov;
  j["log_likelihood"] = model.log_likelihood;
  j["aic"] = model.aic;
  j["n"] = model.n;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  return j.dump(2) + "\n";
}

FittedGlm glm_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FittedGlm model;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "logit") {
    model.kind = GlmKind::Logit;
  } else if (kind == "fractional") {
    model.kind = GlmKind::Fractional;
  } else {
    throw InvalidConfig("unknown model kind '" + kind + "'");
  }
  model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  const auto coef = j.at("coefficients").get<std::vector<double>>();
  model.coefficients =
      Eigen::Map<const Eigen::VectorXd>(coef.data(),
                                        static_cast<Eigen::Index>(coef.size()));
  const auto cov = j.at("covariance").get<std::vector<double>>();
  const auto k = static_cast<Eigen::Index>(coef.size());
  if (cov.size() != coef.size() * coef.size()) {
    throw InvalidConfig("covariance size does not match coefficients");
  }
  model.covariance.resize(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      model.covariance(r, c) = cov[static_cast<std::size_t>(r * k + c)];
    }
  }
  model.log_likelihood = j.at("log_likelihood").get<double>();
  model.aic = j.at("aic").get<double>();
  model.n = j.at("n").get<std::size_t>();
  model.converged = j.at("converged").get<bool>();
  model.iterations = j.at("iterations").get<std::size_t>();
  return model;
}

}  // namespace autorisk
