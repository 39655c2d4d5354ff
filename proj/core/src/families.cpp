// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#include "msboost/families.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>

#include "msboost/errors.hpp"

namespace msboost {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
// exp() argument clamp keeping link inversion strictly positive and finite.
constexpr double kMaxExpArg = 690.0;

double standard_normal_quantile(double p) {
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

struct WeightedMoments {
  double mean = 0.0;
  double var = 0.0;
};

// Falls back to unweighted moments when the weights carry no mass.
WeightedMoments weighted_moments(const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  const double sw = w.sum();
  WeightedMoments m;
  if (sw > 0.0) {
    m.mean = w.dot(y) / sw;
    m.var = w.dot((y.array() - m.mean).square().matrix()) / sw;
  } else {
    m.mean = y.mean();
    m.var = (y.array() - m.mean).square().mean();
  }
  return m;
}

}  // namespace

double link_apply(Link link, double theta) {
  switch (link) {
    case Link::identity:
      return theta;
    case Link::log:
      return std::log(theta);
  }
  return theta;
}

double link_invert(Link link, double eta) {
  switch (link) {
    case Link::identity:
      return eta;
    case Link::log:
      return std::exp(std::clamp(eta, -kMaxExpArg, kMaxExpArg));
  }
  return eta;
}

bool ResponseFamily::in_support(double y) const {
  if (!std::isfinite(y)) return false;
  if (support_ == Support::reals) return true;
  return y >= 0.0 && std::abs(y - std::round(y)) <= 1e-9;
}

void ResponseFamily::check_response(double y) const {
  if (!in_support(y)) {
    throw InvalidInputError("response " + std::to_string(y) + " outside the support of " + name_);
  }
}

void ResponseFamily::check_theta(const Eigen::VectorXd& theta) const {
  if (theta.size() != param_count()) {
    throw InvalidInputError(name_ + " expects " + std::to_string(param_count()) +
                            " parameters, got " + std::to_string(theta.size()));
  }
  for (int k = 0; k < param_count(); ++k) {
    const double v = theta(k);
    if (!std::isfinite(v)) {
      throw InvalidInputError(name_ + ": parameter " + std::to_string(k + 1) + " is not finite");
    }
    if (link(k) == Link::log && v <= 0.0) {
      throw InvalidInputError(name_ + ": parameter " + std::to_string(k + 1) +
                              " must be strictly positive, got " + std::to_string(v));
    }
  }
}

Eigen::VectorXd ResponseFamily::theta_from_eta(const Eigen::VectorXd& eta) const {
  Eigen::VectorXd theta(eta.size());
  for (Eigen::Index k = 0; k < eta.size(); ++k) {
    theta(k) = link_invert(link(static_cast<int>(k)), eta(k));
  }
  return theta;
}

// ---------------------------------------------------------------------------
// Normal: theta = (mean, sd), links (identity, log).

NormalFamily::NormalFamily()
    : ResponseFamily("normal", {Link::identity, Link::log}, Support::reals) {}

double NormalFamily::log_density(double y, const Eigen::VectorXd& theta) const {
  check_theta(theta);
  check_response(y);
  const double mu = theta(0), sigma = theta(1);
  const double z = (y - mu) / sigma;
  return -std::log(sigma) - 0.5 * kLog2Pi - 0.5 * z * z;
}

double NormalFamily::gradient(double y, const Eigen::VectorXd& theta, int k) const {
  check_theta(theta);
  check_response(y);
  const double mu = theta(0), sigma = theta(1);
  const double z = (y - mu) / sigma;
  if (k == 0) return z / sigma;       // d/d eta_1, identity link
  if (k == 1) return z * z - 1.0;     // d/d eta_2, log link
  throw InvalidInputError("normal: parameter index out of range");
}

double NormalFamily::cdf(double y, const Eigen::VectorXd& theta) const {
  check_theta(theta);
  const double z = (y - theta(0)) / theta(1);
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double NormalFamily::quantile(const Eigen::VectorXd& theta, double p) const {
  check_theta(theta);
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInputError("quantile probability must lie in (0,1), got " + std::to_string(p));
  }
  return theta(0) + theta(1) * standard_normal_quantile(p);
}

double NormalFamily::sample(const Eigen::VectorXd& theta, std::mt19937_64& rng) const {
  check_theta(theta);
  std::normal_distribution<double> dist(theta(0), theta(1));
  return dist(rng);
}

Eigen::VectorXd NormalFamily::initial_offsets(const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& w) const {
  const auto m = weighted_moments(y, w);
  const double sigma = std::max(std::sqrt(m.var), 1e-8);
  Eigen::VectorXd eta(2);
  eta << m.mean, std::log(sigma);
  return eta;
}

// ---------------------------------------------------------------------------
// Negative binomial, mean-dispersion form:
//   f(y) = Gamma(y+sigma) / (Gamma(y+1) Gamma(sigma))
//          * (sigma/(sigma+mu))^sigma * (mu/(mu+sigma))^y
// with mu = theta_0, sigma = theta_1, both on log links.

NegativeBinomialFamily::NegativeBinomialFamily()
    : ResponseFamily("nbinom", {Link::log, Link::log}, Support::nonnegative_integers) {}

double NegativeBinomialFamily::log_density(double y, const Eigen::VectorXd& theta) const {
  check_theta(theta);
  check_response(y);
  const double mu = theta(0), sigma = theta(1);
  return std::lgamma(y + sigma) - std::lgamma(y + 1.0) - std::lgamma(sigma) -
         sigma * std::log1p(mu / sigma) + y * (std::log(mu) - std::log(mu + sigma));
}

double NegativeBinomialFamily::gradient(double y, const Eigen::VectorXd& theta, int k) const {
  check_theta(theta);
  check_response(y);
  const double mu = theta(0), sigma = theta(1);
  if (k == 0) {
    // d/d log(mu)
    return y - mu * (y + sigma) / (mu + sigma);
  }
  if (k == 1) {
    // d/d log(sigma)
    const double psi_diff = boost::math::digamma(y + sigma) - boost::math::digamma(sigma);
    return sigma * (psi_diff - std::log1p(mu / sigma) + (mu - y) / (sigma + mu));
  }
  throw InvalidInputError("nbinom: parameter index out of range");
}

double NegativeBinomialFamily::cdf(double y, const Eigen::VectorXd& theta) const {
  check_theta(theta);
  if (y < 0.0) return 0.0;
  const double mu = theta(0), sigma = theta(1);
  const double k = std::floor(y);
  // P(Y <= k) equals the regularized incomplete beta I_{sigma/(sigma+mu)}(sigma, k+1).
  return boost::math::ibeta(sigma, k + 1.0, sigma / (sigma + mu));
}

double NegativeBinomialFamily::quantile(const Eigen::VectorXd& theta, double p) const {
  check_theta(theta);
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInputError("quantile probability must lie in (0,1), got " + std::to_string(p));
  }
  if (cdf(0.0, theta) >= p) return 0.0;
  double lo = 0.0;   // cdf(lo) < p
  double hi = 1.0;
  while (cdf(hi, theta) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) throw DegeneracyError("nbinom quantile did not terminate");
  }
  while (hi - lo > 1.0) {
    const double mid = std::floor((lo + hi) / 2.0);
    if (cdf(mid, theta) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double NegativeBinomialFamily::sample(const Eigen::VectorXd& theta, std::mt19937_64& rng) const {
  check_theta(theta);
  const double mu = theta(0), sigma = theta(1);
  std::gamma_distribution<double> gamma_dist(sigma, mu / sigma);
  const double lambda = gamma_dist(rng);
  if (lambda < 1e-300) return 0.0;
  std::poisson_distribution<long> pois(lambda);
  return static_cast<double>(pois(rng));
}

Eigen::VectorXd NegativeBinomialFamily::initial_offsets(const Eigen::VectorXd& y,
                                                        const Eigen::VectorXd& w) const {
  const auto m = weighted_moments(y, w);
  const double mu = std::max(m.mean, 1e-3);
  // Method of moments: Var = mu + mu^2/sigma. Near-Poisson slices get a
  // large dispersion parameter.
  double sigma = 1e4;
  if (m.var > mu * (1.0 + 1e-8)) sigma = mu * mu / (m.var - mu);
  sigma = std::clamp(sigma, 1e-3, 1e4);
  Eigen::VectorXd eta(2);
  eta << std::log(mu), std::log(sigma);
  return eta;
}

std::unique_ptr<ResponseFamily> make_family(const std::string& name) {
  if (name == "normal") return std::make_unique<NormalFamily>();
  if (name == "nbinom") return std::make_unique<NegativeBinomialFamily>();
  throw InvalidInputError("unknown family '" + name + "' (available: normal, nbinom)");
}

}  // namespace msboost
