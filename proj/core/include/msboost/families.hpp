// Copyright 2026 msboost authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSBOOST_FAMILIES_HPP
#define MSBOOST_FAMILIES_HPP

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace msboost {

// Monotonic link g mapping a distribution parameter onto an unconstrained
// predictor: eta = g(theta), theta = g^{-1}(eta).
enum class Link { identity, log };

double link_apply(Link link, double theta);
double link_invert(Link link, double eta);

enum class Support { reals, nonnegative_integers };

/// A K-parameter response distribution with one link per parameter.
/// Parameters are indexed 0..K-1; all values of theta are on the natural
/// scale. Implementations are immutable and safe to share across threads.
///
/// A new family plugs in by implementing the virtual surface below; the
/// two shipped families are "normal" (mean/identity, sd/log) and "nbinom"
/// (mean/log, dispersion/log).
class ResponseFamily {
public:
  virtual ~ResponseFamily() = default;

  const std::string& name() const { return name_; }
  int param_count() const { return static_cast<int>(links_.size()); }
  Link link(int k) const { return links_[static_cast<size_t>(k)]; }
  Support support() const { return support_; }

  bool in_support(double y) const;

  // Throws InvalidInputError if theta violates the family domain.
  void check_theta(const Eigen::VectorXd& theta) const;
  // Throws InvalidInputError if y is outside the support.
  void check_response(double y) const;

  /// log f_Y(y; theta). Evaluated in log space; finite for all valid inputs.
  virtual double log_density(double y, const Eigen::VectorXd& theta) const = 0;

  /// d log f_Y(y; theta) / d eta_k with theta_j = g_j^{-1}(eta_j) held at
  /// the supplied values; the chain rule through the link is included.
  virtual double gradient(double y, const Eigen::VectorXd& theta, int k) const = 0;

  /// P(Y <= y; theta).
  virtual double cdf(double y, const Eigen::VectorXd& theta) const = 0;

  /// Smallest q with CDF(q; theta) >= p; the exact inverse CDF for
  /// continuous support. Requires 0 < p < 1.
  virtual double quantile(const Eigen::VectorXd& theta, double p) const = 0;

  /// One random draw from the distribution.
  virtual double sample(const Eigen::VectorXd& theta, std::mt19937_64& rng) const = 0;

  /// Predictor-scale offsets from a weighted response: parameter 0 from the
  /// weighted mean, parameter 1 from the weighted spread (sd for normal,
  /// method-of-moments dispersion for nbinom). Used to initialize the
  /// additive predictors.
  virtual Eigen::VectorXd initial_offsets(const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& w) const = 0;

  /// Element-wise link inversion of a predictor vector (one per parameter).
  Eigen::VectorXd theta_from_eta(const Eigen::VectorXd& eta) const;

protected:
  ResponseFamily(std::string name, std::vector<Link> links, Support support)
      : name_(std::move(name)), links_(std::move(links)), support_(support) {}

private:
  std::string name_;
  std::vector<Link> links_;
  Support support_;
};

class NormalFamily final : public ResponseFamily {
public:
  NormalFamily();
  double log_density(double y, const Eigen::VectorXd& theta) const override;
  double gradient(double y, const Eigen::VectorXd& theta, int k) const override;
  double cdf(double y, const Eigen::VectorXd& theta) const override;
  double quantile(const Eigen::VectorXd& theta, double p) const override;
  double sample(const Eigen::VectorXd& theta, std::mt19937_64& rng) const override;
  Eigen::VectorXd initial_offsets(const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w) const override;
};

// Mean-dispersion negative binomial: mean mu = theta_0, dispersion
// sigma = theta_1, Var(Y) = mu + mu^2 / sigma.
class NegativeBinomialFamily final : public ResponseFamily {
public:
  NegativeBinomialFamily();
  double log_density(double y, const Eigen::VectorXd& theta) const override;
  double gradient(double y, const Eigen::VectorXd& theta, int k) const override;
  double cdf(double y, const Eigen::VectorXd& theta) const override;
  double quantile(const Eigen::VectorXd& theta, double p) const override;
  double sample(const Eigen::VectorXd& theta, std::mt19937_64& rng) const override;
  Eigen::VectorXd initial_offsets(const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& w) const override;
};

/// Factory keyed by the names accepted in CLI configs: "normal", "nbinom".
std::unique_ptr<ResponseFamily> make_family(const std::string& name);

}  // namespace msboost

#endif  // MSBOOST_FAMILIES_HPP
