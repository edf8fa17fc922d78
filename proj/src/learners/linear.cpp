#include "firesl/learners/linear.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "firesl/errors.hpp"
#include "firesl/text.hpp"

namespace firesl::learn {

PenalizedLinear::PenalizedLinear(std::string type_tag, double penalty,
                                 double mixing)
    : type_tag_(std::move(type_tag)), penalty_(penalty), mixing_(mixing) {
  if (penalty_ < 0.0) throw ConfigError("penalty must be nonnegative");
  if (mixing_ < 0.0 || mixing_ > 1.0) throw ConfigError("mixing must lie in [0,1]");
}

std::string PenalizedLinear::fingerprint() const {
  std::ostringstream ss;
  ss << "penalized_linear;penalty=" << format_double(penalty_)
     << ";mixing=" << format_double(mixing_);
  return ss.str();
}

std::unique_ptr<Learner> PenalizedLinear::clone_config() const {
  auto c = std::make_unique<PenalizedLinear>(type_tag_, penalty_, mixing_);
  c->set_name(name());
  return c;
}

void PenalizedLinear::do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             std::uint64_t) {
  scaler_.fit(X);
  const Eigen::MatrixXd Z = scaler_.transform(X);
  const Eigen::Index n = Z.rows(), p = Z.cols();
  intercept_ = y.mean();
  Eigen::VectorXd r = y.array() - intercept_;

  beta_ = Eigen::VectorXd::Zero(p);
  const double l1 = penalty_ * mixing_;
  const double l2 = penalty_ * (1.0 - mixing_);
  const double inv_n = 1.0 / static_cast<double>(n);

  // Standardized columns have unit population variance, so the coordinate
  // update denominator is 1 + l2 except for zero-variance columns.
  Eigen::VectorXd col_ms(p);
  for (Eigen::Index j = 0; j < p; ++j)
    col_ms(j) = Z.col(j).squaredNorm() * inv_n;

  const int max_sweeps = 100000;
  const double tol = 1e-13;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_ms(j) == 0.0) continue;
      const double old = beta_(j);
      double rho = Z.col(j).dot(r) * inv_n + col_ms(j) * old;
      double b;
      if (rho > l1)
        b = (rho - l1) / (col_ms(j) + l2);
      else if (rho < -l1)
        b = (rho + l1) / (col_ms(j) + l2);
      else
        b = 0.0;
      if (b != old) {
        r -= (b - old) * Z.col(j);
        beta_(j) = b;
        max_delta = std::max(max_delta, std::abs(b - old));
      }
    }
    if (max_delta <= tol * std::max(1.0, beta_.cwiseAbs().maxCoeff())) break;
  }
}

Eigen::VectorXd PenalizedLinear::do_predict(const Eigen::MatrixXd& X) const {
  return (scaler_.transform(X) * beta_).array() + intercept_;
}

void PenalizedLinear::save_state(std::ostream& out) const {
  out << "penalty " << format_double(penalty_) << " mixing "
      << format_double(mixing_) << '\n';
  scaler_.save(out);
  out << "beta " << beta_.size() << '\n';
  for (Eigen::Index j = 0; j < beta_.size(); ++j)
    out << format_double(beta_(j)) << '\n';
  out << "intercept " << format_double(intercept_) << '\n';
}

void PenalizedLinear::load_state(std::istream& in) {
  std::string tag;
  in >> tag >> penalty_ >> tag >> mixing_;
  scaler_.load(in);
  Eigen::Index p = 0;
  in >> tag >> p;
  if (tag != "beta") throw ParseError("expected 'beta' block");
  beta_.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) in >> beta_(j);
  in >> tag >> intercept_;
  if (!in || tag != "intercept") throw ParseError("truncated linear learner state");
}

}  // namespace firesl::learn
