#include "firesl/learners/mlp.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "firesl/errors.hpp"
#include "firesl/rng.hpp"
#include "firesl/text.hpp"

namespace firesl::learn {

MlpRegressor::MlpRegressor(MlpSpec spec) : spec_(std::move(spec)) {
  if (spec_.hidden_layers < 1 ||
      spec_.hidden_widths.size() != static_cast<std::size_t>(spec_.hidden_layers))
    throw ConfigError("mlp hidden layer widths inconsistent");
}

std::string MlpRegressor::fingerprint() const {
  std::ostringstream ss;
  ss << "mlp;widths=";
  for (std::size_t i = 0; i < spec_.hidden_widths.size(); ++i)
    ss << (i ? "-" : "") << spec_.hidden_widths[i];
  ss << ";epochs=" << spec_.epochs << ";batch=" << spec_.batch
     << ";lr=" << format_double(spec_.learning_rate);
  return ss.str();
}

std::unique_ptr<Learner> MlpRegressor::clone_config() const {
  auto c = std::make_unique<MlpRegressor>(spec_);
  c->set_name(name());
  return c;
}

void MlpRegressor::do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          std::uint64_t seed) {
  scaler_.fit(X);
  const Eigen::MatrixXd Z = scaler_.transform(X);
  const Eigen::Index n = Z.rows(), p = Z.cols();

  y_mean_ = y.mean();
  const double var = (y.array() - y_mean_).square().sum() / static_cast<double>(n);
  constant_response_ = !(var > 0.0);
  if (constant_response_) {
    y_mean_ = y(0);  // exact, not the rounded mean
    weights_.clear();
    biases_.clear();
    return;
  }
  y_sd_ = std::sqrt(var);
  const Eigen::VectorXd t = (y.array() - y_mean_) / y_sd_;

  // Layer sizes: p -> widths... -> 1.
  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(p));
  for (int w : spec_.hidden_widths) sizes.push_back(w);
  sizes.push_back(1);
  const std::size_t n_layers = sizes.size() - 1;

  Rng rng(derive_seed(seed, {hash_string(fingerprint())}));
  weights_.clear();
  biases_.clear();
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int fan_in = sizes[l], fan_out = sizes[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    Eigen::MatrixXd W(fan_out, fan_in);
    for (Eigen::Index i = 0; i < W.rows(); ++i)
      for (Eigen::Index j = 0; j < W.cols(); ++j)
        W(i, j) = rng.uniform(-bound, bound);
    weights_.push_back(std::move(W));
    biases_.push_back(Eigen::VectorXd::Zero(fan_out));
  }

  // Adam state
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  for (std::size_t l = 0; l < n_layers; ++l) {
    mW.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    vW.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    mb.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
    vb.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
  }
  const double b1 = spec_.adam_beta1, b2 = spec_.adam_beta2, eps = 1e-8;
  const double lr = spec_.learning_rate;
  long step = 0;

  const Eigen::Index batch = std::min<Eigen::Index>(spec_.batch, n);
  std::vector<Eigen::MatrixXd> acts(n_layers + 1);  // pre-activation inputs
  std::vector<Eigen::MatrixXd> grads_W(n_layers);
  std::vector<Eigen::VectorXd> grads_b(n_layers);

  for (int epoch = 0; epoch < spec_.epochs; ++epoch) {
    const auto order = rng.permutation(static_cast<std::size_t>(n));
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index b = std::min(batch, n - start);
      Eigen::MatrixXd Xb(b, p);
      Eigen::VectorXd tb(b);
      for (Eigen::Index i = 0; i < b; ++i) {
        Xb.row(i) = Z.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
        tb(i) = t(static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + i)]));
      }

      // Forward: acts[l] holds the input of layer l (batch x fan_in).
      acts[0] = Xb;
      for (std::size_t l = 0; l < n_layers; ++l) {
        Eigen::MatrixXd pre = acts[l] * weights_[l].transpose();
        pre.rowwise() += biases_[l].transpose();
        acts[l + 1] = (l + 1 < n_layers) ? pre.cwiseMax(0.0) : pre;
      }

      // Backward: dL/dpre for the output, MSE = mean((pred-t)^2).
      Eigen::MatrixXd delta =
          2.0 / static_cast<double>(b) * (acts[n_layers] - tb);
      for (std::size_t l = n_layers; l-- > 0;) {
        grads_W[l] = delta.transpose() * acts[l];
        grads_b[l] = delta.colwise().sum().transpose();
        if (l > 0) {
          delta = (delta * weights_[l]).eval();
          // ReLU mask of the layer-l input activations
          delta = delta.array() * (acts[l].array() > 0.0).cast<double>();
        }
      }

      ++step;
      const double corr1 = 1.0 - std::pow(b1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(b2, static_cast<double>(step));
      for (std::size_t l = 0; l < n_layers; ++l) {
        mW[l] = b1 * mW[l] + (1.0 - b1) * grads_W[l];
        vW[l] = b2 * vW[l] + (1.0 - b2) * grads_W[l].array().square().matrix();
        mb[l] = b1 * mb[l] + (1.0 - b1) * grads_b[l];
        vb[l] = b2 * vb[l] + (1.0 - b2) * grads_b[l].array().square().matrix();
        weights_[l].array() -= lr * (mW[l].array() / corr1) /
                               ((vW[l].array() / corr2).sqrt() + eps);
        biases_[l].array() -= lr * (mb[l].array() / corr1) /
                              ((vb[l].array() / corr2).sqrt() + eps);
      }
    }
  }
}

Eigen::VectorXd MlpRegressor::forward(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd h = X;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd pre = h * weights_[l].transpose();
    pre.rowwise() += biases_[l].transpose();
    h = (l + 1 < weights_.size()) ? pre.cwiseMax(0.0) : pre;
  }
  return h.col(0);
}

Eigen::VectorXd MlpRegressor::do_predict(const Eigen::MatrixXd& X) const {
  if (constant_response_)
    return Eigen::VectorXd::Constant(X.rows(), y_mean_);
  const Eigen::VectorXd z = forward(scaler_.transform(X));
  return (z.array() * y_sd_ + y_mean_).matrix();
}

void MlpRegressor::save_state(std::ostream& out) const {
  out << "spec " << spec_.epochs << ' ' << spec_.batch << ' '
      << format_double(spec_.learning_rate) << ' ' << spec_.hidden_layers;
  for (int w : spec_.hidden_widths) out << ' ' << w;
  out << '\n';
  out << "response " << format_double(y_mean_) << ' ' << format_double(y_sd_)
      << ' ' << (constant_response_ ? 1 : 0) << '\n';
  scaler_.save(out);
  out << "layers " << weights_.size() << '\n';
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out << weights_[l].rows() << ' ' << weights_[l].cols() << '\n';
    for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < weights_[l].cols(); ++j)
        out << format_double(weights_[l](i, j)) << ' ';
      out << '\n';
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i)
      out << format_double(biases_[l](i)) << ' ';
    out << '\n';
  }
}

void MlpRegressor::load_state(std::istream& in) {
  std::string tag;
  in >> tag >> spec_.epochs >> spec_.batch >> spec_.learning_rate >>
      spec_.hidden_layers;
  spec_.hidden_widths.assign(static_cast<std::size_t>(spec_.hidden_layers), 0);
  for (int& w : spec_.hidden_widths) in >> w;
  int constant = 0;
  in >> tag >> y_mean_ >> y_sd_ >> constant;
  constant_response_ = constant != 0;
  scaler_.load(in);
  std::size_t n_layers = 0;
  in >> tag >> n_layers;
  if (tag != "layers") throw ParseError("expected 'layers'");
  weights_.assign(n_layers, {});
  biases_.assign(n_layers, {});
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::Index r = 0, c = 0;
    in >> r >> c;
    weights_[l].resize(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) in >> weights_[l](i, j);
    biases_[l].resize(r);
    for (Eigen::Index i = 0; i < r; ++i) in >> biases_[l](i);
  }
  if (!in) throw ParseError("truncated mlp state");
}

}  // namespace firesl::learn
