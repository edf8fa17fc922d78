#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace firesl::learn {

// Uniform fit/predict abstraction over the base regression algorithms.
// A Learner instance carries its configuration from construction and its
// fitted state after fit(); predict() before fit() throws NotFitted.
// fit() is deterministic given (data, seed). Fitted learners are treated as
// immutable and may be shared across threads.
class Learner {
 public:
  virtual ~Learner() = default;

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  virtual std::string type() const = 0;

  // Configuration identity (type + hyperparameters, not the display name).
  // Tasks derive their RNG streams from this, so two identically configured
  // learners produce identical fits.
  virtual std::string fingerprint() const = 0;

  // Fresh unfitted copy of this configuration.
  virtual std::unique_ptr<Learner> clone_config() const = 0;

  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
           std::uint64_t seed);
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;

  bool fitted() const { return fitted_; }
  Eigen::Index n_features() const { return n_features_; }

  // Per-feature impurity importances for tree ensembles (normalized to sum
  // 1). Returns false for non-tree learners.
  virtual bool impurity_importances(Eigen::VectorXd& out) const {
    (void)out;
    return false;
  }

  void save(std::ostream& out) const;

 protected:
  virtual void do_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      std::uint64_t seed) = 0;
  virtual Eigen::VectorXd do_predict(const Eigen::MatrixXd& X) const = 0;
  virtual void save_state(std::ostream& out) const = 0;
  virtual void load_state(std::istream& in) = 0;

  friend std::unique_ptr<Learner> load_learner(std::istream& in);

 private:
  std::string name_;
  bool fitted_ = false;
  Eigen::Index n_features_ = 0;
};

using Params = std::map<std::string, std::string>;

// Factory over canonical type tags: elastic_net, ridge, lasso,
// decision_tree, knn, gradient_boost, reg_gradient_boost, bagging,
// random_forest, extra_trees, mlp.
std::unique_ptr<Learner> make_learner(const std::string& type,
                                      const Params& params = {});

std::unique_ptr<Learner> load_learner(std::istream& in);
std::unique_ptr<Learner> load_learner_file(const std::string& path);
void save_learner_file(const Learner& learner, const std::string& path);

// One configured entry of the learner library.
struct LearnerSpec {
  std::string name;
  std::string type;
  Params params;
};

// Ordered collection of learner configurations (names unique, L >= 2).
class LearnerLibrary {
 public:
  explicit LearnerLibrary(std::vector<LearnerSpec> specs);

  std::size_t size() const { return specs_.size(); }
  const LearnerSpec& spec(std::size_t l) const { return specs_[l]; }
  const std::vector<LearnerSpec>& specs() const { return specs_; }

  std::unique_ptr<Learner> instantiate(std::size_t l) const;
  std::vector<std::string> names() const;

 private:
  std::vector<LearnerSpec> specs_;
};

// The canonical 11-learner library.
LearnerLibrary default_library();

// Canonical multilayer-perceptron configuration.
struct MlpSpec {
  int hidden_layers = 4;
  std::vector<int> hidden_widths = {64, 64, 64, 64};
  std::string activation = "relu";
  std::string loss = "squared_error";
  std::string optimizer = "adam";
  int epochs = 200;
  int batch = 115;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
};

MlpSpec mlp_spec();

// Column-wise standardization fitted on training data. Zero-variance
// columns get sd 1 so they standardize to exactly zero.
class Standardizer {
 public:
  void fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& sd() const { return sd_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd sd_;
};

}  // namespace firesl::learn
