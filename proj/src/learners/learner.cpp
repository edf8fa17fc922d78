#include "firesl/learners/learner.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "firesl/errors.hpp"
#include "firesl/learners.hpp"
#include "firesl/text.hpp"

namespace firesl::learn {

void Learner::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  std::uint64_t seed) {
  if (X.rows() < 2)
    throw DegenerateDesign(type() + ": need at least 2 training rows");
  if (X.rows() != y.size())
    throw DegenerateDesign(type() + ": X/y row count mismatch");
  if (!X.allFinite() || !y.allFinite())
    throw DegenerateDesign(type() + ": training data contains non-finite values");
  n_features_ = X.cols();
  do_fit(X, y, seed);
  fitted_ = true;
}

Eigen::VectorXd Learner::predict(const Eigen::MatrixXd& X) const {
  if (!fitted_) throw NotFitted(type() + ": predict before fit");
  if (X.cols() != n_features_)
    throw DegenerateDesign(type() + ": expected " + std::to_string(n_features_) +
                           " features, got " + std::to_string(X.cols()));
  if (X.rows() == 0) return Eigen::VectorXd(0);
  if (!X.allFinite())
    throw DegenerateDesign(type() + ": prediction data contains non-finite values");
  return do_predict(X);
}

void Learner::save(std::ostream& out) const {
  if (!fitted_) throw NotFitted(type() + ": cannot save unfitted learner");
  out << "learner v1 " << type() << '\n';
  out << "name " << (name_.empty() ? type() : name_) << '\n';
  out << "features " << n_features_ << '\n';
  save_state(out);
  out << "end\n";
}

namespace {

int param_int(const Params& params, const std::string& key, int dflt) {
  auto it = params.find(key);
  return it == params.end()
             ? dflt
             : static_cast<int>(parse_int(it->second, "param " + key));
}

double param_double(const Params& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : parse_double(it->second, "param " + key);
}

}  // namespace

std::unique_ptr<Learner> make_learner(const std::string& type,
                                      const Params& params) {
  std::unique_ptr<Learner> out;
  if (type == "elastic_net") {
    out = std::make_unique<PenalizedLinear>(type, param_double(params, "penalty", 1.0),
                                            param_double(params, "mixing", 0.5));
  } else if (type == "ridge") {
    out = std::make_unique<PenalizedLinear>(type, param_double(params, "penalty", 1.0), 0.0);
  } else if (type == "lasso") {
    out = std::make_unique<PenalizedLinear>(type, param_double(params, "penalty", 1.0), 1.0);
  } else if (type == "decision_tree") {
    out = std::make_unique<DecisionTree>(param_int(params, "max_depth", -1),
                                         param_int(params, "min_samples_split", 2));
  } else if (type == "knn") {
    out = std::make_unique<KnnRegressor>(param_int(params, "k", 5));
  } else if (type == "gradient_boost") {
    out = std::make_unique<GradientBoost>(false, param_int(params, "trees", 100),
                                          param_double(params, "shrinkage", 0.1),
                                          param_int(params, "depth", 3), 0.0, 0.0);
  } else if (type == "reg_gradient_boost") {
    out = std::make_unique<GradientBoost>(true, param_int(params, "trees", 100),
                                          param_double(params, "shrinkage", 0.1),
                                          param_int(params, "depth", 3),
                                          param_double(params, "lambda", 1.0),
                                          param_double(params, "gamma", 0.0));
  } else if (type == "bagging") {
    out = std::make_unique<TreeEnsemble>(TreeEnsemble::Kind::Bagging,
                                         param_int(params, "trees", 10));
  } else if (type == "random_forest") {
    out = std::make_unique<TreeEnsemble>(TreeEnsemble::Kind::RandomForest,
                                         param_int(params, "trees", 100));
  } else if (type == "extra_trees") {
    out = std::make_unique<TreeEnsemble>(TreeEnsemble::Kind::ExtraTrees,
                                         param_int(params, "trees", 100));
  } else if (type == "mlp") {
    MlpSpec spec = mlp_spec();
    spec.epochs = param_int(params, "epochs", spec.epochs);
    spec.batch = param_int(params, "batch", spec.batch);
    spec.learning_rate = param_double(params, "lr", spec.learning_rate);
    const int width = param_int(params, "width", 64);
    const int layers = param_int(params, "layers", spec.hidden_layers);
    spec.hidden_layers = layers;
    spec.hidden_widths.assign(static_cast<std::size_t>(layers), width);
    out = std::make_unique<MlpRegressor>(spec);
  } else {
    throw ConfigError("unknown learner type '" + type + "'");
  }
  out->set_name(type);
  return out;
}

std::unique_ptr<Learner> load_learner(std::istream& in) {
  std::string tag, version, type;
  in >> tag >> version >> type;
  if (tag != "learner" || version != "v1")
    throw ParseError("bad learner artifact header");
  std::string key, name;
  Eigen::Index features = 0;
  in >> key >> name;
  if (key != "name") throw ParseError("expected 'name'");
  in >> key >> features;
  if (key != "features") throw ParseError("expected 'features'");

  auto learner = make_learner(type);
  learner->set_name(name);
  learner->load_state(in);
  in >> key;
  if (key != "end") throw ParseError("expected 'end'");
  learner->fitted_ = true;
  learner->n_features_ = features;
  return learner;
}

std::unique_ptr<Learner> load_learner_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return load_learner(in);
}

void save_learner_file(const Learner& learner, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  learner.save(out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

LearnerLibrary::LearnerLibrary(std::vector<LearnerSpec> specs)
    : specs_(std::move(specs)) {
  if (specs_.size() < 2)
    throw ConfigError("learner library needs at least 2 learners");
  for (std::size_t a = 0; a < specs_.size(); ++a)
    for (std::size_t b = a + 1; b < specs_.size(); ++b)
      if (specs_[a].name == specs_[b].name)
        throw ConfigError("duplicate learner name '" + specs_[a].name + "'");
}

std::unique_ptr<Learner> LearnerLibrary::instantiate(std::size_t l) const {
  auto learner = make_learner(specs_[l].type, specs_[l].params);
  learner->set_name(specs_[l].name);
  return learner;
}

std::vector<std::string> LearnerLibrary::names() const {
  std::vector<std::string> out;
  out.reserve(specs_.size());
  for (const auto& s : specs_) out.push_back(s.name);
  return out;
}

LearnerLibrary default_library() {
  std::vector<LearnerSpec> specs;
  for (const char* type :
       {"elastic_net", "decision_tree", "ridge", "lasso", "knn",
        "gradient_boost", "reg_gradient_boost", "bagging", "random_forest",
        "extra_trees", "mlp"})
    specs.push_back(LearnerSpec{type, type, {}});
  return LearnerLibrary(std::move(specs));
}

MlpSpec mlp_spec() { return MlpSpec{}; }

void Standardizer::fit(const Eigen::MatrixXd& X) {
  mean_ = X.colwise().mean();
  sd_.resize(X.cols());
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - mean_(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    sd_(j) = sd > 0.0 ? sd : 1.0;
  }
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& X) const {
  return (X.rowwise() - mean_.transpose()).array().rowwise() /
         sd_.transpose().array();
}

void Standardizer::save(std::ostream& out) const {
  out << "scaler " << mean_.size() << '\n';
  for (Eigen::Index j = 0; j < mean_.size(); ++j)
    out << format_double(mean_(j)) << ' ' << format_double(sd_(j)) << '\n';
}

void Standardizer::load(std::istream& in) {
  std::string tag;
  Eigen::Index p = 0;
  in >> tag >> p;
  if (tag != "scaler") throw ParseError("expected 'scaler' block");
  mean_.resize(p);
  sd_.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) in >> mean_(j) >> sd_(j);
  if (!in) throw ParseError("truncated scaler block");
}

}  // namespace firesl::learn
