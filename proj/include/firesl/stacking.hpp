#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "firesl/dataset.hpp"
#include "firesl/learners/learner.hpp"

namespace firesl::stack {

// Partition of rows 1..n into K folds (labels 0..K-1), a pure function of
// (n, K, seed); fold sizes differ by at most one.
struct FoldAssignment {
  int K = 10;
  std::uint64_t seed = 0;
  std::vector<int> fold;  // per row

  std::vector<std::vector<Eigen::Index>> fold_rows() const;
};

FoldAssignment make_folds(Eigen::Index n, int K, std::uint64_t seed);

// Out-of-fold meta-feature matrix: Z(i, l) is learner l's prediction at row
// i from a fit that excluded fold(i). Coordinates and response travel along
// for the stage-2 spatial fit.
struct MetaFeatures {
  Eigen::MatrixXd Z;  // n x L
  std::vector<std::string> learner_names;
  std::vector<Site> sites;
  Eigen::VectorXd y;
  DatasetMeta meta;
};

// `threads` parallelizes over (fold, learner) tasks; results are identical
// for any thread count. Per-task seeds derive from the learner's
// configuration fingerprint and the held-out row set, so identical configs
// produce identical columns and fold relabeling changes nothing.
MetaFeatures oof_matrix(const learn::LearnerLibrary& library,
                        const PixelDataset& data, const FoldAssignment& folds,
                        std::uint64_t seed, int threads = 1);

// Full-data refit for prediction: every learner fitted once on all training
// rows; fitted values at the training sites and predictions at test sites.
struct RefitResult {
  Eigen::MatrixXd Z_train;  // n x L fitted values
  Eigen::MatrixXd Z_test;   // m x L predictions
  std::vector<std::string> learner_names;
  std::vector<std::unique_ptr<learn::Learner>> fitted;
};

RefitResult refit_full(const learn::LearnerLibrary& library,
                       const PixelDataset& train, const Eigen::MatrixXd& test_X,
                       std::uint64_t seed, int threads = 1);

// Pearson correlations between meta-feature columns; throws ConstantColumn
// if any column has zero variance.
Eigen::MatrixXd learner_correlations(const MetaFeatures& z);

// Columnar persistence: id,x,y,dnbr,z_<learner>...
void save_meta_features(const MetaFeatures& z, const std::string& path);
MetaFeatures load_meta_features(const std::string& path);

}  // namespace firesl::stack
