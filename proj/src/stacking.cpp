#include "firesl/stacking.hpp"

#include <algorithm>
#include <cmath>

#include "firesl/errors.hpp"
#include "firesl/parallel.hpp"
#include "firesl/rng.hpp"

namespace firesl::stack {

std::vector<std::vector<Eigen::Index>> FoldAssignment::fold_rows() const {
  std::vector<std::vector<Eigen::Index>> rows(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < fold.size(); ++i)
    rows[static_cast<std::size_t>(fold[i])].push_back(static_cast<Eigen::Index>(i));
  return rows;
}

FoldAssignment make_folds(Eigen::Index n, int K, std::uint64_t seed) {
  if (K < 2) throw TooFewRows("make_folds needs K >= 2");
  if (n < K)
    throw TooFewRows("make_folds needs n >= K (" + std::to_string(n) + " < " +
                     std::to_string(K) + ")");
  FoldAssignment out;
  out.K = K;
  out.seed = seed;
  out.fold.resize(static_cast<std::size_t>(n));
  Rng rng(derive_seed(seed, {hash_string("folds"), static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(K)}));
  const auto order = rng.permutation(static_cast<std::size_t>(n));
  // Round-robin over a random permutation: uniform and balanced to +-1.
  for (std::size_t r = 0; r < order.size(); ++r)
    out.fold[order[r]] = static_cast<int>(r % static_cast<std::size_t>(K));
  return out;
}

namespace {

// Seed for one (learner, training-subset) fit. Hashing the held-out row set
// (not the fold label) makes fold relabeling unobservable; hashing the
// fingerprint (not the display name) makes identical configs identical.
std::uint64_t task_seed(std::uint64_t master, const learn::Learner& learner,
                        const std::vector<Eigen::Index>& held_out) {
  std::uint64_t h = hash_string(learner.fingerprint());
  for (Eigen::Index r : held_out) {
    std::uint64_t s = static_cast<std::uint64_t>(r) + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s) + (h << 6) + (h >> 2);
  }
  return derive_seed(master, {hash_string("stack_fit"), h});
}

}  // namespace

MetaFeatures oof_matrix(const learn::LearnerLibrary& library,
                        const PixelDataset& data, const FoldAssignment& folds,
                        std::uint64_t seed, int threads) {
  if (!data.fully_observed())
    throw DegenerateDesign("oof_matrix requires fully observed covariates");
  if (static_cast<Eigen::Index>(folds.fold.size()) != data.n())
    throw DegenerateDesign("fold assignment size mismatch");
  if (!data.y().allFinite())
    throw DegenerateDesign("oof_matrix requires observed responses");

  const Eigen::Index n = data.n();
  const std::size_t L = library.size();
  const int K = folds.K;
  const auto by_fold = folds.fold_rows();
  for (int k = 0; k < K; ++k)
    if (by_fold[static_cast<std::size_t>(k)].empty())
      throw TooFewRows("fold " + std::to_string(k) + " is empty");

  // Pre-split train/test per fold.
  std::vector<std::vector<Eigen::Index>> train_rows(static_cast<std::size_t>(K));
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k)
      if (folds.fold[static_cast<std::size_t>(i)] != k)
        train_rows[static_cast<std::size_t>(k)].push_back(i);

  MetaFeatures out;
  out.Z.resize(n, static_cast<Eigen::Index>(L));
  out.learner_names = library.names();
  out.sites = data.sites();
  out.y = data.y();
  out.meta = data.meta();

  struct Task {
    std::size_t l;
    int k;
  };
  std::vector<Task> tasks;
  tasks.reserve(L * static_cast<std::size_t>(K));
  for (std::size_t l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) tasks.push_back({l, k});

  std::string first_error;
  std::mutex error_mutex;
  parallel_for_chunks(
      tasks.size(), threads,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
          const auto [l, k] = tasks[t];
          const auto& train = train_rows[static_cast<std::size_t>(k)];
          const auto& test = by_fold[static_cast<std::size_t>(k)];
          try {
            auto learner = library.instantiate(l);
            Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train.size()), data.p());
            Eigen::VectorXd ytr(static_cast<Eigen::Index>(train.size()));
            for (std::size_t r = 0; r < train.size(); ++r) {
              Xtr.row(static_cast<Eigen::Index>(r)) = data.X().row(train[r]);
              ytr(static_cast<Eigen::Index>(r)) = data.y()(train[r]);
            }
            learner->fit(Xtr, ytr, task_seed(seed, *learner, test));
            Eigen::MatrixXd Xte(static_cast<Eigen::Index>(test.size()), data.p());
            for (std::size_t r = 0; r < test.size(); ++r)
              Xte.row(static_cast<Eigen::Index>(r)) = data.X().row(test[r]);
            const Eigen::VectorXd pred = learner->predict(Xte);
            for (std::size_t r = 0; r < test.size(); ++r)
              out.Z(test[r], static_cast<Eigen::Index>(l)) =
                  pred(static_cast<Eigen::Index>(r));
          } catch (const Error& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error.empty())
              first_error = "learner '" + library.spec(l).name + "' fold " +
                            std::to_string(k) + ": " + e.what();
          }
        }
      },
      1);  // one (fold, learner) task per chunk

  // A failed fold/learner aborts the whole matrix; silently dropping a
  // column would change the meta-model's meaning.
  if (!first_error.empty()) throw DegenerateDesign(first_error);
  if (!out.Z.allFinite())
    throw DegenerateDesign("meta-feature matrix contains non-finite entries");
  return out;
}

RefitResult refit_full(const learn::LearnerLibrary& library,
                       const PixelDataset& train, const Eigen::MatrixXd& test_X,
                       std::uint64_t seed, int threads) {
  if (!train.fully_observed())
    throw DegenerateDesign("refit_full requires fully observed covariates");
  if (test_X.cols() > 0 && test_X.cols() != train.p())
    throw DegenerateDesign("test covariate width mismatch");

  const Eigen::Index n = train.n();
  const Eigen::Index m = test_X.rows();
  const std::size_t L = library.size();

  RefitResult out;
  out.Z_train.resize(n, static_cast<Eigen::Index>(L));
  out.Z_test.resize(m, static_cast<Eigen::Index>(L));
  out.learner_names = library.names();
  out.fitted.resize(L);

  std::vector<Eigen::Index> no_rows;  // full fit holds out nothing
  std::string first_error;
  std::mutex error_mutex;
  parallel_for_chunks(
      L, threads,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t l = begin; l < end; ++l) {
          try {
            auto learner = library.instantiate(l);
            learner->fit(train.X(), train.y(), task_seed(seed, *learner, no_rows));
            out.Z_train.col(static_cast<Eigen::Index>(l)) = learner->predict(train.X());
            if (m > 0)
              out.Z_test.col(static_cast<Eigen::Index>(l)) = learner->predict(test_X);
            out.fitted[l] = std::move(learner);
          } catch (const Error& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (first_error.empty())
              first_error = "learner '" + library.spec(l).name + "' full fit: " + e.what();
          }
        }
      },
      1);
  if (!first_error.empty()) throw DegenerateDesign(first_error);
  return out;
}

Eigen::MatrixXd learner_correlations(const MetaFeatures& z) {
  const Eigen::Index n = z.Z.rows(), L = z.Z.cols();
  Eigen::MatrixXd centered = z.Z.rowwise() - z.Z.colwise().mean();
  Eigen::VectorXd norm(L);
  for (Eigen::Index l = 0; l < L; ++l) {
    norm(l) = centered.col(l).norm();
    if (norm(l) == 0.0)
      throw ConstantColumn("meta-feature column '" +
                           z.learner_names[static_cast<std::size_t>(l)] +
                           "' is constant");
  }
  Eigen::MatrixXd corr(L, L);
  for (Eigen::Index a = 0; a < L; ++a) {
    corr(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < L; ++b) {
      const double c = centered.col(a).dot(centered.col(b)) / (norm(a) * norm(b));
      corr(a, b) = corr(b, a) = c;
    }
  }
  (void)n;
  return corr;
}

void save_meta_features(const MetaFeatures& z, const std::string& path) {
  std::vector<std::string> columns;
  columns.reserve(z.learner_names.size());
  for (const auto& name : z.learner_names) columns.push_back("z_" + name);
  PixelDataset ds(z.sites, z.Z, z.y, std::move(columns), z.meta);
  save_dataset(ds, path);
}

MetaFeatures load_meta_features(const std::string& path) {
  PixelDataset ds = load_dataset(path);
  MetaFeatures out;
  out.Z = ds.X();
  out.sites = ds.sites();
  out.y = ds.y();
  out.meta = ds.meta();
  for (const auto& c : ds.columns()) {
    if (c.rfind("z_", 0) != 0)
      throw SchemaMismatch("'" + path + "': meta-feature column '" + c +
                           "' must be named z_<learner>");
    out.learner_names.push_back(c.substr(2));
  }
  return out;
}

}  // namespace firesl::stack
