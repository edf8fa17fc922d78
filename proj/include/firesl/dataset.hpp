#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace firesl {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Site {
  std::int64_t id = 0;
  double x = 0.0;
  double y = 0.0;
};

// Sidecar metadata; `distance_unit` documents the unit phi is expressed in.
struct DatasetMeta {
  std::string distance_unit = "unitless";
  std::string response_name = "dnbr";
};

// Immutable-by-convention container for n sites with covariates X (n x p,
// named columns), response y (dNBR scale), and an observed-mask for X.
// Response entries may be NaN (unlabeled prediction sites); observed X
// entries must be finite.
class PixelDataset {
 public:
  PixelDataset() = default;
  PixelDataset(std::vector<Site> sites, Eigen::MatrixXd X, Eigen::VectorXd y,
               std::vector<std::string> columns, Mask observed,
               DatasetMeta meta = {});

  // Fully observed construction.
  PixelDataset(std::vector<Site> sites, Eigen::MatrixXd X, Eigen::VectorXd y,
               std::vector<std::string> columns, DatasetMeta meta = {});

  Eigen::Index n() const { return X_.rows(); }
  Eigen::Index p() const { return X_.cols(); }

  const std::vector<Site>& sites() const { return sites_; }
  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& y() const { return y_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const Mask& observed() const { return observed_; }
  const DatasetMeta& meta() const { return meta_; }

  bool fully_observed() const { return observed_.all(); }
  Eigen::Index column_index(const std::string& name) const;  // -1 if absent

  // n x 2 matrix of coordinates, one row per site.
  Eigen::MatrixXd coords() const;

  // Missing fraction of one covariate column.
  double missing_fraction(Eigen::Index j) const;

  PixelDataset with_columns(Eigen::MatrixXd X, std::vector<std::string> columns,
                            Mask observed) const;
  PixelDataset subset(const std::vector<Eigen::Index>& rows) const;

 private:
  void validate() const;

  std::vector<Site> sites_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  std::vector<std::string> columns_;
  Mask observed_;
  DatasetMeta meta_;
};

// Columnar text I/O, header `id,x,y,dnbr,<covariates...>`; empty field =
// missing. save(load(f)) preserves finite doubles bit-exactly. A `.meta`
// sidecar (key=value lines) travels with the data file.
PixelDataset load_dataset(const std::string& path);
void save_dataset(const PixelDataset& dataset, const std::string& path);

}  // namespace firesl
