#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "firesl/dataset.hpp"
#include "firesl/grid.hpp"

namespace firesl {

// Repeated pre-ignition measurements of one variable at one pixel;
// t counts days before ignition (t = 0 is ignition day).
struct TemporalSeries {
  std::int64_t pixel_id = 0;
  std::vector<double> t;
  std::vector<double> value;
};

// Least-squares summary of a series: value at t = 0 and per-day slope.
// Note t runs backwards in time, so a positive trend means larger values
// further before ignition.
struct TrendSummary {
  double current = 0.0;
  double trend = 0.0;
};

// Drops covariate columns whose missing fraction strictly exceeds
// `threshold`; surviving columns keep their order and values.
PixelDataset drop_sparse_covariates(const PixelDataset& dataset,
                                    double threshold = 0.28);

// Replaces each missing entry with the unweighted mean of the column's k
// spatially nearest observed pixels. Ties at the k-th distance go to the
// lower site id. Columns are imputed independently from observed donors.
PixelDataset knn_impute(const PixelDataset& dataset, int k = 10);

// OLS of value on t. A single observation (or all-equal t) yields
// current = mean(value), trend = 0.
TrendSummary fit_trend(const TemporalSeries& series);

// Long-format reader: columns `id, t_days_before, variable, value`.
// Returns series grouped per (variable, pixel).
std::map<std::string, std::vector<TemporalSeries>> load_temporal(
    const std::string& path);

// One step of the preprocessing pipeline, parsed from the manifest.
struct PipelineStep {
  std::string op;  // drop_sparse | impute | trend | resample
  std::map<std::string, std::string> params;
};

std::vector<PipelineStep> load_manifest(const std::string& path);

// Applies dataset-level steps in order. `temporal` supplies series for
// `trend` steps (keyed by variable name); pixels without a series get
// missing entries in the derived columns so a later impute step can fill
// them. Grid `resample` steps are handled by the caller (they do not touch
// the pixel table).
PixelDataset run_pipeline(const PixelDataset& dataset,
                          const std::vector<PipelineStep>& steps,
                          const std::map<std::string, std::vector<TemporalSeries>>& temporal);

}  // namespace firesl
