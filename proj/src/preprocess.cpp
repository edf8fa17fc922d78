#include "firesl/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "firesl/errors.hpp"
#include "firesl/kdtree.hpp"
#include "firesl/text.hpp"

namespace firesl {

PixelDataset drop_sparse_covariates(const PixelDataset& dataset,
                                    double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw DegenerateInput("drop_sparse threshold must lie in (0,1)");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < dataset.p(); ++j)
    if (dataset.missing_fraction(j) <= threshold) keep.push_back(j);
  if (keep.empty())
    throw AllColumnsDropped("no covariate column at or below " +
                            format_double(threshold) + " missing");
  if (static_cast<Eigen::Index>(keep.size()) == dataset.p()) return dataset;

  Eigen::MatrixXd X(dataset.n(), static_cast<Eigen::Index>(keep.size()));
  Mask obs(dataset.n(), static_cast<Eigen::Index>(keep.size()));
  std::vector<std::string> columns;
  for (std::size_t c = 0; c < keep.size(); ++c) {
    X.col(static_cast<Eigen::Index>(c)) = dataset.X().col(keep[c]);
    obs.col(static_cast<Eigen::Index>(c)) = dataset.observed().col(keep[c]);
    columns.push_back(dataset.columns()[static_cast<std::size_t>(keep[c])]);
  }
  return dataset.with_columns(std::move(X), std::move(columns), std::move(obs));
}

PixelDataset knn_impute(const PixelDataset& dataset, int k) {
  if (k < 1) throw DegenerateInput("knn_impute needs k >= 1");
  if (dataset.fully_observed()) return dataset;

  Eigen::MatrixXd X = dataset.X();
  Mask obs = dataset.observed();
  const auto& sites = dataset.sites();

  for (Eigen::Index j = 0; j < dataset.p(); ++j) {
    std::vector<Eigen::Index> donors, missing;
    for (Eigen::Index i = 0; i < dataset.n(); ++i)
      (obs(i, j) ? donors : missing).push_back(i);
    if (missing.empty()) continue;
    if (static_cast<int>(donors.size()) < k)
      throw InsufficientDonors(
          "column '" + dataset.columns()[static_cast<std::size_t>(j)] + "' has " +
          std::to_string(donors.size()) + " observed values, need >= " +
          std::to_string(k));

    // Donors sorted by site id so that equal-distance ties resolve to the
    // lower id via the tree's index tie-break.
    std::sort(donors.begin(), donors.end(), [&](Eigen::Index a, Eigen::Index b) {
      return sites[static_cast<std::size_t>(a)].id < sites[static_cast<std::size_t>(b)].id;
    });
    std::vector<double> pts;
    pts.reserve(donors.size() * 2);
    for (Eigen::Index d : donors) {
      pts.push_back(sites[static_cast<std::size_t>(d)].x);
      pts.push_back(sites[static_cast<std::size_t>(d)].y);
    }
    KdTree tree(2, pts);
    for (Eigen::Index i : missing) {
      const double q[2] = {sites[static_cast<std::size_t>(i)].x,
                           sites[static_cast<std::size_t>(i)].y};
      auto nb = tree.nearest(q, static_cast<std::size_t>(k));
      double sum = 0.0;
      for (const auto& h : nb) sum += X(donors[h.index], j);
      X(i, j) = sum / static_cast<double>(nb.size());
      obs(i, j) = true;
    }
  }
  return dataset.with_columns(std::move(X), dataset.columns(), std::move(obs));
}

TrendSummary fit_trend(const TemporalSeries& series) {
  const std::size_t m = series.t.size();
  if (m == 0 || series.value.size() != m)
    throw EmptySeries("pixel " + std::to_string(series.pixel_id) +
                      " has no observations");
  double mean_t = 0.0, mean_v = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_t += series.t[i];
    mean_v += series.value[i];
  }
  mean_t /= static_cast<double>(m);
  mean_v /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dt = series.t[i] - mean_t;
    sxx += dt * dt;
    sxy += dt * (series.value[i] - mean_v);
  }
  TrendSummary out;
  if (sxx == 0.0) {
    out.current = mean_v;
    out.trend = 0.0;
  } else {
    out.trend = sxy / sxx;
    out.current = mean_v - out.trend * mean_t;
  }
  return out;
}

std::map<std::string, std::vector<TemporalSeries>> load_temporal(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("'" + path + "' is empty");
  auto header = split(trim(line), ',');
  if (header.size() != 4 || trim(header[0]) != "id" ||
      trim(header[1]) != "t_days_before" || trim(header[2]) != "variable" ||
      trim(header[3]) != "value")
    throw SchemaMismatch("'" + path + "': header must be id,t_days_before,variable,value");

  std::map<std::string, std::unordered_map<std::int64_t, TemporalSeries>> acc;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    auto sv = trim(line);
    if (sv.empty()) continue;
    auto f = split(sv, ',');
    if (f.size() != 4)
      throw ParseError("'" + path + "' row " + std::to_string(row) + ": expected 4 fields");
    const std::string where = path + " row " + std::to_string(row);
    const std::int64_t id = parse_int(trim(f[0]), where);
    const double t = parse_double(trim(f[1]), where);
    const std::string var{trim(f[2])};
    const double value = parse_double(trim(f[3]), where);
    auto& series = acc[var][id];
    series.pixel_id = id;
    for (double prev : series.t)
      if (prev == t)
        throw ParseError(where + ": duplicate t=" + format_double(t) +
                         " for pixel " + std::to_string(id) + " variable " + var);
    series.t.push_back(t);
    series.value.push_back(value);
  }

  std::map<std::string, std::vector<TemporalSeries>> out;
  for (auto& [var, by_pixel] : acc) {
    auto& list = out[var];
    list.reserve(by_pixel.size());
    for (auto& [id, s] : by_pixel) list.push_back(std::move(s));
    std::sort(list.begin(), list.end(),
              [](const TemporalSeries& a, const TemporalSeries& b) {
                return a.pixel_id < b.pixel_id;
              });
  }
  return out;
}

std::vector<PipelineStep> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<PipelineStep> steps;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    PipelineStep step;
    bool first = true;
    for (auto tok : split(sv, ' ')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      if (first) {
        step.op = std::string(tok);
        first = false;
        continue;
      }
      auto eq = tok.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("'" + path + "' line " + std::to_string(row) +
                         ": expected key=value, got '" + std::string(tok) + "'");
      step.params[std::string(trim(tok.substr(0, eq)))] =
          std::string(trim(tok.substr(eq + 1)));
    }
    if (step.op.empty()) continue;
    if (step.op != "drop_sparse" && step.op != "impute" && step.op != "trend" &&
        step.op != "resample")
      throw ConfigError("unknown pipeline step '" + step.op + "'");
    steps.push_back(std::move(step));
  }
  return steps;
}

namespace {

PixelDataset apply_trend_step(const PixelDataset& dataset,
                              const std::string& var,
                              const std::vector<TemporalSeries>& series) {
  std::unordered_map<std::int64_t, TrendSummary> fits;
  fits.reserve(series.size());
  for (const auto& s : series) fits.emplace(s.pixel_id, fit_trend(s));

  const Eigen::Index n = dataset.n(), p = dataset.p();
  Eigen::MatrixXd X(n, p + 2);
  Mask obs(n, p + 2);
  X.leftCols(p) = dataset.X();
  obs.leftCols(p) = dataset.observed();
  std::vector<std::string> columns = dataset.columns();
  columns.push_back(var + "_current");
  columns.push_back(var + "_trend");
  for (Eigen::Index i = 0; i < n; ++i) {
    auto it = fits.find(dataset.sites()[static_cast<std::size_t>(i)].id);
    if (it == fits.end()) {
      X(i, p) = X(i, p + 1) = std::numeric_limits<double>::quiet_NaN();
      obs(i, p) = obs(i, p + 1) = false;
    } else {
      X(i, p) = it->second.current;
      X(i, p + 1) = it->second.trend;
      obs(i, p) = obs(i, p + 1) = true;
    }
  }
  return dataset.with_columns(std::move(X), std::move(columns), std::move(obs));
}

double step_double(const PipelineStep& s, const std::string& key, double dflt) {
  auto it = s.params.find(key);
  return it == s.params.end() ? dflt : parse_double(it->second, "step " + s.op);
}

}  // namespace

PixelDataset run_pipeline(
    const PixelDataset& dataset, const std::vector<PipelineStep>& steps,
    const std::map<std::string, std::vector<TemporalSeries>>& temporal) {
  PixelDataset current = dataset;
  for (const auto& step : steps) {
    if (step.op == "drop_sparse") {
      current = drop_sparse_covariates(current, step_double(step, "threshold", 0.28));
    } else if (step.op == "impute") {
      current = knn_impute(current, static_cast<int>(step_double(step, "k", 10)));
    } else if (step.op == "trend") {
      auto it = step.params.find("var");
      if (it == step.params.end())
        throw ConfigError("trend step requires var=<name>");
      auto series = temporal.find(it->second);
      if (series == temporal.end())
        throw ConfigError("no temporal series for variable '" + it->second + "'");
      current = apply_trend_step(current, it->second, series->second);
    }
    // resample steps operate on grid files, not the pixel table
  }
  return current;
}

}  // namespace firesl
