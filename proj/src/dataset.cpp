#include "firesl/dataset.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "firesl/errors.hpp"
#include "firesl/text.hpp"

namespace firesl {

PixelDataset::PixelDataset(std::vector<Site> sites, Eigen::MatrixXd X,
                           Eigen::VectorXd y, std::vector<std::string> columns,
                           Mask observed, DatasetMeta meta)
    : sites_(std::move(sites)),
      X_(std::move(X)),
      y_(std::move(y)),
      columns_(std::move(columns)),
      observed_(std::move(observed)),
      meta_(std::move(meta)) {
  validate();
}

PixelDataset::PixelDataset(std::vector<Site> sites, Eigen::MatrixXd X,
                           Eigen::VectorXd y, std::vector<std::string> columns,
                           DatasetMeta meta)
    : PixelDataset(std::move(sites), std::move(X), std::move(y),
                   std::move(columns),
                   Mask::Constant(X.rows() == 0 ? 0 : X.rows(),
                                  X.cols() == 0 ? 0 : X.cols(), true),
                   std::move(meta)) {}

void PixelDataset::validate() const {
  const Eigen::Index n = X_.rows(), p = X_.cols();
  if (n < 1) throw SchemaMismatch("dataset needs n >= 1 rows");
  if (p < 1) throw SchemaMismatch("dataset needs p >= 1 covariate columns");
  if (static_cast<Eigen::Index>(sites_.size()) != n)
    throw SchemaMismatch("sites/X row count mismatch");
  if (y_.size() != n) throw SchemaMismatch("y/X row count mismatch");
  if (static_cast<Eigen::Index>(columns_.size()) != p)
    throw SchemaMismatch("column names/X column count mismatch");
  if (observed_.rows() != n || observed_.cols() != p)
    throw SchemaMismatch("mask shape mismatch");

  std::unordered_set<std::int64_t> ids;
  for (const Site& s : sites_) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y))
      throw NonFinite("site " + std::to_string(s.id) + " has non-finite coordinates");
    if (!ids.insert(s.id).second)
      throw DuplicateId("duplicate site id " + std::to_string(s.id));
  }
  std::unordered_set<std::string> names;
  for (const auto& c : columns_)
    if (!names.insert(c).second)
      throw SchemaMismatch("duplicate column name '" + c + "'");

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (observed_(i, j) && !std::isfinite(X_(i, j)))
        throw NonFinite("X(" + std::to_string(i) + "," + std::to_string(j) +
                        ") marked observed but not finite");
}

Eigen::Index PixelDataset::column_index(const std::string& name) const {
  for (Eigen::Index j = 0; j < p(); ++j)
    if (columns_[static_cast<std::size_t>(j)] == name) return j;
  return -1;
}

Eigen::MatrixXd PixelDataset::coords() const {
  Eigen::MatrixXd c(n(), 2);
  for (Eigen::Index i = 0; i < n(); ++i) {
    c(i, 0) = sites_[static_cast<std::size_t>(i)].x;
    c(i, 1) = sites_[static_cast<std::size_t>(i)].y;
  }
  return c;
}

double PixelDataset::missing_fraction(Eigen::Index j) const {
  Eigen::Index miss = 0;
  for (Eigen::Index i = 0; i < n(); ++i)
    if (!observed_(i, j)) ++miss;
  return static_cast<double>(miss) / static_cast<double>(n());
}

PixelDataset PixelDataset::with_columns(Eigen::MatrixXd X,
                                        std::vector<std::string> columns,
                                        Mask observed) const {
  return PixelDataset(sites_, std::move(X), y_, std::move(columns),
                      std::move(observed), meta_);
}

PixelDataset PixelDataset::subset(const std::vector<Eigen::Index>& rows) const {
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  std::vector<Site> sites(rows.size());
  Eigen::MatrixXd X(m, p());
  Eigen::VectorXd y(m);
  Mask obs(m, p());
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index i = rows[static_cast<std::size_t>(r)];
    sites[static_cast<std::size_t>(r)] = sites_[static_cast<std::size_t>(i)];
    X.row(r) = X_.row(i);
    y(r) = y_(i);
    obs.row(r) = observed_.row(i);
  }
  return PixelDataset(std::move(sites), std::move(X), std::move(y), columns_,
                      std::move(obs), meta_);
}

namespace {

constexpr const char* kFixedHeader[] = {"id", "x", "y", "dnbr"};

std::string meta_path(const std::string& path) { return path + ".meta"; }

}  // namespace

PixelDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw SchemaMismatch("'" + path + "' is empty");
  auto header = split(trim(line), ',');
  if (header.size() < 5)
    throw SchemaMismatch("'" + path + "': header must be id,x,y,dnbr,<covariates...>");
  for (int j = 0; j < 4; ++j)
    if (trim(header[static_cast<std::size_t>(j)]) != kFixedHeader[j])
      throw SchemaMismatch("'" + path + "': column " + std::to_string(j + 1) +
                           " must be '" + kFixedHeader[j] + "'");

  std::vector<std::string> columns;
  for (std::size_t j = 4; j < header.size(); ++j)
    columns.emplace_back(trim(header[j]));
  const std::size_t p = columns.size();

  std::vector<Site> sites;
  std::vector<double> ys;
  std::vector<double> xs;
  std::vector<bool> obs;

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    auto sv = trim(line);
    if (sv.empty()) continue;
    auto fields = split(sv, ',');
    if (fields.size() != 4 + p)
      throw ParseError("'" + path + "' row " + std::to_string(row) + ": expected " +
                       std::to_string(4 + p) + " fields, got " +
                       std::to_string(fields.size()));
    const std::string where = path + " row " + std::to_string(row);
    Site s;
    s.id = parse_int(trim(fields[0]), where + " col id");
    s.x = parse_double(trim(fields[1]), where + " col x");
    s.y = parse_double(trim(fields[2]), where + " col y");
    sites.push_back(s);
    auto yf = trim(fields[3]);
    ys.push_back(yf.empty() ? std::numeric_limits<double>::quiet_NaN()
                            : parse_double(yf, where + " col dnbr"));
    for (std::size_t j = 0; j < p; ++j) {
      auto f = trim(fields[4 + j]);
      if (f.empty()) {
        xs.push_back(std::numeric_limits<double>::quiet_NaN());
        obs.push_back(false);
      } else {
        xs.push_back(parse_double(f, where + " col " + columns[j]));
        obs.push_back(true);
      }
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(sites.size());
  if (n == 0) throw SchemaMismatch("'" + path + "' has no data rows");
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(p));
  Mask mask(n, static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = ys[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
      X(i, j) = xs[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)];
      mask(i, j) = obs[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)];
    }
  }

  DatasetMeta meta;
  std::ifstream min(meta_path(path));
  if (min) {
    while (std::getline(min, line)) {
      auto sv = trim(line);
      if (sv.empty() || sv.front() == '#') continue;
      auto eq = sv.find('=');
      if (eq == std::string_view::npos) continue;
      auto key = trim(sv.substr(0, eq));
      auto value = trim(sv.substr(eq + 1));
      if (key == "distance_unit") meta.distance_unit = std::string(value);
      else if (key == "response_name") meta.response_name = std::string(value);
    }
  }

  return PixelDataset(std::move(sites), std::move(X), std::move(y),
                      std::move(columns), std::move(mask), std::move(meta));
}

void save_dataset(const PixelDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "id,x,y,dnbr";
  for (const auto& c : dataset.columns()) out << ',' << c;
  out << '\n';
  for (Eigen::Index i = 0; i < dataset.n(); ++i) {
    const Site& s = dataset.sites()[static_cast<std::size_t>(i)];
    out << s.id << ',' << format_double(s.x) << ',' << format_double(s.y) << ',';
    if (std::isfinite(dataset.y()(i))) out << format_double(dataset.y()(i));
    for (Eigen::Index j = 0; j < dataset.p(); ++j) {
      out << ',';
      if (dataset.observed()(i, j)) out << format_double(dataset.X()(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");

  std::ofstream mout(meta_path(path));
  if (!mout) throw IoError("cannot write '" + meta_path(path) + "'");
  mout << "distance_unit=" << dataset.meta().distance_unit << '\n'
       << "response_name=" << dataset.meta().response_name << '\n';
}

}  // namespace firesl
