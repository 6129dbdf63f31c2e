#include "fracline/analysis.hpp"

#include <cmath>

#include "fracline/csv.hpp"

namespace fracline {

namespace {

struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> var;  // n-1 denominator
};

ColumnStats column_stats(const Matrix& x) {
  const std::size_t m = x.rows(), n = x.cols();
  ColumnStats s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += x(i, j);
    s.mean[j] = sum / static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = x(i, j) - s.mean[j];
      ss += d * d;
    }
    s.var[j] = m > 1 ? ss / static_cast<double>(m - 1) : 0.0;
  }
  return s;
}

bool zero_variance(double var, double mean) {
  return var <= 1e-24 * std::max(1.0, mean * mean);
}

}  // namespace

void FeatureMatrix::validate() const {
  if (values.cols() != names.size())
    fail(ErrorCode::InvalidInput, "feature matrix column count does not match names");
  for (double v : values.data())
    if (!std::isfinite(v)) fail(ErrorCode::InvalidInput, "feature matrix contains a non-finite entry");
}

FeatureMatrix make_feature_matrix(const std::vector<FeatureVector>& rows) {
  FeatureMatrix fm;
  fm.names.assign(feature_names().begin(), feature_names().end());
  fm.values = Matrix(rows.size(), kLineFeatureCount);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto f = rows[i].line_features();
    for (std::size_t j = 0; j < kLineFeatureCount; ++j) fm.values(i, j) = f[j];
  }
  return fm;
}

Matrix zscore_columns(const Matrix& x) {
  const auto s = column_stats(x);
  Matrix z(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double sd = zero_variance(s.var[j], s.mean[j]) ? 1.0 : std::sqrt(s.var[j]);
    for (std::size_t i = 0; i < x.rows(); ++i) z(i, j) = (x(i, j) - s.mean[j]) / sd;
  }
  return z;
}

CorrelationMatrix correlation_matrix(const FeatureMatrix& x) {
  x.validate();
  const std::size_t m = x.values.rows(), n = x.values.cols();
  if (m < 2) fail(ErrorCode::InvalidInput, "correlation needs at least two rows");
  const auto s = column_stats(x.values);

  CorrelationMatrix c;
  c.names = x.names;
  c.entries.assign(n * n, std::nullopt);
  for (std::size_t a = 0; a < n; ++a) {
    if (zero_variance(s.var[a], s.mean[a])) continue;
    for (std::size_t b = a; b < n; ++b) {
      if (zero_variance(s.var[b], s.mean[b])) continue;
      double cov = 0.0;
      for (std::size_t i = 0; i < m; ++i) cov += (x.values(i, a) - s.mean[a]) * (x.values(i, b) - s.mean[b]);
      cov /= static_cast<double>(m - 1);
      double r = a == b ? 1.0 : cov / std::sqrt(s.var[a] * s.var[b]);
      r = std::clamp(r, -1.0, 1.0);
      c.entries[a * n + b] = r;
      c.entries[b * n + a] = r;
    }
  }
  return c;
}

ContributionReport pca_contribution(const FeatureMatrix& x) {
  x.validate();
  const std::size_t m = x.values.rows(), n = x.values.cols();
  if (m <= n) fail(ErrorCode::InvalidInput, "contribution analysis needs more rows than features");

  ContributionReport rep;
  rep.names = x.names;
  rep.contributions.assign(n, 0.0);

  const auto stats = column_stats(x.values);
  for (std::size_t j = 0; j < n; ++j) {
    if (zero_variance(stats.var[j], stats.mean[j]))
      rep.warnings.push_back("feature " + x.names[j] + " has zero variance; excluded");
    else
      rep.active.push_back(j);
  }
  const std::size_t k = rep.active.size();
  if (k == 0) fail(ErrorCode::Analysis, "every feature has zero variance");

  Matrix reduced(m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < k; ++a) reduced(i, a) = x.values(i, rep.active[a]);
  const Matrix z = zscore_columns(reduced);

  rep.covariance = Matrix(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += z(i, a) * z(i, b);
      s /= static_cast<double>(m - 1);
      rep.covariance(a, b) = s;
      rep.covariance(b, a) = s;
    }

  auto eig = jacobi_eigen(rep.covariance);
  rep.eigenvalues = eig.values;
  rep.eigenvectors = eig.vectors;
  rep.sums.assign(k, 0.0);
  rep.ratios = Matrix(k, k);

  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < k; ++i) {
      s += rep.eigenvectors(i, j);
      if (std::fabs(rep.eigenvectors(i, j)) > std::fabs(rep.eigenvectors(largest, j))) largest = i;
    }
    const bool flip = std::fabs(s) < kMinEigenvectorSum ? rep.eigenvectors(largest, j) < 0 : s < 0;
    if (flip) {
      for (std::size_t i = 0; i < k; ++i) rep.eigenvectors(i, j) = -rep.eigenvectors(i, j);
      s = -s;
    }
    rep.sums[j] = s;
    if (std::fabs(s) < kMinEigenvectorSum) {
      rep.skipped_vectors.push_back(j);
      rep.warnings.push_back("eigenvector " + std::to_string(j) + " has near-zero element sum; skipped");
      continue;
    }
    for (std::size_t i = 0; i < k; ++i) rep.ratios(i, j) = rep.eigenvectors(i, j) / s;
  }

  const std::size_t used = k - rep.skipped_vectors.size();
  if (used == 0) fail(ErrorCode::Analysis, "no eigenvector has a usable element sum");
  for (std::size_t i = 0; i < k; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < k; ++j) row += rep.ratios(i, j);
    rep.contributions[rep.active[i]] = row / static_cast<double>(used);
  }
  return rep;
}

std::string correlation_to_csv(const CorrelationMatrix& c) {
  std::vector<std::string> header{"feature"};
  header.insert(header.end(), c.names.begin(), c.names.end());
  std::string out = csv::join(header) + '\n';
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::string> cells{c.names[i]};
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto v = c.at(i, j);
      cells.push_back(v ? csv::num(*v) : "NA");
    }
    out += csv::join(cells) + '\n';
  }
  return out;
}

std::string contributions_to_csv(const ContributionReport& r) {
  std::string out = "feature,contribution\n";
  for (std::size_t i = 0; i < r.names.size(); ++i)
    out += r.names[i] + ',' + csv::num(r.contributions[i]) + '\n';
  return out;
}

}  // namespace fracline
