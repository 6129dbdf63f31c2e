#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracline/features.hpp"
#include "fracline/matrix.hpp"

namespace fracline {

/// m observations (rows) of n named features (columns).
struct FeatureMatrix {
  Matrix values;
  std::vector<std::string> names;

  void validate() const;
};

/// Builds the m x 13 matrix of line features in feature_names() order.
FeatureMatrix make_feature_matrix(const std::vector<FeatureVector>& rows);

/// Pearson correlation with n-1 sample statistics. Entries involving a
/// zero-variance column are left undefined.
struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::optional<double>> entries;  // row-major n x n

  std::size_t size() const { return names.size(); }
  std::optional<double> at(std::size_t i, std::size_t j) const { return entries[i * names.size() + j]; }
};

CorrelationMatrix correlation_matrix(const FeatureMatrix& x);

/// Per-feature contribution from averaged eigenvector element ratios.
/// Eigen data refers to the `active` features only (zero-variance columns
/// are dropped and receive zero contribution).
struct ContributionReport {
  std::vector<std::string> names;
  std::vector<double> contributions;     // one per input feature, sums to 1
  std::vector<std::size_t> active;       // indices of retained features
  Matrix covariance;                     // of the z-scored active columns
  std::vector<double> eigenvalues;       // descending
  Matrix eigenvectors;                   // column j, sign fixed so sums[j] > 0
  std::vector<double> sums;              // element sum of each eigenvector
  Matrix ratios;                         // element / column sum
  std::vector<std::size_t> skipped_vectors;  // eigenvectors whose sum is ~0
  std::vector<std::string> warnings;
};

/// Eigenvectors with |sum| below this are left out of the average.
inline constexpr double kMinEigenvectorSum = 1e-4;

ContributionReport pca_contribution(const FeatureMatrix& x);

/// Column-wise z-score with the n-1 standard deviation; zero-variance
/// columns are centred only.
Matrix zscore_columns(const Matrix& x);

std::string correlation_to_csv(const CorrelationMatrix& c);
std::string contributions_to_csv(const ContributionReport& r);

}  // namespace fracline
