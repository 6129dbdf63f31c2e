#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracline::plot {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Polyline chart; axes span the data unless limits are given.
std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, std::optional<std::pair<double, double>> y_limits = {});

/// Vertical bars, one per label.
std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values);

/// n x n grid of values in [-1, 1]; empty entries are drawn grey.
std::string heatmap(const std::string& title, const std::vector<std::string>& names,
                    const std::vector<std::optional<double>>& entries);

}  // namespace fracline::plot
