#include "fracline/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fracline/error.hpp"

namespace fracline::plot {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string open_svg(int w, int h, const std::string& title) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << w / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << esc(title) << "</text>\n";
  return o.str();
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, std::optional<std::pair<double, double>> y_limits) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!std::isfinite(x0)) fail(ErrorCode::EmptyInput, "line chart has no points");
  if (y_limits) std::tie(y0, y1) = *y_limits;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;

  const int w = 640, h = 400, l = 60, r = 130, t = 30, b = 50;
  const double pw = w - l - r, ph = h - t - b;
  auto px = [&](double x) { return l + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return t + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream o;
  o << open_svg(w, h, title);
  o << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    o << "<text x=\"" << px(xv) << "\" y=\"" << t + ph + 15 << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    o << "<text x=\"" << l - 5 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  o << "<text x=\"" << l + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
  o << "<text transform=\"translate(15," << t + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << esc(y_label)
    << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].points) o << px(x) << ',' << py(std::clamp(y, y0, y1)) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << l + pw + 10 << "\" y=\"" << t + 15 + 16 * i << "\" fill=\"" << color << "\">"
      << esc(series[i].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values) {
  if (labels.size() != values.size() || labels.empty())
    fail(ErrorCode::InvalidInput, "bar chart needs one value per label");
  const double top = std::max(1e-12, *std::max_element(values.begin(), values.end()));
  const int w = 640, h = 360, l = 50, t = 30, b = 70;
  const double pw = w - l - 20, ph = h - t - b, bw = pw / static_cast<double>(values.size());

  std::ostringstream o;
  o << open_svg(w, h, title);
  o << "<line x1=\"" << l << "\" y1=\"" << t + ph << "\" x2=\"" << l + pw << "\" y2=\"" << t + ph
    << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double bh = std::max(0.0, values[i]) / top * ph, x = l + bw * i;
    o << "<rect x=\"" << x + 2 << "\" y=\"" << t + ph - bh << "\" width=\"" << bw - 4 << "\" height=\"" << bh
      << "\" fill=\"" << kPalette[0] << "\"/>\n";
    o << "<text x=\"" << x + bw / 2 << "\" y=\"" << t + ph - bh - 3 << "\" text-anchor=\"middle\" font-size=\"9\">"
      << fmt(values[i]) << "</text>\n";
    o << "<text transform=\"translate(" << x + bw / 2 << ',' << t + ph + 10 << ") rotate(45)\">" << esc(labels[i])
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap(const std::string& title, const std::vector<std::string>& names,
                    const std::vector<std::optional<double>>& entries) {
  const std::size_t n = names.size();
  if (n == 0 || entries.size() != n * n) fail(ErrorCode::InvalidInput, "heatmap needs an n x n grid");
  const int cell = 34, l = 70, t = 40;
  const int w = l + cell * static_cast<int>(n) + 20, h = t + cell * static_cast<int>(n) + 20;

  std::ostringstream o;
  o << open_svg(w, h, title);
  for (std::size_t i = 0; i < n; ++i) {
    o << "<text x=\"" << l - 4 << "\" y=\"" << t + cell * i + cell / 2 + 4 << "\" text-anchor=\"end\">"
      << esc(names[i]) << "</text>\n";
    o << "<text transform=\"translate(" << l + cell * i + cell / 2 << ',' << t - 4
      << ") rotate(-45)\" font-size=\"9\">" << esc(names[i]) << "</text>\n";
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = entries[i * n + j];
      std::string fill = "#cccccc";
      if (v) {
        // blue for negative, red for positive
        const int k = static_cast<int>(255 * (1.0 - std::min(1.0, std::fabs(*v))));
        char buf[16];
        std::snprintf(buf, sizeof buf, *v >= 0 ? "#ff%02x%02x" : "#%02x%02xff", k, k);
        fill = buf;
      }
      o << "<rect x=\"" << l + cell * j << "\" y=\"" << t + cell * i << "\" width=\"" << cell << "\" height=\"" << cell
        << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
      if (v)
        o << "<text x=\"" << l + cell * j + cell / 2 << "\" y=\"" << t + cell * i + cell / 2 + 3
          << "\" text-anchor=\"middle\" font-size=\"8\">" << fmt(*v) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace fracline::plot
