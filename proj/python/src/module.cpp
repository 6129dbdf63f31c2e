#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracline/adpo.hpp"
#include "fracline/analysis.hpp"
#include "fracline/ann.hpp"
#include "fracline/config.hpp"
#include "fracline/eval.hpp"
#include "fracline/features.hpp"
#include "fracline/hough.hpp"
#include "fracline/imaging.hpp"
#include "fracline/pipeline.hpp"
#include "fracline/region_filter.hpp"
#include "fracline/synth.hpp"

namespace py = pybind11;
using namespace fracline;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

template <class Img>
Img from_array(const U8Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
  Img img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), img.data.begin());
  return img;
}

template <class Img>
U8Array to_array(const Img& img) {
  U8Array a({img.height, img.width});
  std::copy(img.data.begin(), img.data.end(), a.mutable_data());
  return a;
}

py::tuple seg_tuple(const LineSegment& s) { return py::make_tuple(s.x1, s.y1, s.x2, s.y2); }

std::vector<LineSegment> to_segments(const std::vector<std::array<int, 4>>& v) {
  std::vector<LineSegment> out;
  for (const auto& a : v) out.push_back({a[0], a[1], a[2], a[3]});
  return out;
}

py::list seg_list(const std::vector<LineSegment>& v) {
  py::list out;
  for (const auto& s : v) out.append(seg_tuple(s));
  return out;
}

HoughParams hough_params(const std::string& scheme) { return parse_scheme(scheme) == Scheme::Adpo ? HoughParams::adpo() : HoughParams::standard(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fracture line detection core";

  static py::exception<Error> err(m, "FraclineError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(err, e.what());
    }
  });

  m.def("enhance", [](const U8Array& a, const std::string& config_json) {
    return to_array(enhance(from_array<GrayImage>(a), config_from_json(config_json).enhancement));
  }, py::arg("image"), py::arg("config_json") = "{}");
  m.def("canny", [](const U8Array& a, int low, int high) { return to_array(canny(from_array<GrayImage>(a), low, high)); },
        py::arg("image"), py::arg("low") = 50, py::arg("high") = 150);
  m.def("edge_map", [](const U8Array& a) { return to_array(edge_map(from_array<GrayImage>(a), EnhancementConfig{})); });

  m.def("detect_lines", [](const U8Array& edges, const std::string& scheme, int min_line_length, std::uint64_t seed) {
    auto p = hough_params(scheme);
    if (min_line_length > 0) p.min_line_length = min_line_length;
    return seg_list(detect_lines(from_array<EdgeImage>(edges), p, seed));
  }, py::arg("edges"), py::arg("scheme") = "standard", py::arg("min_line_length") = 0, py::arg("seed") = 1);

  m.def("optimize_min_line_length", [](const U8Array& edges, std::uint64_t seed, bool absolute) {
    AdpoOptions opt;
    opt.absolute_delta = absolute;
    const auto s = optimize_min_line_length(from_array<EdgeImage>(edges), HoughParams::adpo(), seed, opt);
    py::dict d;
    d["chosen"] = s.chosen;
    d["min_lengths"] = s.min_lengths;
    d["avg_gradient"] = s.avg_gradient;
    d["delta_avg_gradient"] = s.delta_avg_gradient;
    d["borrowed"] = seg_list(borrow_lines(s));
    return d;
  }, py::arg("edges"), py::arg("seed") = 1, py::arg("absolute") = false);

  m.def("line_gradient_deg", [](const std::array<int, 4>& s) { return line_gradient_deg({s[0], s[1], s[2], s[3]}); });

  m.def("extract_features", [](const std::vector<std::array<int, 4>>& lines, int height) {
    py::list rows;
    for (const auto& f : extract_image(to_segments(lines), height)) rows.append(f.inputs());
    return rows;
  }, py::arg("lines"), py::arg("height"));
  m.attr("FEATURE_NAMES") = feature_names();

  m.def("pca_contribution", [](const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw py::value_error("no rows");
    FeatureMatrix fm;
    fm.values = Matrix(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) throw py::value_error("ragged rows");
      for (std::size_t j = 0; j < rows[i].size(); ++j) fm.values(i, j) = rows[i][j];
    }
    for (std::size_t j = 0; j < rows[0].size(); ++j) fm.names.push_back("f" + std::to_string(j));
    const auto r = pca_contribution(fm);
    py::dict d;
    d["contributions"] = r.contributions;
    d["eigenvalues"] = r.eigenvalues;
    d["skipped_vectors"] = r.skipped_vectors;
    return d;
  });

  m.def("bone_bounds", [](const std::vector<std::array<int, 4>>& lines, int width, double window_frac) {
    const auto b = bone_bounds(density_profile(to_segments(lines), width, window_frac));
    return py::make_tuple(b.lower, b.upper);
  }, py::arg("lines"), py::arg("width"), py::arg("window_frac") = 0.05);

  m.def("train", [](const std::vector<std::vector<double>>& x, const std::vector<double>& y, int max_epochs,
                    std::uint64_t seed) {
    if (x.size() != y.size()) throw py::value_error("x and y differ in length");
    LabeledDataset data;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() != kInputCount) throw py::value_error("rows need 16 features");
      LabeledRow r;
      std::copy(x[i].begin(), x[i].end(), r.inputs.begin());
      r.target = y[i];
      data.push_back(r);
    }
    TrainingConfig cfg;
    cfg.max_epochs = max_epochs;
    const auto res = train(data, cfg, seed);
    return py::make_tuple(model_to_json(res.model), res.mse_trace);
  }, py::arg("x"), py::arg("y"), py::arg("max_epochs") = 200, py::arg("seed") = 1);
  m.def("infer", [](const std::string& model_json, const std::vector<double>& x) {
    return infer(model_from_json(model_json), std::span<const double>(x));
  });

  m.def("roc_auc", [](const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size()) throw py::value_error("scores and labels differ in length");
    ScoredLabels s;
    for (std::size_t i = 0; i < scores.size(); ++i) s.push_back({scores[i], labels[i]});
    return roc(s).auc;
  });

  m.def("synth_xray", [](std::uint64_t seed, int width, int height) {
    const auto x = synth::xray(seed, "xr", width, height);
    py::list boxes;
    for (const auto& r : x.fractures) boxes.append(py::make_tuple(r.x, r.y, r.width, r.height));
    return py::make_tuple(to_array(x.image), boxes);
  }, py::arg("seed") = 1, py::arg("width") = 400, py::arg("height") = 640);

  m.def("default_config", [] { return config_to_json(PipelineConfig{}); });
}
