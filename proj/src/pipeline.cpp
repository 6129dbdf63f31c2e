#include "fracline/pipeline.hpp"

#include "fracline/csv.hpp"
#include "fracline/error.hpp"
#include "fracline/parallel.hpp"

namespace fracline {

std::uint64_t image_seed(std::uint64_t master, const std::string& image_id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : image_id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return derive_seed(master, h);
}

EdgeImage edge_map(const GrayImage& img, const EnhancementConfig& cfg) {
  return canny(enhance(img, cfg), cfg.canny_low, cfg.canny_high);
}

DetectedImage detect_edges(const EdgeImage& edges, const std::string& image_id, Scheme scheme,
                           const PipelineConfig& cfg) {
  DetectedImage d;
  d.image_id = image_id;
  d.width = edges.width;
  d.height = edges.height;
  const auto seed = image_seed(cfg.seed, image_id);
  if (scheme == Scheme::Standard) {
    d.lines = detect_lines(edges, cfg.standard, seed);
    return d;
  }

  d.sweep = optimize_min_line_length(edges, cfg.adpo, seed, cfg.adpo_options);
  const auto borrowed = borrow_lines(*d.sweep);
  if (borrowed.empty()) return d;
  d.bounds = bone_bounds(density_profile(borrowed, edges.width, cfg.window_frac), cfg.bounds);
  // knee, foot and flesh lines never reach the classifier
  for (const auto& l : borrowed) {
    const double xm = l.mid_x();
    const bool leg = assign_region(l, edges.height, cfg.bands) == Region::Leg;
    (leg && xm >= d.bounds->lower && xm <= d.bounds->upper ? d.lines : d.screened).push_back(l);
  }
  return d;
}

DetectedImage detect_image(const GrayImage& img, const std::string& image_id, Scheme scheme,
                           const PipelineConfig& cfg) {
  return detect_edges(edge_map(img, cfg.enhancement), image_id, scheme, cfg);
}

GradientReference image_reference(const DetectedImage& d, const PipelineConfig& cfg) {
  std::vector<LineSegment> leg;
  for (const auto& l : d.lines)
    if (assign_region(l, d.height, cfg.bands) == Region::Leg) leg.push_back(l);
  const auto& basis = leg.empty() ? (d.lines.empty() ? d.screened : d.lines) : leg;
  if (basis.empty()) return {0.0, cfg.gradient_bin_deg};
  return gradient_reference(basis, cfg.gradient_bin_deg);
}

namespace {

std::vector<FeatureRow> rows_for(const std::vector<LineSegment>& lines, int first_id, const DetectedImage& d,
                                 const GradientReference& ref, const PipelineConfig& cfg) {
  std::vector<FeatureRow> out;
  for (std::size_t i = 0; i < lines.size(); ++i)
    out.push_back({d.image_id, first_id + static_cast<int>(i),
                   extract(lines[i], ref, assign_region(lines[i], d.height, cfg.bands))});
  return out;
}

LabeledDataset label_rows(const std::vector<FeatureRow>& rows, const std::vector<LineSegment>& lines,
                          const std::vector<Rect>& fractures, const DetectedImage& d) {
  auto labels = default_labels(d.image_id, lines.size());
  for (const auto& r : fractures)
    labels = merge_region(labels, apply_region(lines, {d.image_id, r, "", ""}, d.width, d.height));
  LabeledDataset out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    LabeledRow row;
    row.inputs = rows[i].features.inputs();
    row.target = labels[i].label == Label::Fracture ? 1.0 : -1.0;
    row.image_id = d.image_id;
    row.line_id = rows[i].line_id;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::vector<FeatureRow> feature_rows(const DetectedImage& d, const PipelineConfig& cfg) {
  return rows_for(d.lines, 0, d, image_reference(d, cfg), cfg);
}

ImageSample labeled_sample(const DetectedImage& d, const std::vector<Rect>& fractures, const PipelineConfig& cfg) {
  const auto ref = image_reference(d, cfg);
  ImageSample s;
  s.image_id = d.image_id;
  s.rows = label_rows(rows_for(d.lines, 0, d, ref, cfg), d.lines, fractures, d);
  s.screened_out = label_rows(rows_for(d.screened, static_cast<int>(d.lines.size()), d, ref, cfg), d.screened,
                              fractures, d);
  return s;
}

std::string fractures_to_csv(const std::vector<AnnotatedImage>& images) {
  std::string out = "image_id,x,y,width,height\n";
  for (const auto& a : images)
    for (const auto& r : a.fractures)
      out += csv::join({a.id, std::to_string(r.x), std::to_string(r.y), std::to_string(r.width),
                        std::to_string(r.height)}) + '\n';
  return out;
}

std::map<std::string, std::vector<Rect>> fractures_from_csv(const std::string& text) {
  const auto t = csv::parse(text);
  csv::expect_header(t, {"image_id", "x", "y", "width", "height"});
  std::map<std::string, std::vector<Rect>> out;
  for (const auto& r : t.rows) {
    if (r.size() != 5) fail(ErrorCode::InvalidInput, "fracture rows need 5 columns");
    auto v = [&](int i) { return static_cast<int>(csv::to_int(r[i])); };
    const Rect rect{v(1), v(2), v(3), v(4)};
    if (rect.width <= 0 || rect.height <= 0) fail(ErrorCode::InvalidInput, "empty fracture rectangle for " + r[0]);
    out[r[0]].push_back(rect);
  }
  return out;
}

std::vector<ImageSample> prepare_samples(const std::vector<AnnotatedImage>& images, Scheme scheme,
                                         const PipelineConfig& cfg) {
  std::vector<ImageSample> out(images.size());
  parallel_for(images.size(), [&](std::size_t i) {
    const auto& a = images[i];
    out[i] = labeled_sample(detect_image(a.image, a.id, scheme, cfg), a.fractures, cfg);
  });
  return out;
}

SampleSplit split_samples(std::vector<ImageSample> samples, int test_images) {
  if (test_images < 1 || static_cast<std::size_t>(test_images) >= samples.size())
    fail(ErrorCode::InvalidInput, "need at least one training and one test image (got " +
                                      std::to_string(samples.size()) + " images, " + std::to_string(test_images) +
                                      " for testing)");
  SampleSplit s;
  const auto cut = samples.size() - static_cast<std::size_t>(test_images);
  s.train.assign(std::make_move_iterator(samples.begin()), std::make_move_iterator(samples.begin() + cut));
  s.test.assign(std::make_move_iterator(samples.begin() + cut), std::make_move_iterator(samples.end()));
  return s;
}

LabeledDataset pooled_rows(const std::vector<ImageSample>& samples) {
  LabeledDataset out;
  for (const auto& s : samples) out.insert(out.end(), s.rows.begin(), s.rows.end());
  return out;
}

ImageSweepConfig image_sweep_config(const PipelineConfig& cfg) {
  ImageSweepConfig c;
  c.cases = cfg.eval.cases;
  c.sims = cfg.eval.sims;
  c.seed = cfg.seed;
  c.training = cfg.training;
  c.update_budget = cfg.eval.update_budget;
  return c;
}

LineSweepConfig line_sweep_config(const PipelineConfig& cfg) {
  LineSweepConfig c;
  c.group = cfg.eval.line_group;
  c.max_lines = cfg.eval.max_lines;
  c.sims = cfg.eval.line_sims;
  c.seed = cfg.seed;
  c.training = cfg.training;
  c.update_budget = cfg.eval.update_budget;
  return c;
}

}  // namespace fracline
