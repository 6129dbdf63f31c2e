// fracline: command-line driver for the fracture-line pipeline.
//
// Exit codes: 0 ok, 1 runtime error, 2 unknown stage or bad usage,
// 3 invalid config, 4 missing input.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracline/adpo.hpp"
#include "fracline/analysis.hpp"
#include "fracline/config.hpp"
#include "fracline/csv.hpp"
#include "fracline/dataset.hpp"
#include "fracline/eval.hpp"
#include "fracline/image_io.hpp"
#include "fracline/label_service.hpp"
#include "fracline/parallel.hpp"
#include "fracline/pipeline.hpp"
#include "fracline/plot.hpp"
#include "fracline/synth.hpp"

namespace fs = std::filesystem;
using namespace fracline;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kBadConfig = 3, kMissingInput = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string scheme = "standard";
  std::optional<int> test_images;
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::NotFound, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path out_path(const Common& c, const std::string& name) {
  auto p = fs::path(c.out_dir) / name;
  fs::create_directories(p.parent_path());
  return p;
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + p.string());
  out << text;
}

PipelineConfig load(const Common& c) {
  auto cfg = load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.test_images) cfg.eval.test_images = *c.test_images;
  cfg.validate();
  return cfg;
}

bool is_image(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".pgm";
}

// Files as given; directories expand to their images, sorted.
std::vector<fs::path> image_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& s : inputs) {
    const fs::path p = s;
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && is_image(e.path())) found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      out.push_back(p);
    } else {
      fail(ErrorCode::NotFound, "no such input " + s);
    }
  }
  if (out.empty()) fail(ErrorCode::NotFound, "no input images");
  return out;
}

EdgeImage edges_for(const fs::path& p, bool already_edges, const PipelineConfig& cfg) {
  const auto img = read_image(p);
  return already_edges ? to_edges(img) : edge_map(img, cfg.enhancement);
}

// images.csv: per-image dimensions plus what detection decided.
struct ImageMeta {
  int width = 0, height = 0;
};

std::map<std::string, ImageMeta> read_meta(const fs::path& p) {
  const auto t = csv::parse(read_text(p));
  const auto id = t.column("image_id"), w = t.column("width"), h = t.column("height");
  std::map<std::string, ImageMeta> out;
  for (const auto& r : t.rows)
    out[r.at(id)] = {static_cast<int>(csv::to_int(r.at(w))), static_cast<int>(csv::to_int(r.at(h)))};
  return out;
}

std::map<std::string, std::vector<LineSegment>> read_lines(const fs::path& p) {
  std::map<std::string, std::vector<LineSegment>> out;
  for (auto& [id, seg] : segments_from_csv(read_text(p))) out[id].push_back(seg);
  return out;
}

fs::path sibling(const std::string& given, const std::string& anchor, const char* name) {
  return given.empty() ? fs::path(anchor).parent_path() / name : fs::path(given);
}

// Annotated images from a data directory (images/ + fractures.csv), or the
// synthetic corpus when no directory is given.
std::vector<AnnotatedImage> annotated_inputs(const std::string& data_dir, synth::CorpusConfig cc,
                                             const PipelineConfig& cfg) {
  std::vector<AnnotatedImage> out;
  if (data_dir.empty()) {
    cc.seed = cfg.seed;
    for (auto& x : synth::corpus(cc)) out.push_back({x.id, std::move(x.image), x.fractures});
    return out;
  }
  const auto rects = fractures_from_csv(read_text(fs::path(data_dir) / "fractures.csv"));
  for (const auto& p : image_inputs({(fs::path(data_dir) / "images").string()})) {
    AnnotatedImage a{p.stem().string(), read_image(p), {}};
    if (auto it = rects.find(a.id); it != rects.end()) a.fractures = it->second;
    out.push_back(std::move(a));
  }
  return out;
}

void add_common(CLI::App* sub, Common& c, bool scheme, bool test_images) {
  sub->add_option("--config", c.config, "JSON config file (defaults < file < FRACLINE_* env < flags)");
  sub->add_option("--seed", c.seed, "master seed (overrides the config)");
  sub->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  if (scheme)
    sub->add_option("--scheme", c.scheme, "detection scheme")
        ->check(CLI::IsMember({"standard", "adpo"}))
        ->capture_default_str();
  if (test_images) sub->add_option("--test-images", c.test_images, "held-out test images (overrides eval.test_images)");
}

double mean_avg(const std::vector<CaseResult>& cases) {
  double m = 0.0;
  for (const auto& c : cases) m += c.avg / static_cast<double>(cases.size());
  return m;
}

std::string cases_svg(const std::string& title, const std::string& x_label, const std::vector<CaseResult>& cases) {
  plot::Series lo{"min", {}}, avg{"avg", {}}, hi{"max", {}};
  for (const auto& c : cases) {
    lo.points.emplace_back(c.case_id, 100 * c.min);
    avg.points.emplace_back(c.case_id, 100 * c.avg);
    hi.points.emplace_back(c.case_id, 100 * c.max);
  }
  return plot::line_chart(title, x_label, "accuracy (%)", {avg, lo, hi}, std::pair{0.0, 100.0});
}

void write_sweep(const Common& c, const std::string& stem, const std::string& title, const std::string& x_label,
                 const SweepReport& rep) {
  write_text(out_path(c, stem + ".csv"), cases_to_csv(rep.cases));
  write_text(out_path(c, stem + ".json"), cases_to_json(rep.cases));
  write_text(out_path(c, stem + ".svg"), cases_svg(title, x_label, rep.cases));
  write_text(out_path(c, stem + "_scores.csv"), scores_to_csv(rep.scores));
}

// ---- stages

void run_synth(const Common& c, synth::CorpusConfig cc) {
  cc.seed = load(c).seed;
  std::vector<AnnotatedImage> meta;
  for (auto& x : synth::corpus(cc)) {
    write_png(out_path(c, "images/" + x.id + ".png"), x.image);
    meta.push_back({x.id, {}, x.fractures});
  }
  write_text(out_path(c, "fractures.csv"), fractures_to_csv(meta));
  std::printf("wrote %d images to %s\n", cc.count, c.out_dir.c_str());
}

void run_enhance(const Common& c, const std::vector<std::string>& inputs) {
  const auto cfg = load(c);
  for (const auto& p : image_inputs(inputs)) {
    const auto enhanced = enhance(read_image(p), cfg.enhancement);
    write_png(out_path(c, "enhanced/" + p.stem().string() + ".png"), enhanced);
    write_png(out_path(c, "edges/" + p.stem().string() + ".png"),
              canny(enhanced, cfg.enhancement.canny_low, cfg.enhancement.canny_high));
  }
}

void run_detect(const Common& c, const std::vector<std::string>& inputs, bool edges_in) {
  const auto cfg = load(c);
  const auto scheme = parse_scheme(c.scheme);
  const auto files = image_inputs(inputs);
  std::vector<DetectedImage> found(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    found[i] = detect_edges(edges_for(files[i], edges_in, cfg), files[i].stem().string(), scheme, cfg);
  });

  std::vector<std::pair<std::string, LineSegment>> kept, screened;
  std::string meta = "image_id,width,height,scheme,min_line_length,lower,upper,lines,screened\n";
  for (const auto& d : found) {
    for (const auto& l : d.lines) kept.emplace_back(d.image_id, l);
    for (const auto& l : d.screened) screened.emplace_back(d.image_id, l);
    const int lmin = d.sweep ? d.sweep->chosen : cfg.standard.min_line_length;
    meta += csv::join({d.image_id, std::to_string(d.width), std::to_string(d.height), scheme_name(scheme),
                       std::to_string(lmin), d.bounds ? std::to_string(d.bounds->lower) : "",
                       d.bounds ? std::to_string(d.bounds->upper) : "", std::to_string(d.lines.size()),
                       std::to_string(d.screened.size())}) + '\n';
    if (d.sweep)
      for (const auto& w : d.sweep->warnings) std::fprintf(stderr, "warning: %s: %s\n", d.image_id.c_str(), w.c_str());
  }
  write_text(out_path(c, "lines.csv"), segments_to_csv(kept));
  write_text(out_path(c, "images.csv"), meta);
  if (scheme == Scheme::Adpo) write_text(out_path(c, "screened.csv"), segments_to_csv(screened));
  std::printf("%zu lines from %zu images\n", kept.size(), found.size());
}

void run_features(const Common& c, const std::string& lines_csv, const std::string& images_csv,
                  const std::string& fractures_csv) {
  const auto cfg = load(c);
  const auto lines = read_lines(lines_csv);
  const auto meta = read_meta(sibling(images_csv, lines_csv, "images.csv"));
  std::map<std::string, std::vector<Rect>> rects;
  if (!fractures_csv.empty()) rects = fractures_from_csv(read_text(fractures_csv));

  std::vector<FeatureRow> rows;
  std::vector<LabeledFeatureRow> labeled;
  for (const auto& [id, segs] : lines) {
    const auto m = meta.find(id);
    if (m == meta.end()) fail(ErrorCode::NotFound, "image " + id + " is missing from images.csv");
    const auto feats = extract_image(segs, m->second.height, cfg.bands, cfg.gradient_bin_deg);
    auto labels = default_labels(id, segs.size());
    if (auto r = rects.find(id); r != rects.end())
      for (const auto& rect : r->second)
        labels = merge_region(labels, apply_region(segs, {id, rect, "", ""}, m->second.width, m->second.height));
    for (std::size_t i = 0; i < feats.size(); ++i) {
      rows.push_back({id, static_cast<int>(i), feats[i]});
      labeled.push_back({rows.back(), labels[i].label == Label::Fracture ? 1 : -1});
    }
  }
  write_text(out_path(c, "features.csv"), features_to_csv(rows));
  if (!fractures_csv.empty()) write_text(out_path(c, "dataset.csv"), dataset_to_csv(labeled));
  std::printf("%zu feature rows\n", rows.size());
}

void run_analyze(const Common& c, const std::string& input) {
  load(c);
  const auto text = read_text(input);
  std::vector<FeatureVector> feats;
  const auto header = csv::parse(text).header;
  if (std::find(header.begin(), header.end(), "target") != header.end())
    for (const auto& r : dataset_from_csv(text)) feats.push_back(r.row.features);
  else
    for (const auto& r : features_from_csv(text)) feats.push_back(r.features);

  const auto x = make_feature_matrix(feats);
  const auto corr = correlation_matrix(x);
  const auto rep = pca_contribution(x);
  for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  std::string eig = "component,eigenvalue,vector_sum,skipped\n";
  for (std::size_t j = 0; j < rep.eigenvalues.size(); ++j) {
    const bool skipped = std::find(rep.skipped_vectors.begin(), rep.skipped_vectors.end(), j) != rep.skipped_vectors.end();
    eig += std::to_string(j + 1) + ',' + csv::num(rep.eigenvalues[j]) + ',' + csv::num(rep.sums[j]) + ',' +
           (skipped ? "1" : "0") + '\n';
  }
  write_text(out_path(c, "correlation.csv"), correlation_to_csv(corr));
  write_text(out_path(c, "contributions.csv"), contributions_to_csv(rep));
  write_text(out_path(c, "eigen.csv"), eig);
  write_text(out_path(c, "correlation.svg"), plot::heatmap("Feature correlation", corr.names, corr.entries));
  std::vector<double> pct;
  for (double v : rep.contributions) pct.push_back(100 * v);
  write_text(out_path(c, "contributions.svg"), plot::bar_chart("Feature contribution (%)", rep.names, pct));
  std::printf("%zu rows, %zu features\n", feats.size(), rep.names.size());
}

void run_adpo(const Common& c, const std::vector<std::string>& inputs, bool edges_in, bool absolute) {
  auto cfg = load(c);
  if (absolute) cfg.adpo_options.absolute_delta = true;
  for (const auto& p : image_inputs(inputs)) {
    const auto id = p.stem().string();
    const auto sweep =
        optimize_min_line_length(edges_for(p, edges_in, cfg), cfg.adpo, image_seed(cfg.seed, id), cfg.adpo_options);
    for (const auto& w : sweep.warnings) std::fprintf(stderr, "warning: %s: %s\n", id.c_str(), w.c_str());
    write_text(out_path(c, "adpo_" + id + ".csv"), sweep_to_csv(sweep));
    std::printf("%s l_min=%d\n", id.c_str(), sweep.chosen);
  }
}

void run_gap_sweep(const Common& c, const std::vector<std::string>& inputs, bool edges_in) {
  const auto cfg = load(c);
  const auto& params = cfg.hough(parse_scheme(c.scheme));
  for (const auto& p : image_inputs(inputs)) {
    const auto id = p.stem().string();
    std::string out = "max_line_gap,num_lines\n";
    for (auto [g, n] : max_gap_sweep(edges_for(p, edges_in, cfg), params, image_seed(cfg.seed, id), cfg.gap_lo,
                                     cfg.gap_hi))
      out += std::to_string(g) + ',' + std::to_string(n) + '\n';
    write_text(out_path(c, "gap_sweep_" + id + ".csv"), out);
  }
}

void run_region(const Common& c, const std::string& lines_csv, const std::string& images_csv) {
  const auto cfg = load(c);
  const auto lines = read_lines(lines_csv);
  const auto meta = read_meta(sibling(images_csv, lines_csv, "images.csv"));
  std::string bounds = "image_id,lower,upper,kept,screened\n";
  std::vector<std::pair<std::string, LineSegment>> kept;
  for (const auto& [id, segs] : lines) {
    const auto m = meta.find(id);
    if (m == meta.end()) fail(ErrorCode::NotFound, "image " + id + " is missing from images.csv");
    const auto prof = density_profile(segs, m->second.width, cfg.window_frac);
    const auto b = bone_bounds(prof, cfg.bounds);
    const auto leg = filter_leg_lines(segs, b);
    for (const auto& l : leg) kept.emplace_back(id, l);
    bounds += csv::join({id, std::to_string(b.lower), std::to_string(b.upper), std::to_string(leg.size()),
                         std::to_string(segs.size() - leg.size())}) + '\n';
    write_text(out_path(c, "profile_" + id + ".csv"), profile_to_csv(prof));
  }
  write_text(out_path(c, "bounds.csv"), bounds);
  write_text(out_path(c, "leg_lines.csv"), segments_to_csv(kept));
}

void run_label_serve(const Common& c, const std::string& data_dir, const std::string& host, int port,
                     const std::string& static_dir) {
  const auto cfg = load(c);
  const fs::path dir = data_dir.empty() ? fs::path(c.out_dir) : fs::path(data_dir);
  LabelStore store(dir / "labels.jsonl", cfg.bands);
  for (auto& img : load_label_dir(dir)) store.add_image(std::move(img));
  store.replay();
  LabelServer server(store, static_dir);
  std::printf("serving %zu images on http://%s:%d\n", store.image_ids().size(), host.c_str(), port);
  std::fflush(stdout);
  server.listen(host, port);
}

void run_train(const Common& c, const std::string& dataset_csv, long updates) {
  const auto cfg = load(c);
  const auto data = to_dataset(dataset_from_csv(read_text(dataset_csv)));
  const auto tc = with_update_budget(cfg.training, data.size(), updates < 0 ? cfg.eval.update_budget : updates);
  const auto res = train(data, tc, cfg.seed);
  const auto ev = evaluate(res.model, data);
  write_text(out_path(c, "model.json"), model_to_json(res.model));
  std::string trace = "epoch,mse\n";
  for (std::size_t e = 0; e < res.mse_trace.size(); ++e)
    trace += std::to_string(e + 1) + ',' + csv::num(res.mse_trace[e]) + '\n';
  write_text(out_path(c, "training.csv"), trace);
  std::printf("%zu rows, %zu epochs, final mse %.6f, training accuracy %.4f\n", data.size(), res.mse_trace.size(),
              res.mse_trace.empty() ? 0.0 : res.mse_trace.back(), metrics(ev.counts).accuracy.value_or(0.0));
}

void run_eval_images(const Common& c, const std::string& data_dir, const synth::CorpusConfig& cc) {
  const auto cfg = load(c);
  const auto scheme = parse_scheme(c.scheme);
  auto split = split_samples(prepare_samples(annotated_inputs(data_dir, cc, cfg), scheme, cfg), cfg.eval.test_images);
  const auto rep = image_case_sweep(split.train, split.test, image_sweep_config(cfg));
  const std::string stem = std::string("image_cases_") + scheme_name(scheme);
  write_sweep(c, stem, std::string("Image cases, ") + scheme_name(scheme), "training images", rep);
  std::printf("%s: mean accuracy %.4f over %zu cases, AUC %.4f\n", scheme_name(scheme), mean_avg(rep.cases),
              rep.cases.size(), roc(rep.scores).auc);
}

void run_eval_lines(const Common& c, const std::string& data_dir, const synth::CorpusConfig& cc) {
  const auto cfg = load(c);
  const auto scheme = parse_scheme(c.scheme);
  auto split = split_samples(prepare_samples(annotated_inputs(data_dir, cc, cfg), scheme, cfg), cfg.eval.test_images);
  const auto rep = line_case_sweep(pooled_rows(split.train), pooled_rows(split.test), line_sweep_config(cfg));
  const std::string stem = std::string("line_cases_") + scheme_name(scheme);
  write_sweep(c, stem, std::string("Line cases, ") + scheme_name(scheme), "case (x" +
              std::to_string(2 * cfg.eval.line_group) + " training lines)", rep);
  std::printf("%s: %zu cases, first %.4f, last %.4f\n", scheme_name(scheme), rep.cases.size(),
              rep.cases.front().avg, rep.cases.back().avg);
}

void run_roc(const Common& c, const std::vector<std::string>& score_files, const std::string& model,
             const std::string& dataset) {
  load(c);
  std::vector<std::pair<std::string, ScoredLabels>> sets;
  for (const auto& f : score_files) sets.emplace_back(fs::path(f).stem().string(), scores_from_csv(read_text(f)));
  if (!model.empty() || !dataset.empty()) {
    if (model.empty() || dataset.empty()) fail(ErrorCode::NotFound, "--model and --dataset go together");
    const auto ev = evaluate(model_from_json(read_text(model)), to_dataset(dataset_from_csv(read_text(dataset))));
    sets.emplace_back(fs::path(model).stem().string(), ev.scores);
  }
  if (sets.empty()) fail(ErrorCode::NotFound, "give score files or --model with --dataset");

  std::vector<plot::Series> series;
  std::string summary = "name,auc,points\n";
  for (const auto& [name, scores] : sets) {
    const auto curve = roc(scores);
    write_text(out_path(c, "roc_" + name + ".csv"), roc_to_csv(curve.points));
    plot::Series s{name + " (AUC " + csv::num(std::round(curve.auc * 1e4) / 1e4) + ")", {}};
    for (const auto& p : roc_hull(curve)) s.points.emplace_back(p.fpr, p.tpr);
    series.push_back(std::move(s));
    summary += csv::join({name, csv::num(curve.auc), std::to_string(curve.points.size())}) + '\n';
    std::printf("%s AUC %.4f\n", name.c_str(), curve.auc);
  }
  series.push_back({"chance", {{0, 0}, {1, 1}}});
  write_text(out_path(c, "auc.csv"), summary);
  write_text(out_path(c, "roc.svg"), plot::line_chart("ROC", "false positive rate", "true positive rate", series,
                                                      std::pair{0.0, 1.0}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fracture-line detection pipeline"};
  app.require_subcommand(1);
  Common c;

  std::vector<std::string> inputs;
  bool edges_in = false, absolute = false;
  std::string lines_csv, images_csv, fractures_csv, data_dir, host = "127.0.0.1", static_dir, model, dataset;
  int port = 8080;
  long updates = -1;
  synth::CorpusConfig cc;

  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic radiograph corpus (images/ + fractures.csv)");
  add_common(synth_cmd, c, false, false);
  synth_cmd->add_option("--count", cc.count, "number of images")->capture_default_str();
  synth_cmd->add_option("--width", cc.width, "image width")->capture_default_str();
  synth_cmd->add_option("--height", cc.height, "image height")->capture_default_str();

  auto* enhance_cmd = app.add_subcommand("enhance", "enhance images and write enhanced/ and edges/ PNGs");
  add_common(enhance_cmd, c, false, false);
  enhance_cmd->add_option("inputs", inputs, "image files or directories")->required();

  auto* detect_cmd = app.add_subcommand("detect", "detect line segments; writes lines.csv and images.csv");
  add_common(detect_cmd, c, true, false);
  detect_cmd->add_option("inputs", inputs, "image files or directories")->required();
  detect_cmd->add_flag("--edges", edges_in, "inputs are edge maps already (skip enhancement)");

  auto* features_cmd = app.add_subcommand("features", "extract line features; writes features.csv");
  add_common(features_cmd, c, false, false);
  features_cmd->add_option("lines", lines_csv, "segment CSV from detect")->required();
  features_cmd->add_option("--images-csv", images_csv, "image table (default: images.csv next to the lines)");
  features_cmd->add_option("--fractures", fractures_csv, "fracture rectangles; also writes labelled dataset.csv");

  auto* analyze_cmd = app.add_subcommand("analyze", "correlation matrix and PCA feature contributions");
  add_common(analyze_cmd, c, false, false);
  analyze_cmd->add_option("features", lines_csv, "features.csv or dataset.csv")->required();

  auto* adpo_cmd = app.add_subcommand("adpo", "minimum line length sweep per image");
  add_common(adpo_cmd, c, false, false);
  adpo_cmd->add_option("inputs", inputs, "image files or directories")->required();
  adpo_cmd->add_flag("--edges", edges_in, "inputs are edge maps already (skip enhancement)");
  adpo_cmd->add_flag("--absolute", absolute, "pick the largest |delta| instead of the largest delta");

  auto* gap_cmd = app.add_subcommand("gap-sweep", "number of lines per max line gap (adpo.gap_range)");
  add_common(gap_cmd, c, true, false);
  gap_cmd->add_option("inputs", inputs, "image files or directories")->required();
  gap_cmd->add_flag("--edges", edges_in, "inputs are edge maps already (skip enhancement)");

  auto* region_cmd = app.add_subcommand("region", "x-density profile and bone bounds per image");
  add_common(region_cmd, c, false, false);
  region_cmd->add_option("lines", lines_csv, "segment CSV from detect")->required();
  region_cmd->add_option("--images-csv", images_csv, "image table (default: images.csv next to the lines)");

  auto* serve_cmd = app.add_subcommand("label-serve", "serve the labelling HTTP API");
  add_common(serve_cmd, c, false, false);
  serve_cmd->add_option("--data-dir", data_dir, "directory with images/ and lines.csv (default: --out-dir)")
      ->envname("FRACLINE_DATA_DIR");
  serve_cmd->add_option("--port", port, "TCP port")->envname("FRACLINE_PORT")->capture_default_str();
  serve_cmd->add_option("--host", host, "bind address")->capture_default_str();
  serve_cmd->add_option("--static-dir", static_dir, "static files mounted at /");

  auto* train_cmd = app.add_subcommand("train", "train the classifier on a labelled dataset.csv");
  add_common(train_cmd, c, false, false);
  train_cmd->add_option("dataset", dataset, "labelled feature CSV")->required();
  train_cmd->add_option("--updates", updates,
                        "mini-batch step budget (default eval.update_budget; 0 runs training.max_epochs)");

  auto* eval_img_cmd = app.add_subcommand("eval-images", "accuracy against the number of training images");
  auto* eval_line_cmd = app.add_subcommand("eval-lines", "accuracy against the number of training lines");
  for (auto* sub : {eval_img_cmd, eval_line_cmd}) {
    add_common(sub, c, true, true);
    sub->add_option("--data-dir", data_dir, "images/ + fractures.csv (default: synthetic corpus)");
    sub->add_option("--corpus-size", cc.count, "synthetic corpus size")->capture_default_str();
  }

  auto* roc_cmd = app.add_subcommand("roc", "ROC curves and AUC");
  add_common(roc_cmd, c, false, false);
  roc_cmd->add_option("scores", inputs, "score CSVs (score,fracture)");
  roc_cmd->add_option("--model", model, "model.json to score --dataset with");
  roc_cmd->add_option("--dataset", dataset, "labelled feature CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
      std::fprintf(stderr, "unknown stage '%s'\n", argv[1]);
      return kUsage;
    }
    app.exit(e);
    return kUsage;
  }

  try {
    if (synth_cmd->parsed()) run_synth(c, cc);
    else if (enhance_cmd->parsed()) run_enhance(c, inputs);
    else if (detect_cmd->parsed()) run_detect(c, inputs, edges_in);
    else if (features_cmd->parsed()) run_features(c, lines_csv, images_csv, fractures_csv);
    else if (analyze_cmd->parsed()) run_analyze(c, lines_csv);
    else if (adpo_cmd->parsed()) run_adpo(c, inputs, edges_in, absolute);
    else if (gap_cmd->parsed()) run_gap_sweep(c, inputs, edges_in);
    else if (region_cmd->parsed()) run_region(c, lines_csv, images_csv);
    else if (serve_cmd->parsed()) run_label_serve(c, data_dir, host, port, static_dir);
    else if (train_cmd->parsed()) run_train(c, dataset, updates);
    else if (eval_img_cmd->parsed()) run_eval_images(c, data_dir, cc);
    else if (eval_line_cmd->parsed()) run_eval_lines(c, data_dir, cc);
    else if (roc_cmd->parsed()) run_roc(c, inputs, model, dataset);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.code() == ErrorCode::InvalidConfig) return kBadConfig;
    if (e.code() == ErrorCode::NotFound) return kMissingInput;
    return kRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kOk;
}
