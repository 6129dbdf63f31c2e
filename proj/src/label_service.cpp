#include "fracline/label_service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <sstream>

#include "json.hpp"
#include "fracline/error.hpp"
#include "fracline/image_io.hpp"

namespace fracline {

using nlohmann::json;

const char* label_name(Label l) { return l == Label::Fracture ? "fracture" : "non-fracture"; }

const char* source_name(LabelSource s) {
  switch (s) {
    case LabelSource::Region: return "region";
    case LabelSource::Deselection: return "deselection";
    default: return "default";
  }
}

bool Rect::contains(double px, double py) const {
  return px >= x && px <= x + width - 1 && py >= y && py <= y + height - 1;
}

void validate_selection(const Rect& r, int width, int height) {
  if (r.width <= 0 || r.height <= 0) fail(ErrorCode::InvalidInput, "selection must have positive width and height");
  if (r.x < 0 || r.y < 0 || r.x + r.width > width || r.y + r.height > height)
    fail(ErrorCode::InvalidInput, "selection lies outside the " + std::to_string(width) + "x" +
                                      std::to_string(height) + " image");
}

std::vector<LabelRecord> default_labels(const std::string& image_id, std::size_t n) {
  std::vector<LabelRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {image_id, static_cast<int>(i), Label::NonFracture, LabelSource::Default};
  return out;
}

std::vector<LabelRecord> apply_region(const std::vector<LineSegment>& lines, const RegionSelection& sel,
                                      int img_width, int img_height) {
  validate_selection(sel.rect, img_width, img_height);
  auto out = default_labels(sel.image_id, lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (sel.rect.contains(l.x1, l.y1) || sel.rect.contains(l.x2, l.y2)) {
      out[i].label = Label::Fracture;
      out[i].source = LabelSource::Region;
    }
  }
  return out;
}

std::vector<LabelRecord> merge_region(std::vector<LabelRecord> current, const std::vector<LabelRecord>& applied) {
  if (current.size() != applied.size()) fail(ErrorCode::InvalidInput, "label sets differ in size");
  for (std::size_t i = 0; i < current.size(); ++i)
    if (applied[i].source == LabelSource::Region) current[i] = applied[i];
  return current;
}

std::vector<LabelRecord> deselect(std::vector<LabelRecord> records, int line_id) {
  auto it = std::find_if(records.begin(), records.end(), [&](const LabelRecord& r) { return r.line_id == line_id; });
  if (it == records.end()) fail(ErrorCode::NotFound, "no line " + std::to_string(line_id));
  if (it->source == LabelSource::Region) {
    it->label = Label::NonFracture;
    it->source = LabelSource::Deselection;
  }
  return records;
}

std::string event_to_json(const LabelEvent& e) {
  json j{{"image", e.image_id}, {"author", e.author}, {"timestamp", e.timestamp}};
  if (e.kind == LabelEvent::Kind::Region) {
    j["type"] = "region";
    j["rect"] = {e.rect.x, e.rect.y, e.rect.width, e.rect.height};
  } else {
    j["type"] = "deselect";
    j["line_id"] = e.line_id;
  }
  return j.dump();
}

LabelEvent event_from_json(const std::string& line) {
  LabelEvent e;
  try {
    const auto j = json::parse(line);
    const auto type = j.at("type").get<std::string>();
    e.image_id = j.at("image").get<std::string>();
    e.author = j.value("author", "");
    e.timestamp = j.value("timestamp", "");
    if (type == "region") {
      const auto& r = j.at("rect");
      e.rect = {r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>(), r.at(3).get<int>()};
    } else if (type == "deselect") {
      e.kind = LabelEvent::Kind::Deselect;
      e.line_id = j.at("line_id").get<int>();
    } else {
      fail(ErrorCode::InvalidInput, "unknown event type " + type);
    }
  } catch (const json::exception& ex) {
    fail(ErrorCode::InvalidInput, std::string("bad label event: ") + ex.what());
  }
  return e;
}

namespace {

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

LabelStore::LabelStore(std::filesystem::path log_path, RegionBands bands)
    : log_path_(std::move(log_path)), bands_(bands), snap_(std::make_shared<Snapshot>()) {
  bands_.validate();
}

void LabelStore::add_image(ImageRecord img) {
  if (img.id.empty()) fail(ErrorCode::InvalidInput, "image id is empty");
  if (img.width <= 0 || img.height <= 0) fail(ErrorCode::InvalidInput, "image " + img.id + " has no size");
  std::lock_guard w(write_mu_);
  auto next = std::make_shared<Snapshot>(*snapshot());
  if (next->count(img.id)) fail(ErrorCode::InvalidInput, "duplicate image id " + img.id);
  auto st = std::make_shared<ImageState>();
  st->labels = default_labels(img.id, img.lines.size());
  st->image = std::make_shared<const ImageRecord>(std::move(img));
  (*next)[st->image->id] = st;
  std::lock_guard s(snap_mu_);
  snap_ = std::move(next);
}

void LabelStore::replay() {
  if (log_path_.empty() || !std::filesystem::exists(log_path_)) return;
  std::ifstream in(log_path_);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      apply(event_from_json(line), false);
    } catch (const Error& e) {
      fail(e.code(), log_path_.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

std::shared_ptr<const LabelStore::Snapshot> LabelStore::snapshot() const {
  std::lock_guard s(snap_mu_);
  return snap_;
}

std::vector<std::string> LabelStore::image_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, st] : *snapshot()) ids.push_back(id);
  return ids;
}

std::shared_ptr<const LabelStore::ImageState> LabelStore::image(const std::string& id) const {
  auto snap = snapshot();
  auto it = snap->find(id);
  if (it == snap->end()) fail(ErrorCode::NotFound, "no image " + id);
  return it->second;
}

std::vector<LabelRecord> LabelStore::add_region(const RegionSelection& sel) {
  LabelEvent e;
  e.image_id = sel.image_id;
  e.rect = sel.rect;
  e.author = sel.author;
  e.timestamp = sel.timestamp.empty() ? now_iso() : sel.timestamp;
  return apply(e, true);
}

std::vector<LabelRecord> LabelStore::deselect_line(const std::string& image_id, int line_id) {
  LabelEvent e;
  e.kind = LabelEvent::Kind::Deselect;
  e.image_id = image_id;
  e.line_id = line_id;
  e.timestamp = now_iso();
  return apply(e, true);
}

std::vector<LabelRecord> LabelStore::apply(const LabelEvent& e, bool log) {
  std::lock_guard w(write_mu_);
  const auto cur = image(e.image_id);
  auto st = std::make_shared<ImageState>(*cur);
  const auto& img = *cur->image;
  if (e.kind == LabelEvent::Kind::Region)
    st->labels = merge_region(st->labels, apply_region(img.lines, {e.image_id, e.rect, e.author, e.timestamp},
                                                       img.width, img.height));
  else
    st->labels = deselect(st->labels, e.line_id);
  st->events += 1;

  if (log && !log_path_.empty()) {
    if (!log_.is_open()) {
      log_.open(log_path_, std::ios::app);
      if (!log_) fail(ErrorCode::Io, "cannot open label log " + log_path_.string());
    }
    log_ << event_to_json(e) << '\n';
    log_.flush();
    if (!log_) fail(ErrorCode::Io, "cannot write label log " + log_path_.string());
  }
  events_.push_back(e);

  auto next = std::make_shared<Snapshot>(*snapshot());
  (*next)[e.image_id] = st;
  {
    std::lock_guard s(snap_mu_);
    snap_ = std::move(next);
  }
  return st->labels;
}

std::vector<LabelEvent> LabelStore::events() const {
  std::lock_guard w(write_mu_);
  return events_;
}

std::vector<LabeledFeatureRow> LabelStore::export_rows(std::vector<std::string>* warnings) const {
  const auto snap = snapshot();
  std::vector<LabeledFeatureRow> out;
  for (const auto& [id, st] : *snap) {
    if (st->events == 0) continue;
    const auto& img = *st->image;
    const auto feats = extract_image(img.lines, img.height, bands_);
    for (std::size_t i = 0; i < feats.size(); ++i)
      out.push_back({{id, static_cast<int>(i), feats[i]}, st->labels[i].label == Label::Fracture ? 1 : -1});
  }
  if (out.empty() && warnings) warnings->push_back("export is empty: no image has been labelled");
  return out;
}

std::string LabelStore::export_csv(std::vector<std::string>* warnings) const {
  return dataset_to_csv(export_rows(warnings));
}

std::vector<ImageRecord> load_label_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const auto img_dir = dir / "images";
  const auto lines_path = dir / "lines.csv";
  if (!fs::is_directory(img_dir)) fail(ErrorCode::NotFound, "missing directory " + img_dir.string());
  if (!fs::exists(lines_path)) fail(ErrorCode::NotFound, "missing " + lines_path.string());

  std::ifstream in(lines_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::map<std::string, std::vector<LineSegment>> lines;
  for (auto& [id, seg] : segments_from_csv(ss.str())) lines[id].push_back(seg);

  std::vector<fs::path> files;
  for (const auto& ent : fs::directory_iterator(img_dir)) {
    auto ext = ent.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".pgm") files.push_back(ent.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<ImageRecord> out;
  for (const auto& f : files) {
    auto gray = std::make_shared<GrayImage>(read_image(f));
    ImageRecord rec;
    rec.id = f.stem().string();
    rec.width = gray->width;
    rec.height = gray->height;
    if (auto it = lines.find(rec.id); it != lines.end()) rec.lines = it->second;
    rec.pixels = std::move(gray);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace fracline
