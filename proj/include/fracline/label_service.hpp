#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fracline/dataset.hpp"
#include "fracline/hough.hpp"
#include "fracline/image.hpp"

namespace fracline {

enum class Label { NonFracture, Fracture };
enum class LabelSource { Default, Region, Deselection };

const char* label_name(Label l);
const char* source_name(LabelSource s);

/// Pixel rectangle covering columns x..x+width-1 and rows y..y+height-1.
struct Rect {
  int x = 0, y = 0, width = 0, height = 0;

  /// Inclusive of the border pixels.
  bool contains(double px, double py) const;
};

struct RegionSelection {
  std::string image_id;
  Rect rect;
  std::string author;
  std::string timestamp;
};

struct LabelRecord {
  std::string image_id;
  int line_id = 0;
  Label label = Label::NonFracture;
  LabelSource source = LabelSource::Default;

  bool operator==(const LabelRecord&) const = default;
};

/// Throws InvalidInput unless the rectangle is non-empty and inside a
/// width x height image.
void validate_selection(const Rect& r, int width, int height);

/// Labels a line fracture when either endpoint lies in the rectangle; every
/// other line is a default non-fracture.
std::vector<LabelRecord> apply_region(const std::vector<LineSegment>& lines, const RegionSelection& sel,
                                      int img_width, int img_height);

/// Union of an existing labelling with a freshly applied region: lines the
/// region marks become region fractures again, the rest keep their state.
std::vector<LabelRecord> merge_region(std::vector<LabelRecord> current, const std::vector<LabelRecord>& applied);

/// Turns a region fracture into a deselected non-fracture. Other records are
/// left alone, so repeated calls are no-ops. Unknown id throws NotFound.
std::vector<LabelRecord> deselect(std::vector<LabelRecord> records, int line_id);

std::vector<LabelRecord> default_labels(const std::string& image_id, std::size_t n);

struct ImageRecord {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<LineSegment> lines;
  std::shared_ptr<const GrayImage> pixels;  // optional, served by /raw
};

struct LabelEvent {
  enum class Kind { Region, Deselect } kind = Kind::Region;
  std::string image_id;
  Rect rect;       // Region
  int line_id = 0; // Deselect
  std::string author;
  std::string timestamp;
};

std::string event_to_json(const LabelEvent& e);
LabelEvent event_from_json(const std::string& line);

/// Image store with per-line labels. Reads see immutable snapshots; every
/// mutation is serialized, appended to the event log and then published.
class LabelStore {
 public:
  struct ImageState {
    std::shared_ptr<const ImageRecord> image;
    std::vector<LabelRecord> labels;
    std::size_t events = 0;
  };
  using Snapshot = std::map<std::string, std::shared_ptr<const ImageState>>;

  /// An empty log path keeps events in memory only.
  explicit LabelStore(std::filesystem::path log_path = {}, RegionBands bands = {});

  void add_image(ImageRecord img);
  /// Applies every event of the log file to the registered images.
  void replay();

  std::shared_ptr<const Snapshot> snapshot() const;
  std::vector<std::string> image_ids() const;
  std::shared_ptr<const ImageState> image(const std::string& id) const;

  std::vector<LabelRecord> add_region(const RegionSelection& sel);
  std::vector<LabelRecord> deselect_line(const std::string& image_id, int line_id);

  std::vector<LabelEvent> events() const;

  /// Feature rows of every labelled image of one snapshot.
  std::vector<LabeledFeatureRow> export_rows(std::vector<std::string>* warnings = nullptr) const;
  std::string export_csv(std::vector<std::string>* warnings = nullptr) const;

 private:
  std::vector<LabelRecord> apply(const LabelEvent& e, bool log);

  std::filesystem::path log_path_;
  RegionBands bands_;
  mutable std::mutex write_mu_;
  mutable std::mutex snap_mu_;
  std::shared_ptr<const Snapshot> snap_;
  std::vector<LabelEvent> events_;
  std::ofstream log_;
};

/// Reads `images/*.{png,jpg,jpeg,pgm}` and `lines.csv` (hough segment CSV)
/// from a data directory.
std::vector<ImageRecord> load_label_dir(const std::filesystem::path& dir);

/// HTTP front end for a LabelStore.
class LabelServer {
 public:
  explicit LabelServer(LabelStore& store, std::filesystem::path static_dir = {});
  ~LabelServer();

  /// Binds and serves on a background thread; port 0 picks a free port.
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fracline
