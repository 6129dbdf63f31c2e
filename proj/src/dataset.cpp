#include "fracline/dataset.hpp"

#include "fracline/csv.hpp"
#include "fracline/error.hpp"

namespace fracline {

std::string dataset_to_csv(const std::vector<LabeledFeatureRow>& rows) {
  auto header = feature_csv_header();
  header.push_back("target");
  std::string out = csv::join(header) + '\n';
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.row.image_id, std::to_string(r.row.line_id)};
    for (double v : r.row.features.inputs()) cells.push_back(csv::num(v));
    cells.push_back(std::to_string(r.target));
    out += csv::join(cells) + '\n';
  }
  return out;
}

std::vector<LabeledFeatureRow> dataset_from_csv(const std::string& text) {
  const auto table = csv::parse(text);
  const auto col = table.column("target");
  auto rows = features_from_csv(text);
  std::vector<LabeledFeatureRow> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto t = csv::to_int(table.rows[i][col]);
    if (t != 1 && t != -1) fail(ErrorCode::InvalidInput, "target must be +1 or -1, got " + table.rows[i][col]);
    out.push_back({std::move(rows[i]), static_cast<int>(t)});
  }
  return out;
}

LabeledRow to_labeled_row(const LabeledFeatureRow& r) {
  LabeledRow row;
  row.inputs = r.row.features.inputs();
  row.target = r.target;
  row.image_id = r.row.image_id;
  row.line_id = r.row.line_id;
  return row;
}

LabeledDataset to_dataset(const std::vector<LabeledFeatureRow>& rows) {
  LabeledDataset out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(to_labeled_row(r));
  return out;
}

}  // namespace fracline
