#pragma once

#include <string>
#include <vector>

#include "fracline/ann.hpp"
#include "fracline/features.hpp"

namespace fracline {

/// A feature row with its training target (+1 fracture, -1 non-fracture).
struct LabeledFeatureRow {
  FeatureRow row;
  int target = -1;
};

// Feature CSV columns followed by `target`.
std::string dataset_to_csv(const std::vector<LabeledFeatureRow>& rows);
std::vector<LabeledFeatureRow> dataset_from_csv(const std::string& text);

LabeledRow to_labeled_row(const LabeledFeatureRow& r);
LabeledDataset to_dataset(const std::vector<LabeledFeatureRow>& rows);

}  // namespace fracline
