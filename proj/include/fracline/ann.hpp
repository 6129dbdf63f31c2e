#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracline/features.hpp"

namespace fracline {

/// Layer sizes of the fracture classifier: 16 inputs, two hidden layers of
/// n + 1 nodes and a single output.
inline const std::vector<int> kFractureLayers{16, 17, 17, 1};

struct TrainingConfig {
  int max_epochs = 50000;
  double desired_error = 0.0001;  // epoch mean-squared error
  bool shuffle = true;
  double learning_rate = 0.01;
  int batch_size = 16;

  void validate() const;
};

/// One training/testing example. Targets are +1 (fracture) or -1.
struct LabeledRow {
  std::array<double, kInputCount> inputs{};
  double target = -1.0;
  std::string image_id;
  int line_id = 0;
};

using LabeledDataset = std::vector<LabeledRow>;

/// Fully connected tanh network with stored input standardization.
/// Weights of layer l are row-major (layer_sizes[l+1] x layer_sizes[l]).
struct NetworkModel {
  std::vector<int> layer_sizes;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  std::vector<double> input_mean;
  std::vector<double> input_scale;
  std::string activation = "tanh";
  std::uint64_t seed = 0;
  TrainingConfig config;

  std::size_t num_inputs() const { return static_cast<std::size_t>(layer_sizes.front()); }
  std::size_t num_parameters() const;
  /// Throws InvalidInput when shapes are inconsistent.
  void validate() const;
};

/// Weights uniform in +-1/sqrt(fan_in), biases zero, identity standardization.
NetworkModel make_network(const std::vector<int>& layer_sizes, std::uint64_t seed);
NetworkModel zero_network(const std::vector<int>& layer_sizes);

struct TrainingResult {
  NetworkModel model;
  std::vector<double> mse_trace;  // one entry per epoch run
  bool reached_desired_error = false;
};

/// Copy of `cfg` whose epoch cap gives about `updates` mini-batch steps on
/// `rows` examples (at least one epoch). updates <= 0 returns cfg unchanged.
TrainingConfig with_update_budget(TrainingConfig cfg, std::size_t rows, long updates);

/// Mini-batch gradient descent on squared error, stopping at the desired
/// error or the epoch cap. Deterministic for a fixed seed.
TrainingResult train(const LabeledDataset& data, const TrainingConfig& cfg, std::uint64_t seed);

/// Network output in [-1, 1]. Throws InvalidInput for non-finite inputs.
double infer(const NetworkModel& model, std::span<const double> x);
double infer(const NetworkModel& model, const std::array<double, kInputCount>& x);

/// true (fracture) iff 0 <= o <= 1; false iff -1 <= o < 0.
bool classify(double o);

/// Gradient of (infer(x) - target)^2 with respect to every weight and bias,
/// flattened layer by layer (weights, then biases).
std::vector<double> analytic_gradient(const NetworkModel& model, std::span<const double> x, double target);
std::vector<double> flatten_parameters(const NetworkModel& model);
void assign_parameters(NetworkModel& model, std::span<const double> params);

/// Maximum relative deviation between analytic gradients and central
/// finite differences with the given step.
double gradient_check(const NetworkModel& model, std::span<const double> x, double target, double step = 1e-5);

std::string model_to_json(const NetworkModel& model);
NetworkModel model_from_json(const std::string& text);

}  // namespace fracline
