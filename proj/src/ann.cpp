#include "fracline/ann.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"

namespace fracline {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Activations of every layer for one example, reused across calls.
struct Workspace {
  std::vector<std::vector<double>> act;    // act[0] = standardized input
  std::vector<std::vector<double>> delta;  // per non-input layer

  explicit Workspace(const NetworkModel& m) {
    for (int s : m.layer_sizes) act.emplace_back(static_cast<std::size_t>(s), 0.0);
    for (std::size_t l = 1; l < m.layer_sizes.size(); ++l)
      delta.emplace_back(static_cast<std::size_t>(m.layer_sizes[l]), 0.0);
  }
};

double forward(const NetworkModel& m, std::span<const double> x, Workspace& ws) {
  auto& in = ws.act[0];
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = (x[i] - m.input_mean[i]) / m.input_scale[i];
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const auto& w = m.weights[l];
    const auto& b = m.biases[l];
    const auto& a = ws.act[l];
    auto& out = ws.act[l + 1];
    const std::size_t nin = a.size();
    for (std::size_t o = 0; o < out.size(); ++o) {
      double z = b[o];
      const double* row = &w[o * nin];
      for (std::size_t i = 0; i < nin; ++i) z += row[i] * a[i];
      out[o] = std::tanh(z);
    }
  }
  return ws.act.back()[0];
}

/// Accumulates d(loss)/d(params) into grad_w/grad_b for loss = (o - target)^2.
void backward(const NetworkModel& m, double target, Workspace& ws, std::vector<std::vector<double>>& grad_w,
              std::vector<std::vector<double>>& grad_b) {
  const std::size_t layers = m.layer_sizes.size() - 1;
  {
    const double o = ws.act.back()[0];
    ws.delta[layers - 1][0] = 2.0 * (o - target) * (1.0 - o * o);
  }
  for (std::size_t l = layers; l-- > 0;) {
    const auto& d = ws.delta[l];
    const auto& a = ws.act[l];
    const std::size_t nin = a.size();
    for (std::size_t o = 0; o < d.size(); ++o) {
      double* g = &grad_w[l][o * nin];
      for (std::size_t i = 0; i < nin; ++i) g[i] += d[o] * a[i];
      grad_b[l][o] += d[o];
    }
    if (l == 0) break;
    auto& prev = ws.delta[l - 1];
    const auto& w = m.weights[l];
    for (std::size_t i = 0; i < nin; ++i) {
      double s = 0.0;
      for (std::size_t o = 0; o < d.size(); ++o) s += w[o * nin + i] * d[o];
      prev[i] = s * (1.0 - a[i] * a[i]);
    }
  }
}

void check_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidInput, "network input is not finite");
}

}  // namespace

void TrainingConfig::validate() const {
  if (max_epochs < 1) fail(ErrorCode::InvalidConfig, "max epochs must be >= 1");
  if (!(desired_error > 0.0)) fail(ErrorCode::InvalidConfig, "desired error must be positive");
  if (!(learning_rate > 0.0)) fail(ErrorCode::InvalidConfig, "learning rate must be positive");
  if (batch_size < 1) fail(ErrorCode::InvalidConfig, "batch size must be >= 1");
}

std::size_t NetworkModel::num_parameters() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

void NetworkModel::validate() const {
  if (layer_sizes.size() < 2) fail(ErrorCode::InvalidInput, "network needs at least two layers");
  if (layer_sizes.back() != 1) fail(ErrorCode::InvalidInput, "network must have a single output");
  for (int s : layer_sizes)
    if (s < 1) fail(ErrorCode::InvalidInput, "layer sizes must be positive");
  if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size())
    fail(ErrorCode::InvalidInput, "layer count does not match weight count");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const auto nin = static_cast<std::size_t>(layer_sizes[l]);
    const auto nout = static_cast<std::size_t>(layer_sizes[l + 1]);
    if (weights[l].size() != nin * nout || biases[l].size() != nout)
      fail(ErrorCode::InvalidInput, "weight shape mismatch in layer " + std::to_string(l));
  }
  if (input_mean.size() != num_inputs() || input_scale.size() != num_inputs())
    fail(ErrorCode::InvalidInput, "standardization size mismatch");
  for (double s : input_scale)
    if (!(s > 0.0)) fail(ErrorCode::InvalidInput, "standardization scale must be positive");
  if (activation != "tanh") fail(ErrorCode::InvalidInput, "unsupported activation " + activation);
}

NetworkModel zero_network(const std::vector<int>& layer_sizes) {
  NetworkModel m;
  m.layer_sizes = layer_sizes;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    m.weights.emplace_back(static_cast<std::size_t>(layer_sizes[l] * layer_sizes[l + 1]), 0.0);
    m.biases.emplace_back(static_cast<std::size_t>(layer_sizes[l + 1]), 0.0);
  }
  m.input_mean.assign(static_cast<std::size_t>(layer_sizes.front()), 0.0);
  m.input_scale.assign(static_cast<std::size_t>(layer_sizes.front()), 1.0);
  m.validate();
  return m;
}

NetworkModel make_network(const std::vector<int>& layer_sizes, std::uint64_t seed) {
  NetworkModel m = zero_network(layer_sizes);
  m.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer_sizes[l]));
    for (auto& w : m.weights[l]) w = (2.0 * uniform01(rng) - 1.0) * bound;
  }
  return m;
}

TrainingConfig with_update_budget(TrainingConfig cfg, std::size_t rows, long updates) {
  if (updates <= 0) return cfg;
  if (rows == 0) fail(ErrorCode::EmptyInput, "training data is empty");
  const auto batch = static_cast<std::size_t>(std::max(1, cfg.batch_size));
  const long per_epoch = static_cast<long>((rows + batch - 1) / batch);
  cfg.max_epochs = static_cast<int>(std::max(1L, (updates + per_epoch - 1) / per_epoch));
  return cfg;
}

TrainingResult train(const LabeledDataset& data, const TrainingConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (data.empty()) fail(ErrorCode::EmptyInput, "training data is empty");
  for (const auto& row : data) {
    check_finite(row.inputs);
    if (row.target != 1.0 && row.target != -1.0) fail(ErrorCode::InvalidInput, "targets must be +1 or -1");
  }

  TrainingResult res;
  NetworkModel& m = res.model;
  m = make_network(kFractureLayers, seed);
  m.config = cfg;

  const std::size_t n = data.size();
  for (std::size_t i = 0; i < kInputCount; ++i) {
    double mean = 0.0;
    for (const auto& r : data) mean += r.inputs[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& r : data) ss += (r.inputs[i] - mean) * (r.inputs[i] - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    m.input_mean[i] = mean;
    m.input_scale[i] = sd > 1e-12 ? sd : 1.0;
  }

  // shuffle stream is separate from the initialization stream
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  Workspace ws(m);
  std::vector<std::vector<double>> gw, gb;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    gw.emplace_back(m.weights[l].size(), 0.0);
    gb.emplace_back(m.biases[l].size(), 0.0);
  }
  const auto batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (cfg.shuffle)
      for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    double sse = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
      for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const auto& row = data[order[k]];
        const double o = forward(m, row.inputs, ws);
        sse += (o - row.target) * (o - row.target);
        backward(m, row.target, ws, gw, gb);
      }
      const double step = cfg.learning_rate / static_cast<double>(end - start);
      for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (std::size_t i = 0; i < gw[l].size(); ++i) m.weights[l][i] -= step * gw[l][i];
        for (std::size_t i = 0; i < gb[l].size(); ++i) m.biases[l][i] -= step * gb[l][i];
      }
    }
    const double mse = sse / static_cast<double>(n);
    if (!std::isfinite(mse))
      fail(ErrorCode::Divergence, "training diverged at epoch " + std::to_string(epoch));
    res.mse_trace.push_back(mse);
    if (mse <= cfg.desired_error) {
      res.reached_desired_error = true;
      break;
    }
  }
  return res;
}

double infer(const NetworkModel& model, std::span<const double> x) {
  if (x.size() != model.num_inputs())
    fail(ErrorCode::InvalidInput, "expected " + std::to_string(model.num_inputs()) + " network inputs");
  check_finite(x);
  Workspace ws(model);
  return forward(model, x, ws);
}

double infer(const NetworkModel& model, const std::array<double, kInputCount>& x) {
  return infer(model, std::span<const double>(x.data(), x.size()));
}

bool classify(double o) {
  if (!(o >= -1.0 && o <= 1.0)) fail(ErrorCode::InvalidInput, "network output outside [-1, 1]");
  return o >= 0.0;
}

std::vector<double> flatten_parameters(const NetworkModel& model) {
  std::vector<double> p;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    p.insert(p.end(), model.weights[l].begin(), model.weights[l].end());
    p.insert(p.end(), model.biases[l].begin(), model.biases[l].end());
  }
  return p;
}

void assign_parameters(NetworkModel& model, std::span<const double> params) {
  if (params.size() != model.num_parameters()) fail(ErrorCode::InvalidInput, "parameter count mismatch");
  std::size_t k = 0;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (auto& w : model.weights[l]) w = params[k++];
    for (auto& b : model.biases[l]) b = params[k++];
  }
}

std::vector<double> analytic_gradient(const NetworkModel& model, std::span<const double> x, double target) {
  model.validate();
  if (x.size() != model.num_inputs()) fail(ErrorCode::InvalidInput, "input size mismatch");
  Workspace ws(model);
  std::vector<std::vector<double>> gw, gb;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    gw.emplace_back(model.weights[l].size(), 0.0);
    gb.emplace_back(model.biases[l].size(), 0.0);
  }
  forward(model, x, ws);
  backward(model, target, ws, gw, gb);
  std::vector<double> g;
  for (std::size_t l = 0; l < gw.size(); ++l) {
    g.insert(g.end(), gw[l].begin(), gw[l].end());
    g.insert(g.end(), gb[l].begin(), gb[l].end());
  }
  return g;
}

double gradient_check(const NetworkModel& model, std::span<const double> x, double target, double step) {
  const auto analytic = analytic_gradient(model, x, target);
  NetworkModel probe = model;
  auto params = flatten_parameters(model);
  Workspace ws(model);
  const auto loss = [&](std::span<const double> p) {
    assign_parameters(probe, p);
    const double o = forward(probe, x, ws);
    return (o - target) * (o - target);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + step;
    const double up = loss(params);
    params[i] = orig - step;
    const double down = loss(params);
    params[i] = orig;
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-7});
    worst = std::max(worst, std::fabs(analytic[i] - numeric) / denom);
  }
  return worst;
}

std::string model_to_json(const NetworkModel& model) {
  model.validate();
  nlohmann::json j;
  j["layer_sizes"] = model.layer_sizes;
  j["activation"] = model.activation;
  j["seed"] = model.seed;
  j["weights"] = model.weights;
  j["biases"] = model.biases;
  j["input_mean"] = model.input_mean;
  j["input_scale"] = model.input_scale;
  j["config"] = {{"max_epochs", model.config.max_epochs},
                 {"desired_error", model.config.desired_error},
                 {"shuffle", model.config.shuffle},
                 {"learning_rate", model.config.learning_rate},
                 {"batch_size", model.config.batch_size}};
  return j.dump(1);
}

NetworkModel model_from_json(const std::string& text) {
  NetworkModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    m.activation = j.at("activation").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    m.input_mean = j.at("input_mean").get<std::vector<double>>();
    m.input_scale = j.at("input_scale").get<std::vector<double>>();
    const auto& c = j.at("config");
    m.config.max_epochs = c.at("max_epochs").get<int>();
    m.config.desired_error = c.at("desired_error").get<double>();
    m.config.shuffle = c.at("shuffle").get<bool>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.batch_size = c.at("batch_size").get<int>();
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::InvalidInput, std::string("bad model JSON: ") + ex.what());
  }
  m.validate();
  return m;
}

}  // namespace fracline
