#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "fracline/adpo.hpp"
#include "fracline/ann.hpp"
#include "fracline/features.hpp"
#include "fracline/hough.hpp"
#include "fracline/imaging.hpp"
#include "fracline/region_filter.hpp"

namespace fracline {

enum class Scheme { Standard, Adpo };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& s);

struct EvalSettings {
  int cases = 20;
  int sims = 10;
  int test_images = 23;
  int line_group = 5;
  int max_lines = 1500;
  int line_sims = 5;
  long update_budget = 2500;  // mini-batch steps per training run; 0 uses training.max_epochs
};

struct PipelineConfig {
  std::uint64_t seed = 1;
  EnhancementConfig enhancement;
  RegionBands bands;
  double gradient_bin_deg = 1.0;
  HoughParams standard = HoughParams::standard();
  HoughParams adpo = HoughParams::adpo();
  AdpoOptions adpo_options;
  int gap_lo = 10;
  int gap_hi = 20;
  double window_frac = 0.05;
  BoundsOptions bounds;
  TrainingConfig training;
  EvalSettings eval;

  const HoughParams& hough(Scheme s) const { return s == Scheme::Adpo ? adpo : standard; }
  void validate() const;
};

inline constexpr const char* kEnvPrefix = "FRACLINE_";

/// Parses a JSON config. Every section and key is optional; unknown keys and
/// ill-typed values throw InvalidConfig.
PipelineConfig config_from_json(const std::string& text, PipelineConfig base = {});
std::string config_to_json(const PipelineConfig& cfg);

/// Applies FRACLINE_<SECTION>__<KEY>=value overrides (for example
/// FRACLINE_TRAINING__MAX_EPOCHS=300, FRACLINE_SEED=7). Values are parsed as
/// JSON when possible and as strings otherwise.
PipelineConfig apply_env_overrides(PipelineConfig cfg, const std::map<std::string, std::string>& env);
std::map<std::string, std::string> environment_with_prefix(const char* prefix = kEnvPrefix);

/// Defaults, then the file (if any), then the environment; validated.
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace fracline
