#include "fracline/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "fracline/error.hpp"

extern char** environ;

namespace fracline {

using nlohmann::json;

const char* scheme_name(Scheme s) { return s == Scheme::Adpo ? "adpo" : "standard"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "standard") return Scheme::Standard;
  if (s == "adpo") return Scheme::Adpo;
  fail(ErrorCode::InvalidConfig, "unknown scheme '" + s + "' (expected standard or adpo)");
}

void PipelineConfig::validate() const {
  enhancement.validate();
  bands.validate();
  if (!(gradient_bin_deg > 0.0 && gradient_bin_deg <= 180.0))
    fail(ErrorCode::InvalidConfig, "features.gradient_bin_deg must lie in (0, 180]");
  standard.validate();
  adpo.validate();
  if (adpo.threshold != 1) fail(ErrorCode::InvalidConfig, "adpo.threshold must be 1");
  if (adpo_options.min_length_lo < 1 || adpo_options.min_length_hi <= adpo_options.min_length_lo)
    fail(ErrorCode::InvalidConfig, "adpo.min_length_range must satisfy 1 <= lo < hi");
  if (gap_lo < 0 || gap_hi < gap_lo) fail(ErrorCode::InvalidConfig, "adpo.gap_range must satisfy 0 <= lo <= hi");
  if (!(window_frac > 0.0 && window_frac <= 1.0)) fail(ErrorCode::InvalidConfig, "adpo.window_frac must lie in (0, 1]");
  if (!(bounds.rise_tolerance >= 0.0)) fail(ErrorCode::InvalidConfig, "adpo.rise_tolerance must be >= 0");
  if (!(bounds.drop_fraction >= 0.0 && bounds.drop_fraction <= 1.0))
    fail(ErrorCode::InvalidConfig, "adpo.drop_fraction must lie in [0, 1]");
  training.validate();
  if (eval.cases < 1 || eval.sims < 1 || eval.test_images < 1 || eval.line_group < 1 || eval.line_sims < 1 ||
      eval.max_lines < 2 * eval.line_group || eval.update_budget < 0)
    fail(ErrorCode::InvalidConfig, "eval settings must be positive (update_budget >= 0) and max_lines >= 2 * line_group");
}

namespace {

// One settable key: reads from JSON into the config, writes back out.
struct Field {
  std::function<void(PipelineConfig&, const json&)> set;
  std::function<json(const PipelineConfig&)> get;
};

template <class T, class M>
Field member(M m) {
  return {[m](PipelineConfig& c, const json& v) { std::invoke(m, c) = v.get<T>(); },
          [m](const PipelineConfig& c) { return json(std::invoke(m, const_cast<PipelineConfig&>(c))); }};
}

Field degrees(HoughParams PipelineConfig::*which) {
  return {[which](PipelineConfig& c, const json& v) { (c.*which).theta = v.get<double>() * M_PI / 180.0; },
          [which](const PipelineConfig& c) { return json((c.*which).theta * 180.0 / M_PI); }};
}

Field range(int PipelineConfig::*lo, int PipelineConfig::*hi) {
  return {[lo, hi](PipelineConfig& c, const json& v) {
            const auto r = v.get<std::vector<int>>();
            if (r.size() != 2) throw json::type_error::create(302, "range must be [lo, hi]", nullptr);
            c.*lo = r[0];
            c.*hi = r[1];
          },
          [lo, hi](const PipelineConfig& c) { return json::array({c.*lo, c.*hi}); }};
}

using Schema = std::map<std::string, std::map<std::string, Field>>;

template <class T>
Field hough_field(HoughParams PipelineConfig::*which, T HoughParams::*m) {
  return {[which, m](PipelineConfig& c, const json& v) { (c.*which).*m = v.get<T>(); },
          [which, m](const PipelineConfig& c) { return json((c.*which).*m); }};
}

std::map<std::string, Field> hough_section(HoughParams PipelineConfig::*which) {
  return {{"rho", hough_field(which, &HoughParams::rho)},
          {"theta_deg", degrees(which)},
          {"threshold", hough_field(which, &HoughParams::threshold)},
          {"min_line_length", hough_field(which, &HoughParams::min_line_length)},
          {"max_line_gap", hough_field(which, &HoughParams::max_line_gap)}};
}

const Schema& schema() {
  static const Schema s = [] {
    Schema s;
    auto& e = s["enhancement"];
    e["gamma"] = member<double>([](PipelineConfig& c) -> auto& { return c.enhancement.gamma; });
    e["unsharp_amount"] = member<double>([](PipelineConfig& c) -> auto& { return c.enhancement.unsharp_amount; });
    e["unsharp_radius"] = member<int>([](PipelineConfig& c) -> auto& { return c.enhancement.unsharp_radius; });
    e["denoise_kernel"] = member<int>([](PipelineConfig& c) -> auto& { return c.enhancement.denoise_kernel; });
    e["white_threshold"] = member<int>([](PipelineConfig& c) -> auto& { return c.enhancement.white_threshold; });
    e["canny_low"] = member<int>([](PipelineConfig& c) -> auto& { return c.enhancement.canny_low; });
    e["canny_high"] = member<int>([](PipelineConfig& c) -> auto& { return c.enhancement.canny_high; });

    auto& f = s["features"];
    f["knee_frac"] = member<double>([](PipelineConfig& c) -> auto& { return c.bands.knee_frac; });
    f["foot_frac"] = member<double>([](PipelineConfig& c) -> auto& { return c.bands.foot_frac; });
    f["gradient_bin_deg"] = member<double>([](PipelineConfig& c) -> auto& { return c.gradient_bin_deg; });

    s["standard"] = hough_section(&PipelineConfig::standard);
    auto& a = s["adpo"];
    a = hough_section(&PipelineConfig::adpo);
    a.erase("min_line_length");
    a["min_length_range"] = {[](PipelineConfig& c, const json& v) {
                               const auto r = v.get<std::vector<int>>();
                               if (r.size() != 2) throw json::type_error::create(302, "range must be [lo, hi]", nullptr);
                               c.adpo_options.min_length_lo = r[0];
                               c.adpo_options.min_length_hi = r[1];
                             },
                             [](const PipelineConfig& c) {
                               return json::array({c.adpo_options.min_length_lo, c.adpo_options.min_length_hi});
                             }};
    a["gap_range"] = range(&PipelineConfig::gap_lo, &PipelineConfig::gap_hi);
    a["absolute_delta"] = member<bool>([](PipelineConfig& c) -> auto& { return c.adpo_options.absolute_delta; });
    a["window_frac"] = member<double>([](PipelineConfig& c) -> auto& { return c.window_frac; });
    a["smooth_radius"] = member<int>([](PipelineConfig& c) -> auto& { return c.bounds.smooth_radius; });
    a["rise_tolerance"] = member<double>([](PipelineConfig& c) -> auto& { return c.bounds.rise_tolerance; });
    a["drop_fraction"] = member<double>([](PipelineConfig& c) -> auto& { return c.bounds.drop_fraction; });

    auto& t = s["training"];
    t["max_epochs"] = member<int>([](PipelineConfig& c) -> auto& { return c.training.max_epochs; });
    t["desired_error"] = member<double>([](PipelineConfig& c) -> auto& { return c.training.desired_error; });
    t["learning_rate"] = member<double>([](PipelineConfig& c) -> auto& { return c.training.learning_rate; });
    t["batch_size"] = member<int>([](PipelineConfig& c) -> auto& { return c.training.batch_size; });
    t["shuffle"] = member<bool>([](PipelineConfig& c) -> auto& { return c.training.shuffle; });

    auto& v = s["eval"];
    v["cases"] = member<int>([](PipelineConfig& c) -> auto& { return c.eval.cases; });
    v["sims"] = member<int>([](PipelineConfig& c) -> auto& { return c.eval.sims; });
    v["test_images"] = member<int>([](PipelineConfig& c) -> auto& { return c.eval.test_images; });
    v["line_group"] = member<int>([](PipelineConfig& c) -> auto& { return c.eval.line_group; });
    v["max_lines"] = member<int>([](PipelineConfig& c) -> auto& { return c.eval.max_lines; });
    v["line_sims"] = member<int>([](PipelineConfig& c) -> auto& { return c.eval.line_sims; });
    v["update_budget"] = member<long>([](PipelineConfig& c) -> auto& { return c.eval.update_budget; });
    return s;
  }();
  return s;
}

void set_key(PipelineConfig& cfg, const std::string& section, const std::string& key, const json& v) {
  const auto& s = schema();
  auto sec = s.find(section);
  if (sec == s.end()) fail(ErrorCode::InvalidConfig, "unknown config section '" + section + "'");
  auto f = sec->second.find(key);
  if (f == sec->second.end()) fail(ErrorCode::InvalidConfig, "unknown config key '" + section + "." + key + "'");
  try {
    f->second.set(cfg, v);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidConfig, "bad value for '" + section + "." + key + "': " + e.what());
  }
}

void set_seed(PipelineConfig& cfg, const json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    fail(ErrorCode::InvalidConfig, "seed must be a non-negative integer");
  cfg.seed = v.get<std::uint64_t>();
}

}  // namespace

PipelineConfig config_from_json(const std::string& text, PipelineConfig cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::InvalidConfig, "config must be a JSON object");
  for (const auto& [section, body] : j.items()) {
    if (section == "seed") {
      set_seed(cfg, body);
      continue;
    }
    if (!schema().count(section)) fail(ErrorCode::InvalidConfig, "unknown config section '" + section + "'");
    if (!body.is_object()) fail(ErrorCode::InvalidConfig, "config section '" + section + "' must be an object");
    for (const auto& [key, v] : body.items()) set_key(cfg, section, key, v);
  }
  return cfg;
}

std::string config_to_json(const PipelineConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  for (const auto& [section, fields] : schema())
    for (const auto& [key, f] : fields) j[section][key] = f.get(cfg);
  return j.dump(2);
}

PipelineConfig apply_env_overrides(PipelineConfig cfg, const std::map<std::string, std::string>& env) {
  const std::string prefix = kEnvPrefix;
  for (const auto& [name, raw] : env) {
    if (name.rfind(prefix, 0) != 0) continue;
    std::string rest = name.substr(prefix.size());
    std::transform(rest.begin(), rest.end(), rest.begin(), [](unsigned char c) { return std::tolower(c); });
    json v = json::parse(raw, nullptr, false);
    if (v.is_discarded()) v = raw;
    if (rest == "seed") {
      set_seed(cfg, v);
      continue;
    }
    const auto sep = rest.find("__");
    if (sep == std::string::npos) continue;  // other FRACLINE_ variables (ports, paths) belong to the CLI
    set_key(cfg, rest.substr(0, sep), rest.substr(sep + 2), v);
  }
  return cfg;
}

std::map<std::string, std::string> environment_with_prefix(const char* prefix) {
  std::map<std::string, std::string> out;
  const std::string p = prefix;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv = *e;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    if (kv.rfind(p, 0) == 0) out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::NotFound, "cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = config_from_json(ss.str(), cfg);
  }
  cfg = apply_env_overrides(cfg, environment_with_prefix());
  cfg.validate();
  return cfg;
}

}  // namespace fracline
