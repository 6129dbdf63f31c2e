#include <functional>

#include "doctest.h"
#include "fracline/config.hpp"

using namespace fracline;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("partial JSON keeps the other defaults") {
  const auto c = config_from_json(R"({"seed": 9, "standard": {"threshold": 12}, "adpo": {"min_length_range": [2, 20]}})");
  CHECK(c.seed == 9);
  CHECK(c.standard.threshold == 12);
  CHECK(c.standard.min_line_length == HoughParams::standard().min_line_length);
  CHECK(c.adpo_options.min_length_lo == 2);
  CHECK(c.adpo_options.min_length_hi == 20);
  CHECK(c.training.learning_rate == 0.01);
}

TEST_CASE("unknown or ill-typed settings are configuration errors") {
  for (const char* text : {R"({"standard": {"treshold": 1}})", R"({"extras": {}})", R"({"training": {"max_epochs": "many"}})",
                           R"({"training": 3})", R"([1, 2])", "{not json", R"({"seed": -1})",
                           R"({"adpo": {"min_length_range": [1]}})"}) {
    CAPTURE(text);
    CHECK(code_of([&] { config_from_json(text); }) == ErrorCode::InvalidConfig);
  }
}

TEST_CASE("JSON round trip") {
  PipelineConfig c;
  c.seed = 77;
  c.enhancement.gamma = 1.7;
  c.adpo_options.absolute_delta = true;
  c.gap_lo = 12;
  c.eval.update_budget = 0;
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.seed == 77);
  CHECK(back.enhancement.gamma == 1.7);
  CHECK(back.adpo_options.absolute_delta);
  CHECK(back.gap_lo == 12);
  CHECK(back.eval.update_budget == 0);
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("environment overrides") {
  const auto c = apply_env_overrides({}, {{"FRACLINE_TRAINING__MAX_EPOCHS", "300"},
                                         {"FRACLINE_SEED", "5"},
                                         {"FRACLINE_ADPO__ABSOLUTE_DELTA", "true"},
                                         {"FRACLINE_PORT", "9000"},
                                         {"OTHER", "1"}});
  CHECK(c.training.max_epochs == 300);
  CHECK(c.seed == 5);
  CHECK(c.adpo_options.absolute_delta);
  CHECK(code_of([] { apply_env_overrides({}, {{"FRACLINE_TRAINING__NOPE", "1"}}); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("validation") {
  CHECK_NOTHROW(PipelineConfig{}.validate());
  PipelineConfig c;
  c.adpo.threshold = 2;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.window_frac = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.eval.max_lines = 3;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.adpo_options.min_length_hi = c.adpo_options.min_length_lo;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(code_of([] { load_config("/nonexistent/fracline.json"); }) == ErrorCode::NotFound);
}

TEST_CASE("scheme names") {
  CHECK(parse_scheme("adpo") == Scheme::Adpo);
  CHECK(std::string(scheme_name(parse_scheme("standard"))) == "standard");
  CHECK_THROWS_AS(parse_scheme("fast"), Error);
}
