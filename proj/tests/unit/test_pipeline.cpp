#include "doctest.h"
#include "fracline/pipeline.hpp"
#include "fracline/synth.hpp"

using namespace fracline;

TEST_CASE("per-image seeds depend on the id and the master seed only") {
  CHECK(image_seed(1, "xr001") == image_seed(1, "xr001"));
  CHECK(image_seed(1, "xr001") != image_seed(1, "xr002"));
  CHECK(image_seed(1, "xr001") != image_seed(2, "xr001"));
}

TEST_CASE("fracture CSV round trip") {
  std::vector<AnnotatedImage> imgs(2);
  imgs[0].id = "a";
  imgs[0].fractures = {{1, 2, 3, 4}, {5, 6, 7, 8}};
  imgs[1].id = "b";
  const auto back = fractures_from_csv(fractures_to_csv(imgs));
  REQUIRE(back.count("a"));
  CHECK(back.at("a").size() == 2);
  CHECK(back.at("a")[1].height == 8);
  CHECK_FALSE(back.count("b"));
}

TEST_CASE("the last images are held out") {
  std::vector<ImageSample> s(5);
  for (int i = 0; i < 5; ++i) s[i].image_id = std::to_string(i);
  const auto sp = split_samples(s, 2);
  REQUIRE(sp.train.size() == 3);
  REQUIRE(sp.test.size() == 2);
  CHECK(sp.test[0].image_id == "3");
  CHECK_THROWS_AS(split_samples(s, 5), Error);
  CHECK_THROWS_AS(split_samples(s, 0), Error);
}

TEST_CASE("labelled samples from a rendered radiograph") {
  PipelineConfig cfg;
  const auto x = synth::xray(4, "xr", 200, 320);
  for (Scheme s : {Scheme::Standard, Scheme::Adpo}) {
    const auto d = detect_image(x.image, x.id, s, cfg);
    CHECK_FALSE(d.lines.empty());
    CHECK(d.sweep.has_value() == (s == Scheme::Adpo));
    if (s == Scheme::Standard) CHECK(d.screened.empty());
    const auto sample = labeled_sample(d, x.fractures, cfg);
    CHECK(sample.rows.size() == d.lines.size());
    CHECK(sample.screened_out.size() == d.screened.size());
    for (std::size_t i = 0; i < d.lines.size(); ++i) {
      const auto& l = d.lines[i];
      bool inside = false;
      for (const auto& r : x.fractures) inside |= r.contains(l.x1, l.y1) || r.contains(l.x2, l.y2);
      CHECK((sample.rows[i].target > 0) == inside);
    }
    CHECK(pooled_rows({sample, sample}).size() == 2 * sample.rows.size());
  }
}
