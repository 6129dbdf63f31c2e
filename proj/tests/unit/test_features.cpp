#include <cmath>
#include <random>

#include "doctest.h"
#include "fracline/features.hpp"

using namespace fracline;
using doctest::Approx;

TEST_CASE("3-4-5 segment") {
  const LineSegment s{0, 0, 3, 4};
  const auto f = extract(s, {10.0, 1.0}, Region::Leg);
  CHECK(f.dist == 5.0);
  CHECK(f.diff_x == 3.0);
  CHECK(f.diff_y == 4.0);
  CHECK(f.mid_x == 1.5);
  CHECK(f.mid_y == 2.0);
  CHECK(f.gradient == Approx(std::atan(0.75) * 180 / M_PI));
  CHECK(f.dist_x == Approx(4.0));
  CHECK(f.dist_y == Approx(3.0));
  CHECK(f.gradient_dev == Approx(std::fabs(10.0 - f.gradient)));
  const auto in = f.inputs();
  CHECK(in[13] == 0.0);
  CHECK(in[14] == 1.0);
  CHECK(in[15] == 0.0);
}

TEST_CASE("gradient conventions") {
  CHECK(line_gradient_deg({0, 0, 0, 10}) == 0.0);
  CHECK(line_gradient_deg({0, 0, 10, 0}) == 90.0);
  CHECK(line_gradient_deg({5, 5, 5, 5}) == 0.0);
  CHECK(line_gradient_deg({0, 10, 10, 0}) == Approx(-45.0));
  CHECK(fold_gradient_deg(-45.0) == Approx(135.0));
  CHECK(fold_gradient_deg(180.0) == 0.0);
}

TEST_CASE("dist_x and dist_y are |dy| and |dx| for any direction") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const LineSegment s = LineSegment{int(rng() % 50), int(rng() % 50), int(rng() % 50), int(rng() % 50)}.normalized();
    const auto f = extract(s, {}, Region::Leg);
    CHECK(f.dist_x == Approx(std::abs(s.y2 - s.y1)).epsilon(1e-12));
    CHECK(f.dist_y == Approx(std::abs(s.x2 - s.x1)).epsilon(1e-12));
  }
}

TEST_CASE("theta_ref is the fullest bin, checked by brute force") {
  std::mt19937_64 rng(2);
  for (int run = 0; run < 30; ++run) {
    std::vector<LineSegment> lines;
    for (int i = 0; i < 25; ++i)
      lines.push_back(LineSegment{int(rng() % 40), int(rng() % 40), int(rng() % 40), int(rng() % 40)}.normalized());
    const double bin = run % 3 == 0 ? 1.0 : run % 3 == 1 ? 5.0 : 10.0;
    // bin k holds gradients in [k - 1/2, k + 1/2) bin widths, wrapping at 180
    int best_count = -1;
    double best = 0;
    for (int k = 0; k * bin < 180.0; ++k) {
      int n = 0;
      for (const auto& l : lines) {
        const double g = fold_gradient_deg(line_gradient_deg(l));
        double d = g - k * bin;
        if (d >= 90.0) d -= 180.0;
        if (d < -90.0) d += 180.0;
        n += d >= -0.5 * bin && d < 0.5 * bin;
      }
      if (n > best_count) best_count = n, best = k * bin;
    }
    CHECK(gradient_reference(lines, bin).theta_ref == Approx(best));
  }
  CHECK_THROWS_AS(gradient_reference({}, 1.0), Error);
}

TEST_CASE("region bands split at 20% and 80% of the height") {
  const RegionBands b;
  CHECK(assign_region({0, 10, 0, 30}, 100, b) == Region::Knee);  // mid 20: boundary belongs to the knee
  CHECK(assign_region({0, 20, 0, 22}, 100, b) == Region::Leg);
  CHECK(assign_region({0, 78, 0, 82}, 100, b) == Region::Leg);   // mid 80
  CHECK(assign_region({0, 80, 0, 82}, 100, b) == Region::Foot);
  CHECK_THROWS_AS(assign_region({}, 100, {0.6, 0.5}), Error);
}

TEST_CASE("theta_ref of an image comes from its leg lines") {
  // two vertical leg lines, three horizontal knee lines
  std::vector<LineSegment> lines{{10, 40, 10, 60}, {20, 40, 20, 60}, {0, 5, 30, 5}, {0, 6, 30, 6}, {0, 7, 30, 7}};
  const auto f = extract_image(lines, 100);
  CHECK(f[0].gradient_dev == 0.0);
  CHECK(f[2].region == Region::Knee);
  CHECK(f[2].gradient_dev == 90.0);
}

TEST_CASE("feature CSV round trip") {
  std::vector<FeatureRow> rows{{"img", 0, extract({1, 2, 7, 30}, {3.0, 1.0}, Region::Foot)},
                               {"img", 1, extract({4, 4, 9, 9}, {3.0, 1.0}, Region::Knee)}};
  const auto back = features_from_csv(features_to_csv(rows));
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].image_id == "img");
    CHECK(back[i].features.inputs() == rows[i].features.inputs());
  }
  CHECK_THROWS_AS(features_from_csv("a,b\n1,2\n"), Error);
}
