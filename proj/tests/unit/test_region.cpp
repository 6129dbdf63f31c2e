#include <random>

#include "doctest.h"
#include "fracline/region_filter.hpp"
#include "fracline/synth.hpp"
#include "support/oracles.hpp"

using namespace fracline;

namespace {

DensityProfile profile_of(std::vector<double> v) {
  DensityProfile p;
  p.totals = std::move(v);
  return p;
}

BoundsOptions exact() {
  BoundsOptions o;
  o.smooth_radius = 0;
  return o;
}

}  // namespace

TEST_CASE("density matches a brute-force count") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> x(0, 119), y(0, 80);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LineSegment> lines;
    for (int i = 0; i < 40; ++i) lines.push_back(LineSegment{x(rng), y(rng), x(rng), y(rng)}.normalized());
    for (int w : {1, 3, 6}) CHECK(density_profile_with_window(lines, 120, w).totals == oracle::density(lines, 120, w));
  }
  CHECK(window_length(400, 0.05) == 20);
  CHECK(window_length(10, 0.01) == 1);
}

TEST_CASE("triangular peak is bounded by its zeros") {
  std::vector<double> v(120, 0.0);
  for (int i = 40; i <= 80; ++i) v[i] = 20 - std::abs(i - 60);
  const auto b = bone_bounds(profile_of(v), exact());
  CHECK(b.lower == 40);
  CHECK(b.upper == 80);
}

TEST_CASE("a valley between two humps ends the walk") {
  std::vector<double> v(140, 0.0);
  for (int i = 0; i < 140; ++i) v[i] = std::max({20.0 - std::abs(i - 60), 12.0 - std::abs(i - 90), 0.0});
  // the right side bottoms out at 1 (i = 79) before climbing into the second hump
  const auto b = bone_bounds(profile_of(v), exact());
  CHECK(b.lower == 40);
  CHECK(b.upper == 79);
}

TEST_CASE("shallow notches near the peak are ignored") {
  std::vector<double> v(120, 0.0);
  for (int i = 40; i <= 80; ++i) v[i] = 20 - std::abs(i - 60);
  v[65] = 13;  // 16, 13, 14: a local minimum well above half the peak
  const auto b = bone_bounds(profile_of(v), exact());
  CHECK(b.upper == 80);
}

TEST_CASE("all-zero profile has no bounds") {
  CHECK_THROWS_AS(bone_bounds(profile_of(std::vector<double>(50, 0.0))), Error);
}

TEST_CASE("moving average truncates at the borders") {
  const auto m = moving_average({1, 2, 3, 4}, 1);
  CHECK(m == std::vector<double>{1.5, 2, 3, 3.5});
  CHECK(moving_average({1, 2}, 0) == std::vector<double>{1, 2});
}

TEST_CASE("bone lines survive the filter, flesh lines mostly do not") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = synth::two_cluster_lines(seed);
    auto all = c.bone;
    all.insert(all.end(), c.flesh.begin(), c.flesh.end());
    const auto b = bone_bounds(density_profile(all, c.width));
    const auto kept = filter_leg_lines(all, b);
    std::size_t bone = 0, flesh = 0;
    for (const auto& l : kept) {
      bone += std::count(c.bone.begin(), c.bone.end(), l) > 0;
      flesh += std::count(c.flesh.begin(), c.flesh.end(), l) > 0;
    }
    CHECK(bone >= c.bone.size() * 9 / 10);
    CHECK(flesh <= c.flesh.size() / 5);
  }
}

TEST_CASE("leg filter keeps midpoints inside the bounds in order") {
  const std::vector<LineSegment> lines{{10, 0, 30, 5}, {0, 0, 2, 9}, {18, 3, 22, 4}, {40, 0, 41, 9}};
  const auto kept = filter_leg_lines(lines, {20, 30});
  CHECK(kept == std::vector<LineSegment>{{10, 0, 30, 5}, {18, 3, 22, 4}});
}
