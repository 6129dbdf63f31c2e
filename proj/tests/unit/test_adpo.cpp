#include <set>

#include "doctest.h"
#include "fracline/adpo.hpp"
#include "fracline/synth.hpp"

using namespace fracline;

TEST_CASE("the clutter image plants l_min = 7") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto img = synth::clutter_image(seed);
    for (bool absolute : {false, true})
      for (auto mode : {HoughMode::Probabilistic, HoughMode::Exhaustive}) {
        AdpoOptions opt;
        opt.absolute_delta = absolute;
        opt.mode = mode;
        CHECK(optimize_min_line_length(img.edges, HoughParams::adpo(), seed, opt).chosen == 7);
      }
  }
}

TEST_CASE("sweep bookkeeping") {
  const auto img = synth::clutter_image(2);
  const auto s = optimize_min_line_length(img.edges, HoughParams::adpo(), 2);
  REQUIRE(s.min_lengths.size() == 25);
  CHECK(s.min_lengths.front() == 1);
  CHECK(s.delta_avg_gradient.size() == 24);
  for (std::size_t k = 1; k < 25; ++k) {
    CHECK(s.delta_avg_gradient[k - 1] == s.avg_gradient[k] - s.avg_gradient[k - 1]);
    if (!s.lines[k].empty()) CHECK(s.avg_gradient[k] == average_gradient(s.lines[k]));
  }
  const auto csv = sweep_to_csv(s);
  CHECK(csv.find("l_min,num_lines") == 0);
}

TEST_CASE("borrowed lines: union of the chosen length and the two below, no duplicates") {
  const auto img = synth::clutter_image(3);
  const auto s = optimize_min_line_length(img.edges, HoughParams::adpo(), 3);
  const auto b = borrow_lines(s);
  const std::set<LineSegment> u(b.begin(), b.end());
  CHECK(u.size() == b.size());
  std::set<LineSegment> want;
  for (int l = s.chosen - 2; l <= s.chosen; ++l)
    for (const auto& x : s.lines_at(l)) want.insert(x);
  CHECK(u == want);
}

TEST_CASE("borrowing stops at the lower end of the range") {
  AdpoSweep s;
  s.min_lengths = {1, 2, 3};
  s.lines = {{{0, 0, 0, 5}}, {{0, 0, 0, 5}, {1, 1, 1, 9}}, {{2, 2, 2, 9}}};
  s.chosen = 2;
  const auto b = borrow_lines(s);
  CHECK(b == std::vector<LineSegment>{{0, 0, 0, 5}, {1, 1, 1, 9}});
}

TEST_CASE("empty lengths carry the previous average forward") {
  EdgeImage img(40, 40);
  synth::draw_line(img, {5, 5, 5, 12});  // a single 7-pixel line
  AdpoOptions opt;
  opt.min_length_hi = 10;
  const auto s = optimize_min_line_length(img, HoughParams::adpo(), 1, opt);
  CHECK(s.lines_at(10).empty());
  CHECK(s.avg_gradient.back() == s.avg_gradient[6]);
  CHECK_FALSE(s.warnings.empty());
}

TEST_CASE("sweep preconditions") {
  EdgeImage img(20, 20);
  CHECK_THROWS_AS(optimize_min_line_length(img, HoughParams::standard(), 1), Error);  // threshold 10
  AdpoOptions opt;
  opt.min_length_lo = 5;
  opt.min_length_hi = 5;
  CHECK_THROWS_AS(optimize_min_line_length(img, HoughParams::adpo(), 1, opt), Error);
  CHECK_THROWS_AS(average_gradient({}), Error);
}

TEST_CASE("max gap sweep reports one count per gap") {
  const auto img = synth::clutter_image(1);
  const auto r = max_gap_sweep(img.edges, HoughParams::standard(), 1, 10, 20);
  REQUIRE(r.size() == 11);
  CHECK(r.front().first == 10);
  CHECK(r.back().first == 20);
}
