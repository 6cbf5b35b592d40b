#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "seeds3d/error.hpp"
#include "seeds3d/types.hpp"

using namespace seeds3d;

TEST_CASE("assign_bin maps the unit interval onto num_bins bins") {
  CHECK(assign_bin(0.0, 15) == 0);
  CHECK(assign_bin(1.0, 15) == 14);
  CHECK(assign_bin(0.5, 15) == 7);  // floor(7.5)
  CHECK(assign_bin(0.999999, 1) == 0);
  CHECK_THROWS_AS(assign_bin(-0.01, 15), DomainError);
  CHECK_THROWS_AS(assign_bin(1.01, 15), DomainError);
  CHECK_THROWS_AS(assign_bin(std::nan(""), 15), DomainError);
  CHECK_THROWS_AS(assign_bin(0.5, 0), DomainError);
}

TEST_CASE("assign_bin agrees with floor(v * B) and is monotone") {
  for (int b : {1, 2, 7, 15, 64}) {
    std::size_t prev = 0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = i / 1000.0;
      const auto got = assign_bin(v, b);
      const auto want = std::min<std::size_t>(static_cast<std::size_t>(std::floor(v * b)), static_cast<std::size_t>(b - 1));
      REQUIRE(got == want);
      REQUIRE(got >= prev);
      prev = got;
    }
  }
}

TEST_CASE("histogram_of counts assigned bins") {
  const std::vector<float> none;
  const Histogram empty = histogram_of(none, 15);
  CHECK(empty.total == 0);
  CHECK(empty.bins == std::vector<std::int64_t>(15, 0));

  const std::vector<float> three{0.0f, 0.0f, 1.0f};
  const Histogram h = histogram_of(three, 2);
  CHECK(h.bins == std::vector<std::int64_t>{2, 1});
  CHECK(h.total == 3);

  const std::vector<float> half{0.5f};
  const Histogram g = histogram_of(half, 15);
  CHECK(g.bins[7] == 1);
  CHECK(g.total == 1);

  const std::vector<float> bad{0.2f, 1.5f};
  CHECK_THROWS_AS(histogram_of(bad, 15), DomainError);
}

TEST_CASE("histogram total equals the set size") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<float> v(rng() % 200);
    for (float& x : v) x = u(rng);
    const Histogram h = histogram_of(v, 15);
    CHECK(h.total == static_cast<std::int64_t>(v.size()));
    CHECK(std::accumulate(h.bins.begin(), h.bins.end(), std::int64_t{0}) == h.total);
  }
}

TEST_CASE("default parameters") {
  const SeedsParams p;
  CHECK(p.num_bins == 15);
  CHECK(p.prior_weight == 2);
  CHECK(p.block_iterations == 2);
  CHECK(p.pixel_iterations == 4);
  CHECK(p.mode == Mode::ThreeD);
  CHECK_NOTHROW(p.validate());

  SeedsParams bad;
  bad.num_supervoxels = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
  bad = SeedsParams{};
  bad.prior_weight = -1;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
  bad = SeedsParams{};
  bad.pixel_iterations = -1;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("dims index and coord are inverse") {
  const Dims d(5, 3, 4);
  CHECK(d.size() == 60);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto c = d.coord(i);
    CHECK(d.index(c[0], c[1], c[2]) == i);
  }
  CHECK(d.index(1, 0, 0) == 1);  // axis 0 fastest
  CHECK(d.index(0, 1, 0) == 5);
  CHECK(d.index(0, 0, 1) == 15);
}

TEST_CASE("directions") {
  CHECK(axis_of(Direction::PlusCoronal) == 1);
  CHECK(sign_of(Direction::MinusAxial) == -1);
  CHECK(opposite(Direction::MinusSagittal) == Direction::PlusSagittal);
  CHECK(opposite(Direction::PlusAxial) == Direction::MinusAxial);
}

TEST_CASE("volume range checks") {
  Volume v(Dims(2, 2, 2), 0.5f);
  CHECK(v.in_unit_range());
  CHECK_NOTHROW(v.require_unit_range());
  v.at(1, 1, 1) = 1.25f;
  CHECK_FALSE(v.in_unit_range());
  CHECK_THROWS_WITH_AS(v.require_unit_range(), doctest::Contains("(1,1,1)"), DomainError);
  CHECK_THROWS_AS(Volume(Dims(2, 2, 2), std::vector<float>(7)), DomainError);
}

TEST_CASE("label field partition") {
  const LabelField f(Dims(2, 2, 1), {0, 1, 1, 2}, 3);
  const auto s = f.sizes();
  CHECK(s == std::vector<std::int64_t>{1, 2, 1});
  CHECK(std::accumulate(s.begin(), s.end(), std::int64_t{0}) == 4);
  CHECK_THROWS_AS(LabelField(Dims(2, 2, 1), {0, 1, 3, 2}, 3), DomainError);
  CHECK_THROWS_AS(LabelField(Dims(2, 2, 1), {0, 1, 2}, 3), DomainError);
}

TEST_CASE("ground truth class count") {
  const GroundTruth g(Dims(2, 1, 1), {0, 3});
  CHECK(g.class_count == 4);
  CHECK(GroundTruth(Dims(2, 1, 1), {0, 3}, 6).class_count == 6);
  CHECK_THROWS_AS(GroundTruth(Dims(2, 1, 1), {0, 3}, 2), DomainError);
  CHECK_THROWS_AS(GroundTruth(Dims(2, 1, 1), {0, -1}), DomainError);
}
