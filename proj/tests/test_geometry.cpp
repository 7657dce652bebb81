#include <cmath>
#include <random>

#include "doctest.h"
#include "drivesim/geometry.hpp"

using namespace drivesim;

namespace {

// Brute-force oracle: pairwise vertex-to-edge distances plus an independent
// containment/crossing overlap check.
bool point_in_quad(const Vec2& p, const std::array<Vec2, 4>& q) {
  // CCW polygon: inside iff left of every edge.
  for (int i = 0; i < 4; ++i) {
    const Vec2 a = q[i];
    const Vec2 b = q[(i + 1) % 4];
    if ((b - a).cross(p - a) < 0.0) {
      return false;
    }
  }
  return true;
}

bool oracle_segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  auto side = [](const Vec2& p, const Vec2& q, const Vec2& r) { return (q - p).cross(r - p); };
  const double d1 = side(a0, a1, b0);
  const double d2 = side(a0, a1, b1);
  const double d3 = side(b0, b1, a0);
  const double d4 = side(b0, b1, a1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double oracle_min_distance(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  for (const Vec2& p : ca) {
    if (point_in_quad(p, cb)) return 0.0;
  }
  for (const Vec2& p : cb) {
    if (point_in_quad(p, ca)) return 0.0;
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (oracle_segments_cross(ca[i], ca[(i + 1) % 4], cb[j], cb[(j + 1) % 4])) {
        return 0.0;
      }
    }
  }
  double best = 1e300;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(ca[i], cb[j], cb[(j + 1) % 4]));
      best = std::min(best, point_segment_distance(cb[i], ca[j], ca[(j + 1) % 4]));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("frame transform identity") {
  const Pose2D ego{0, 0, 0};
  const Pose2D g = to_global(ego, {1, 2, 0});
  CHECK(g.x == doctest::Approx(1.0));
  CHECK(g.y == doctest::Approx(2.0));
  CHECK(g.yaw == doctest::Approx(0.0));
}

TEST_CASE("frame transform quarter turn") {
  const Pose2D ego{0, 0, kPi / 2};
  const Pose2D g = to_global(ego, {1, 0, 0});
  CHECK(g.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.y == doctest::Approx(1.0));
  CHECK(g.yaw == doctest::Approx(kPi / 2));
}

TEST_CASE("frame round trip on random poses") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  double max_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Pose2D ego{coord(rng), coord(rng), ang(rng)};
    const Pose2D p{coord(rng), coord(rng), ang(rng)};
    const Pose2D back = to_ego(ego, to_global(ego, p));
    max_err = std::max(max_err, std::abs(back.x - p.x));
    max_err = std::max(max_err, std::abs(back.y - p.y));
    max_err = std::max(max_err, std::abs(wrap_angle(back.yaw - p.yaw)));
  }
  CHECK(max_err < 1e-9);
}

TEST_CASE("transform composes like pose composition") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const Pose2D a{coord(rng), coord(rng), ang(rng)};
    const Pose2D b{coord(rng), coord(rng), ang(rng)};
    const Pose2D p{coord(rng), coord(rng), ang(rng)};
    const Pose2D lhs = to_global(a, to_global(b, p));
    const Pose2D rhs = to_global(to_global(a, b), p);
    CHECK(lhs.x == doctest::Approx(rhs.x).epsilon(1e-9));
    CHECK(lhs.y == doctest::Approx(rhs.y).epsilon(1e-9));
    CHECK(wrap_angle(lhs.yaw - rhs.yaw) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ang(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double w = wrap_angle(ang(rng));
    CHECK(w > -kPi);
    CHECK(w <= kPi);
  }
}

TEST_CASE("projection on straight path") {
  std::vector<Pose2D> pts;
  for (int i = 0; i <= 10; ++i) {
    pts.push_back({static_cast<double>(i), 0.0, 0.0});
  }
  const Polyline path(pts);

  SUBCASE("left offset point") {
    const PathProjection pr = path.project({3.0, 2.0});
    CHECK(pr.s == doctest::Approx(3.0));
    CHECK(pr.lateral == doctest::Approx(2.0));
  }
  SUBCASE("right offset is negative") {
    const PathProjection pr = path.project({4.5, -1.0});
    CHECK(pr.lateral == doctest::Approx(-1.0));
  }
  SUBCASE("point on path") {
    const PathProjection pr = path.project({6.25, 0.0});
    CHECK(pr.s == doctest::Approx(6.25));
    CHECK(pr.lateral == doctest::Approx(0.0));
  }
  SUBCASE("point before start clamps to s=0") {
    const PathProjection pr = path.project({-2.0, 1.0});
    CHECK(pr.s == doctest::Approx(0.0));
  }
  SUBCASE("foot point reconstruction") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> along(0.0, 10.0);
    std::uniform_real_distribution<double> off(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
      const double x = along(rng);
      const double y = off(rng);
      const PathProjection pr = path.project({x, y});
      const Pose2D foot = path.pose_at(pr.s);
      const double rx = foot.x - pr.lateral * std::sin(foot.yaw);
      const double ry = foot.y + pr.lateral * std::cos(foot.yaw);
      CHECK(rx == doctest::Approx(x).epsilon(1e-9));
      CHECK(ry == doctest::Approx(y).epsilon(1e-9));
    }
  }
}

TEST_CASE("projection requires two points") {
  Polyline p(std::vector<Pose2D>{{0, 0, 0}});
  CHECK_THROWS(p.project({1.0, 1.0}));
}

TEST_CASE("oriented box corners are counterclockwise with exact area") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> dim(0.3, 6.0);
  for (int i = 0; i < 200; ++i) {
    const OrientedBox box{{coord(rng), coord(rng), ang(rng)}, dim(rng), dim(rng)};
    const auto c = box.corners();
    double twice_area = 0.0;
    for (int k = 0; k < 4; ++k) {
      twice_area += c[k].cross(c[(k + 1) % 4]);
    }
    CHECK(twice_area > 0.0);
    CHECK(twice_area / 2.0 == doctest::Approx(box.length * box.width).epsilon(1e-9));
  }
}

TEST_CASE("polygon distance of separated unit squares") {
  const OrientedBox a{{0, 0, 0}, 1, 1};
  const OrientedBox b{{3, 0, 0}, 1, 1};
  CHECK(min_polygon_distance(a, b) == doctest::Approx(2.0));
}

TEST_CASE("polygon distance zero on overlap") {
  const OrientedBox a{{0, 0, 0.3}, 2, 1};
  const OrientedBox b{{0.5, 0.2, -0.4}, 2, 1};
  CHECK(min_polygon_distance(a, b) == 0.0);
  CHECK(boxes_overlap(a, b));
}

TEST_CASE("touching boxes have zero distance but do not overlap") {
  const OrientedBox a{{0, 0, 0}, 2, 2};
  const OrientedBox b{{2, 0, 0}, 2, 2};
  CHECK(min_polygon_distance(a, b) == doctest::Approx(0.0));
  CHECK_FALSE(boxes_overlap(a, b));
}

TEST_CASE("polygon distance matches brute-force oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coord(-8.0, 8.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> dim(0.4, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const OrientedBox a{{coord(rng), coord(rng), ang(rng)}, dim(rng), dim(rng)};
    const OrientedBox b{{coord(rng), coord(rng), ang(rng)}, dim(rng), dim(rng)};
    const double got = min_polygon_distance(a, b);
    const double want = oracle_min_distance(a, b);
    CHECK(std::abs(got - want) < 1e-6);
    CHECK(got == min_polygon_distance(b, a));  // symmetric, exactly
  }
}
