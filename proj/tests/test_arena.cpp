#include <catch2/catch_amalgamated.hpp>

#include "nanorace/arena.hpp"
#include "nanorace/rng.hpp"

using namespace nanorace;
using Catch::Approx;

namespace {

Arena arena_with(std::vector<Obstacle> obstacles, std::vector<Gate> gates = {}) {
  ArenaConfig c = ArenaConfig::bare();
  c.obstacles = std::move(obstacles);
  c.gates = std::move(gates);
  return build_arena(c);
}

// random arena used by the property tests
Arena random_arena(RngStream& rng, int n_obstacles) {
  ArenaConfig c = ArenaConfig::bare();
  for (int i = 0; i < n_obstacles; ++i) {
    if (rng.uniform() < 0.5) {
      c.obstacles.push_back(
          Obstacle::pole({rng.uniform(-3.5, 3.5), rng.uniform(-3.5, 3.5)},
                         rng.uniform(0.05, 0.4)));
    } else {
      c.obstacles.push_back(Obstacle::panel({rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                            rng.uniform(0.5, 2.5),
                                            rng.uniform(-kPi, kPi),
                                            rng.uniform(0.0, 0.1)));
    }
  }
  return build_arena(c);
}

}  // namespace

TEST_CASE("default arena geometry") {
  const Arena a = build_arena(ArenaConfig::standard());
  CHECK(a.outer.width() == Approx(10.0));
  CHECK(a.mission.width() == Approx(8.0));
  CHECK(a.waypoints[0] == Vec2{-3, -3});
  CHECK(a.waypoints[1] == Vec2{3, -3});
  CHECK(a.waypoints[2] == Vec2{3, 3});
  CHECK(a.waypoints[3] == Vec2{-3, 3});
  CHECK(a.obstacles.size() == 5);
  CHECK(a.gates.size() == 2);
}

TEST_CASE("degenerate WP square is accepted") {
  ArenaConfig c = ArenaConfig::bare();
  c.wp_half_side = 0.0;
  const Arena a = build_arena(c);
  for (const auto& wp : a.waypoints) CHECK(wp == Vec2{0, 0});
}

TEST_CASE("containment violations are rejected") {
  ArenaConfig c = ArenaConfig::bare();
  c.mission_size = 12.0;
  CHECK_THROWS_MATCHES(build_arena(c), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::invalid_geometry;
                       }));
  ArenaConfig c2 = ArenaConfig::bare();
  c2.wp_half_side = 4.5;
  CHECK_THROWS_AS(build_arena(c2), Error);
  ArenaConfig c3 = ArenaConfig::bare();
  c3.outer_size = -1.0;
  CHECK_THROWS_AS(build_arena(c3), Error);
}

TEST_CASE("ray_cast basics") {
  SECTION("empty arena rays end at the walls") {
    const Arena a = build_arena(ArenaConfig::bare());
    const Hit h = ray_cast(a, {0, 0}, 0.0, 100.0, false);
    CHECK(h.cls == SurfaceClass::WALL);
    CHECK(h.distance == Approx(5.0));
    // capped range -> NONE
    const Hit none = ray_cast(a, {0, 0}, 0.0, 2.0, false);
    CHECK(none.cls == SurfaceClass::NONE);
    CHECK(std::isinf(none.distance));
  }
  SECTION("pole head-on: closed-form distance") {
    const Arena a = arena_with({Obstacle::pole({2, 0}, 0.5)});
    const Hit h = ray_cast(a, {0, 0}, 0.0, 100.0, false);
    CHECK(h.cls == SurfaceClass::OBSTACLE);
    CHECK(h.distance == Approx(1.5));
  }
  SECTION("mission boundary is a surface only when ground-aware") {
    const Arena a = build_arena(ArenaConfig::bare());
    const Hit aware = ray_cast(a, {3, 0}, 0.0, 100.0, true);
    CHECK(aware.cls == SurfaceClass::OUT_OF_AREA_GROUND);
    CHECK(aware.distance == Approx(1.0));
    const Hit off = ray_cast(a, {3, 0}, 0.0, 100.0, false);
    CHECK(off.cls == SurfaceClass::WALL);
    CHECK(off.distance == Approx(2.0));
  }
}

TEST_CASE("ray_cast monotonicity: adding an obstacle never increases distance") {
  RngStream rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const Arena base = random_arena(rng, 3);
    ArenaConfig extended = ArenaConfig::bare();
    extended.obstacles = base.obstacles;
    extended.obstacles.push_back(
        Obstacle::pole({rng.uniform(-3.5, 3.5), rng.uniform(-3.5, 3.5)},
                       rng.uniform(0.05, 0.5)));
    const Arena more = build_arena(extended);
    for (int i = 0; i < 100; ++i) {
      const Vec2 origin{rng.uniform(-4.5, 4.5), rng.uniform(-4.5, 4.5)};
      const double angle = rng.uniform(-kPi, kPi);
      const Hit h0 = ray_cast(base, origin, angle, 100.0, true);
      const Hit h1 = ray_cast(more, origin, angle, 100.0, true);
      CHECK(h1.distance <= h0.distance + 1e-12);
    }
  }
}

TEST_CASE("ray_cast covariance under quarter-turn rotations") {
  // the arena frame is axis-aligned by construction, so the rigid transforms
  // that keep the walls representable are k*90deg rotations about the center
  RngStream rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const Arena base = random_arena(rng, 4);
    for (int k = 1; k < 4; ++k) {
      const double rot = k * kPi / 2.0;
      ArenaConfig rc = ArenaConfig::bare();
      for (const auto& ob : base.obstacles) {
        Obstacle o = ob;
        if (Circle* c = std::get_if<Circle>(&o.shape)) {
          o.shape = Circle{c->center.rotated(rot), c->radius};
        } else {
          auto s = std::get<ThickSegment>(o.shape);
          o.shape = ThickSegment{s.p0.rotated(rot), s.p1.rotated(rot), s.thickness};
        }
        rc.obstacles.push_back(o);
      }
      const Arena rotated = build_arena(rc);
      for (int i = 0; i < 50; ++i) {
        const Vec2 origin{rng.uniform(-4.5, 4.5), rng.uniform(-4.5, 4.5)};
        const double angle = rng.uniform(-kPi, kPi);
        const Hit h0 = ray_cast(base, origin, angle, 100.0, true);
        const Hit h1 = ray_cast(rotated, origin.rotated(rot), angle + rot, 100.0, true);
        if (std::isfinite(h0.distance)) {
          CHECK(h1.distance == Approx(h0.distance).margin(1e-9));
        } else {
          CHECK(!std::isfinite(h1.distance));
        }
      }
    }
  }
}

TEST_CASE("in_mission_area: boundary inclusive, matches half-plane oracle") {
  const Arena a = build_arena(ArenaConfig::bare());
  CHECK(in_mission_area(a, {0, 0}));
  CHECK(in_mission_area(a, {4, 4}));    // mission corner
  CHECK(in_mission_area(a, {-4, 0}));   // mission edge
  CHECK(!in_mission_area(a, {5, 0}));   // outer wall
  CHECK(!in_mission_area(a, {4.01, 0}));
  RngStream rng(13);
  for (int i = 0; i < 10000; ++i) {
    const Vec2 p{rng.uniform(-6, 6), rng.uniform(-6, 6)};
    const bool oracle = p.x >= -4 && p.x <= 4 && p.y >= -4 && p.y <= 4;
    CHECK(in_mission_area(a, p) == oracle);
  }
}

TEST_CASE("gate_pass detects proper opening crossings only") {
  const Gate g{{0, 0}, 0.0, 1.0, 0.25, 0.05};  // opening from (-0.5,0) to (0.5,0)
  CHECK(gate_pass(g, {0, -1}, {0, 1}));
  CHECK(gate_pass(g, {0, 1}, {0, -1}));  // direction agnostic
  CHECK(!gate_pass(g, {-2, 1}, {2, 1}));  // parallel, 1 m off
  CHECK(!gate_pass(g, {0.6, -1}, {0.6, 1}));  // crosses the post line, not the opening
  RngStream rng(14);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec2 q{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(gate_pass(g, p, q) == gate_pass(g, q, p));
  }
}

TEST_CASE("gate posts and opening are consistent") {
  const Gate g{{1, 2}, deg2rad(30), 1.2, 0.3, 0.06};
  const auto o = g.opening();
  const auto posts = g.posts();
  CHECK((o.p1 - o.p0).norm() == Approx(1.2));
  // posts start at the opening endpoints and extend outward
  CHECK((posts[0].p0 - o.p0).norm() == Approx(0.0).margin(1e-12));
  CHECK((posts[1].p0 - o.p1).norm() == Approx(0.0).margin(1e-12));
  CHECK((posts[0].p1 - posts[0].p0).norm() == Approx(0.3));
}

TEST_CASE("move_dynamic_obstacle") {
  ArenaConfig c = ArenaConfig::bare();
  c.obstacles = {Obstacle::pole({2, 2}, 0.2, true), Obstacle::pole({-2, -2}, 0.2, false)};
  const Arena a = build_arena(c);
  const Vec2 drone{0, 0};

  SECTION("deterministic and clearance-respecting") {
    RngStream r1(55), r2(55);
    const Arena m1 = move_dynamic_obstacle(a, drone, r1);
    const Arena m2 = move_dynamic_obstacle(a, drone, r2);
    const auto& c1 = std::get<Circle>(m1.obstacles[0].shape);
    const auto& c2 = std::get<Circle>(m2.obstacles[0].shape);
    CHECK(c1.center == c2.center);
    CHECK(dist_point_circle_surface(drone, c1) >= 1.0);
    CHECK(detail::shape_inside_rect(m1.obstacles[0].shape, a.mission));
    // immovable obstacle untouched
    CHECK(std::get<Circle>(m1.obstacles[1].shape).center == Vec2{-2, -2});
  }
  SECTION("no movable obstacle") {
    ArenaConfig cc = ArenaConfig::bare();
    cc.obstacles = {Obstacle::pole({2, 2}, 0.2, false)};
    const Arena fixed = build_arena(cc);
    RngStream rng(1);
    CHECK_THROWS_MATCHES(move_dynamic_obstacle(fixed, drone, rng), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::no_movable;
                         }));
  }
  SECTION("impossible placement fails after bounded attempts") {
    ArenaConfig cc = ArenaConfig::bare();
    cc.mission_size = 1.0;  // mission too small for a 1 m clearance from center
    cc.obstacles = {Obstacle::pole({0.2, 0.2}, 0.1, true)};
    const Arena tiny = build_arena(cc);
    RngStream rng(1);
    CHECK_THROWS_MATCHES(move_dynamic_obstacle(tiny, {0, 0}, rng), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::placement_failed;
                         }));
  }
}

TEST_CASE("randomize_layout keeps shapes, produces a valid layout") {
  const Arena base = build_arena(ArenaConfig::standard());
  RngStream rng(77);
  const Arena out = randomize_layout(base, {-3, -3}, rng);
  REQUIRE(out.obstacles.size() == base.obstacles.size());
  REQUIRE(out.gates.size() == base.gates.size());
  for (std::size_t i = 0; i < out.obstacles.size(); ++i) {
    CHECK(detail::shape_inside_rect(out.obstacles[i].shape, out.mission));
    CHECK(detail::surface_distance({-3, -3}, out.obstacles[i].shape) >= 1.0);
    // dimensions preserved
    if (const Circle* c0 = std::get_if<Circle>(&base.obstacles[i].shape)) {
      CHECK(std::get<Circle>(out.obstacles[i].shape).radius == c0->radius);
    } else {
      const auto& s0 = std::get<ThickSegment>(base.obstacles[i].shape);
      const auto& s1 = std::get<ThickSegment>(out.obstacles[i].shape);
      CHECK((s1.p1 - s1.p0).norm() == Approx((s0.p1 - s0.p0).norm()));
      CHECK(s1.thickness == s0.thickness);
    }
  }
  // same seed reproduces the layout
  RngStream rng2(77);
  const Arena again = randomize_layout(base, {-3, -3}, rng2);
  for (std::size_t i = 0; i < out.gates.size(); ++i)
    CHECK(out.gates[i].center == again.gates[i].center);
}
