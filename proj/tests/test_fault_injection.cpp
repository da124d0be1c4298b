#include <cmath>
#include <set>

#include <doctest.h>

#include "percmon/fault_injection.hpp"
#include "percmon/rng.hpp"

using namespace percmon;

namespace {

std::vector<ObjectState> simple_stream(int frames, int objects, double spacing = 5.0) {
    std::vector<ObjectState> out;
    for (int f = 0; f < frames; ++f) {
        for (int i = 0; i < objects; ++i) {
            ObjectState o;
            o.id = i + 1;
            o.frame = f;
            o.t = f * 0.05;
            o.x = spacing * (i + 1);
            o.y = 2.0 * i;
            o.v = 1.5;
            o.l = o.w = 0.5;
            out.push_back(o);
        }
    }
    return out;
}

EgoTrajectory static_ego(int frames) {
    std::vector<EgoPose> poses;
    for (int f = 0; f < frames; ++f) {
        EgoPose e;
        e.frame = f;
        e.t = f * 0.05;
        poses.push_back(e);
    }
    return EgoTrajectory(std::move(poses));
}

}  // namespace

TEST_CASE("inject_permanent_position") {
    const auto stream = simple_stream(3, 2);
    const auto ego = static_ego(3);

    SUBCASE("zero magnitude keeps the stream but fills the ledger") {
        const InjectionResult res = inject_permanent_position(stream, 0.0, ego);
        CHECK(res.ledger.size() == stream.size());
        for (std::size_t i = 0; i < stream.size(); ++i) {
            CHECK(res.stream[i].x == stream[i].x);
            CHECK(res.stream[i].y == stream[i].y);
            CHECK(res.ledger[i].dx_applied == 0.0);
        }
    }
    SUBCASE("shift is along the ego-to-object direction") {
        std::vector<ObjectState> two;
        ObjectState a;
        a.id = 1;
        a.frame = 0;
        a.x = 10.0;
        a.y = 0.0;
        two.push_back(a);
        ObjectState b;
        b.id = 2;
        b.frame = 0;
        b.x = 3.0;
        b.y = 4.0;
        two.push_back(b);
        const InjectionResult res = inject_permanent_position(two, 0.5, static_ego(1));
        CHECK(res.stream[0].x == doctest::Approx(10.5));
        CHECK(res.stream[0].y == doctest::Approx(0.0));
        const InjectionResult res2 = inject_permanent_position(two, 1.0, static_ego(1));
        CHECK(res2.stream[1].x == doctest::Approx(3.6));
        CHECK(res2.stream[1].y == doctest::Approx(4.8));
    }
    SUBCASE("degenerate object on the ego position is skipped") {
        std::vector<ObjectState> one;
        ObjectState a;
        a.id = 1;
        a.frame = 0;
        a.x = 0.0;
        a.y = 0.0;
        one.push_back(a);
        const InjectionResult res = inject_permanent_position(one, 1.0, static_ego(1));
        CHECK(res.skipped_degenerate == 1);
        CHECK(res.ledger.empty());
    }
    SUBCASE("radial distance grows by exactly the magnitude") {
        const InjectionResult res = inject_permanent_position(stream, 0.7, ego);
        for (std::size_t i = 0; i < stream.size(); ++i) {
            const double before = std::hypot(stream[i].x, stream[i].y);
            const double after = std::hypot(res.stream[i].x, res.stream[i].y);
            CHECK(after - before == doctest::Approx(0.7).epsilon(1e-9));
        }
    }
    SUBCASE("inward flag reverses the direction") {
        const InjectionResult res =
            inject_permanent_position(stream, 0.5, ego, /*inward=*/true);
        for (std::size_t i = 0; i < stream.size(); ++i) {
            const double before = std::hypot(stream[i].x, stream[i].y);
            const double after = std::hypot(res.stream[i].x, res.stream[i].y);
            CHECK(before - after == doctest::Approx(0.5).epsilon(1e-9));
        }
    }
}

TEST_CASE("inject_random_position") {
    const auto stream = simple_stream(100, 10);  // 1000 object-frames
    const auto ego = static_ego(100);

    SUBCASE("rate zero leaves everything untouched") {
        const InjectionResult res = inject_random_position(stream, 0.5, 0.0, 7, ego);
        CHECK(res.ledger.empty());
        for (std::size_t i = 0; i < stream.size(); ++i) {
            CHECK(res.stream[i].x == stream[i].x);
        }
    }
    SUBCASE("rate one equals the permanent injection") {
        const InjectionResult random = inject_random_position(stream, 0.5, 1.0, 7, ego);
        const InjectionResult permanent = inject_permanent_position(stream, 0.5, ego);
        CHECK(random.ledger.size() == permanent.ledger.size());
        for (std::size_t i = 0; i < stream.size(); ++i) {
            CHECK(random.stream[i].x == doctest::Approx(permanent.stream[i].x));
            CHECK(random.stream[i].y == doctest::Approx(permanent.stream[i].y));
        }
    }
    SUBCASE("rate one half: applied count within the binomial 3-sigma band") {
        const InjectionResult res = inject_random_position(stream, 0.5, 0.5, 7, ego);
        CHECK(res.ledger.size() >= 430);
        CHECK(res.ledger.size() <= 570);
    }
    SUBCASE("deterministic under the seed") {
        const InjectionResult a = inject_random_position(stream, 0.5, 0.3, 99, ego);
        const InjectionResult b = inject_random_position(stream, 0.5, 0.3, 99, ego);
        REQUIRE(a.ledger.size() == b.ledger.size());
        for (std::size_t i = 0; i < a.ledger.size(); ++i) {
            CHECK(a.ledger[i].frame == b.ledger[i].frame);
            CHECK(a.ledger[i].object_id == b.ledger[i].object_id);
            CHECK(a.ledger[i].dx_applied == b.ledger[i].dx_applied);
        }
        const InjectionResult c = inject_random_position(stream, 0.5, 0.3, 100, ego);
        CHECK(a.ledger.size() != c.ledger.size());
    }
}

TEST_CASE("inject_speed_error") {
    const auto stream = simple_stream(5, 1);

    SUBCASE("permanent offset applies to every frame, positions untouched") {
        const InjectionResult res =
            inject_speed_error(stream, 6.0, SpeedErrorMode::Permanent, 1.0, 0);
        CHECK(res.ledger.size() == stream.size());
        for (std::size_t i = 0; i < stream.size(); ++i) {
            CHECK(res.stream[i].v == doctest::Approx(7.5));
            CHECK(res.stream[i].x == stream[i].x);
            CHECK(res.stream[i].y == stream[i].y);
        }
    }
    SUBCASE("transient offset touches only selected frames") {
        const InjectionResult res =
            inject_speed_error(stream, 3.0, SpeedErrorMode::Transient, 0.4, 11);
        CHECK(res.ledger.size() > 0);
        CHECK(res.ledger.size() < stream.size());
        std::set<std::int64_t> injected_frames;
        for (const InjectedError& e : res.ledger) injected_frames.insert(e.frame);
        for (const ObjectState& o : res.stream) {
            const double expected = injected_frames.count(o.frame) ? 4.5 : 1.5;
            CHECK(o.v == doctest::Approx(expected));
        }
    }
    SUBCASE("negative magnitude clamps at zero and is annotated") {
        const InjectionResult res =
            inject_speed_error(stream, -5.0, SpeedErrorMode::Permanent, 1.0, 0);
        for (const ObjectState& o : res.stream) CHECK(o.v == 0.0);
        for (const InjectedError& e : res.ledger) {
            CHECK(e.clamped);
            CHECK(e.dv_applied == doctest::Approx(-1.5));
        }
    }
}

TEST_CASE("add_gaussian_noise") {
    const auto stream = simple_stream(1000, 10);  // 10000 object-frames

    SUBCASE("zero sigma is the identity") {
        const auto noisy = add_gaussian_noise(stream, 0.0, 3);
        for (std::size_t i = 0; i < stream.size(); ++i) {
            CHECK(noisy[i].x == stream[i].x);
            CHECK(noisy[i].dx == stream[i].dx);
        }
    }
    SUBCASE("sample std of applied perturbations matches sigma") {
        const auto noisy = add_gaussian_noise(stream, 0.1, 3);
        double sum = 0.0, sum2 = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < stream.size(); ++i) {
            for (double d : {noisy[i].x - stream[i].x, noisy[i].y - stream[i].y}) {
                sum += d;
                sum2 += d * d;
                ++n;
            }
        }
        const double mean = sum / n;
        const double stddev = std::sqrt(sum2 / n - mean * mean);
        CHECK(stddev >= 0.097);
        CHECK(stddev <= 0.103);
    }
    SUBCASE("margins widen by exactly sigma") {
        const auto noisy = add_gaussian_noise(stream, 0.25, 3);
        for (std::size_t i = 0; i < stream.size(); ++i) {
            CHECK(noisy[i].dx == doctest::Approx(stream[i].dx + 0.25));
            CHECK(noisy[i].dy == doctest::Approx(stream[i].dy + 0.25));
        }
    }
    SUBCASE("deterministic under the seed") {
        const auto a = add_gaussian_noise(stream, 0.1, 5);
        const auto b = add_gaussian_noise(stream, 0.1, 5);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].x == b[i].x);
    }
}

TEST_CASE("ledger completeness for permanent injections") {
    const auto stream = simple_stream(7, 3);
    const auto res = inject_permanent_position(stream, 0.4, static_ego(7));
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const InjectedError& e : res.ledger) {
        CHECK(seen.insert({e.frame, e.object_id}).second);  // exactly one entry
    }
    CHECK(seen.size() == stream.size());
}

TEST_CASE("a ledger entry exists exactly where the stream was modified") {
    const auto stream = simple_stream(50, 6);
    const auto res = inject_random_position(stream, 0.8, 0.35, 17, static_ego(50));
    std::set<std::pair<std::int64_t, std::int64_t>> entries;
    for (const InjectedError& e : res.ledger) entries.insert({e.frame, e.object_id});
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const bool modified = res.stream[i].x != stream[i].x ||
                              res.stream[i].y != stream[i].y;
        CHECK(modified == (entries.count({stream[i].frame, stream[i].id}) > 0));
    }
}

TEST_CASE("injection config validation") {
    InjectionConfig cfg;
    cfg.rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.rate = 0.5;
    cfg.magnitude = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
