#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ris/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace ris;

namespace {

Scenario<double> scenario(ScenarioKind kind)
{
    Scenario<double> s;
    s.kind = kind;
    return s;
}

double horizontal_distance(const Position3D& p, const Position3D& ris)
{
    return std::hypot(p.x() - ris.x(), p.y() - ris.y());
}

} // namespace

TEST_CASE("edge samples sit exactly on the arc at RX height")
{
    const auto s = scenario(ScenarioKind::edge_uniform);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto p = sample_rx_position(s, rng);
        CHECK(horizontal_distance(p, s.ris_position) == doctest::Approx(15.0).epsilon(1e-12));
        CHECK(p.z() == 1.0);
    }
}

TEST_CASE("area samples: z = 1 m and mean radius 2/3 R")
{
    const auto s = scenario(ScenarioKind::area_uniform);
    std::mt19937_64 rng(5);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        const auto p = sample_rx_position(s, rng);
        REQUIRE(p.z() == 1.0);
        const double r = horizontal_distance(p, s.ris_position);
        REQUIRE(r <= 15.0 + 1e-12);
        REQUIRE(p.y() >= s.ris_position.y());
        sum += r;
    }
    CHECK(std::abs(sum / n - 10.0) / 10.0 < 0.01);
}

TEST_CASE("rx_angle on the axes")
{
    const Position3D ris{0, 0, 50};
    CHECK(rx_angle(Position3D{15, 0, 1}, ris) == 0.0);
    CHECK(rx_angle(Position3D{0, 15, 1}, ris) == doctest::Approx(pi_v<double> / 2));
    CHECK(rx_angle(Position3D{-15, 0, 1}, ris) == doctest::Approx(pi_v<double>));
    CHECK(rx_angle(Position3D{-15, -0.0, 1}, ris) == doctest::Approx(pi_v<double>));
}

TEST_CASE("rx_angle rejects vertical alignment and the back half-plane")
{
    const Position3D ris{0, 0, 50};
    CHECK_THROWS_AS(rx_angle(Position3D{0, 0, 1}, ris), degenerate_geometry);
    CHECK_THROWS_AS(rx_angle(Position3D{3, -1, 1}, ris), invalid_parameter);
}

TEST_CASE("sampled angles stay in [0, pi] for both scenarios")
{
    std::mt19937_64 rng(2);
    for (auto kind : {ScenarioKind::area_uniform, ScenarioKind::edge_uniform}) {
        const auto s = scenario(kind);
        for (int i = 0; i < 20000; ++i) {
            const auto a = next_arrival(s, i, rng);
            REQUIRE(a.angle >= 0.0);
            REQUIRE(a.angle <= pi_v<double>);
            REQUIRE(a.angle == rx_angle(a.position, s.ris_position));
        }
    }
}

TEST_CASE("edge angles are uniform on [0, pi] (KS, alpha = 0.01)")
{
    const auto s = scenario(ScenarioKind::edge_uniform);
    std::mt19937_64 rng(99);
    const int n = 10000;
    std::vector<double> u(n);
    for (auto& x : u) x = next_arrival(s, 0, rng).angle / pi_v<double>;
    std::sort(u.begin(), u.end());
    double d = 0;
    for (int i = 0; i < n; ++i) {
        d = std::max({d, (i + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
    }
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("angle_threshold")
{
    CHECK(angle_threshold(8) == pi_v<double> / 8);
    CHECK(angle_threshold(1) == pi_v<double>);
    CHECK(angle_threshold(100) == doctest::Approx(0.031415926535897934).epsilon(1e-15));
    CHECK_THROWS_AS(angle_threshold(0), invalid_parameter);
    for (int q = 1; q < 500; ++q) CHECK(angle_threshold(q + 1) < angle_threshold(q));
}

TEST_CASE("scenario validation")
{
    auto s = scenario(ScenarioKind::area_uniform);
    s.radius = 0;
    CHECK_THROWS_AS(s.validate(), invalid_parameter);
    s.radius = 15;
    s.rx_height = -1;
    CHECK_THROWS_AS(s.validate(), invalid_parameter);
}
