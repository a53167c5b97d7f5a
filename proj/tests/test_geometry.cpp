#include "fracmin/geometry.hpp"

#include "doctest.h"

#include <random>

using namespace fracmin;
using doctest::Approx;

namespace {

double total_weight(const std::vector<SurfaceSample>& v)
{
    double w = 0;
    for (const auto& q : v) w += q.weight;
    return w;
}

}  // namespace

TEST_CASE("indicator of the basic shapes")
{
    auto h = SetGeometry::half_space(Vec2(0, 1), 0.0);
    CHECK(h.indicator(Vec2(0.3, -1)).value() == 1);
    CHECK(h.indicator(Vec2(0.3, 1)).value() == -1);
    CHECK(h.indicator(Vec2(5, 0)).on_boundary());

    auto b = SetGeometry::ball(Vec2(1, 0), 0.5);
    CHECK(b.indicator(Vec2(1.2, 0)).value() == 1);
    CHECK(b.indicator(Vec2(0.2, 0)).value() == -1);
    CHECK(b.indicator(Vec2(1.5, 0)).on_boundary());

    auto a = SetGeometry::annulus(Vec2::Zero(), 1, 2);
    CHECK(a.indicator(Vec2(0.5, 0)).value() == -1);
    CHECK(a.indicator(Vec2(1.5, 0)).value() == 1);
    CHECK(a.indicator(Vec2(0, 3)).value() == -1);

    auto c = SetGeometry::cone_sector(2);
    CHECK(c.indicator(unit_dir(0.3)).value() == 1);
    CHECK(c.indicator(unit_dir(0.3 + pi / 2)).value() == -1);
    CHECK(c.indicator(unit_dir(0.3 + pi)).value() == 1);
}

TEST_CASE("complement flips the indicator and keeps the boundary")
{
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(-2, 2);
    const SetGeometry shapes[] = {SetGeometry::ball(Vec2(0.2, 0.1), 0.7), SetGeometry::cone_sector(3),
                                  SetGeometry::corner_pair(0.3, -0.4), SetGeometry::annulus(Vec2::Zero(), 0.5, 1.5)};
    for (const auto& e : shapes) {
        auto c = SetGeometry::complement(e);
        for (int i = 0; i < 200; ++i) {
            Vec2 x(u(g), u(g));
            CHECK(c.indicator(x).value() == -e.indicator(x).value());
        }
    }
    auto b = SetGeometry::ball(Vec2::Zero(), 1);
    CHECK((!b).indicator(Vec2(1, 0)).on_boundary());
}

TEST_CASE("boundary sample weights integrate arclength")
{
    auto disk = SetGeometry::ball(Vec2::Zero(), 1);
    CHECK(total_weight(boundary_sample(disk, Window::ball(Vec2::Zero(), 3), 0.1)) == Approx(2 * pi).epsilon(1e-12));

    auto line = SetGeometry::half_space(Vec2(0, 1), 0);
    CHECK(total_weight(boundary_sample(line, Window::ball(Vec2::Zero(), 1), 0.1)) == Approx(2).epsilon(1e-12));

    // Upper unit semicircle: the part of the circle in {y > 0}.
    auto window = Window::ball(Vec2(0, 1), std::sqrt(2.0));
    CHECK(total_weight(boundary_sample(disk, window, 0.05)) == Approx(pi).epsilon(1e-12));
}

TEST_CASE("sample normals are outward unit vectors")
{
    auto disk = SetGeometry::ball(Vec2(1, 1), 2);
    for (const auto& q : boundary_sample(disk, Window::ball(Vec2::Zero(), 10), 0.3)) {
        CHECK(q.normal.norm() == Approx(1).epsilon(1e-14));
        CHECK(q.normal.dot(q.point - Vec2(1, 1)) > 0);
    }
    for (const auto& q : boundary_sample(!disk, Window::ball(Vec2::Zero(), 10), 0.3))
        CHECK(q.normal.dot(q.point - Vec2(1, 1)) < 0);
}

TEST_CASE("boundary_normal at regular points and corners")
{
    auto h = SetGeometry::half_space(Vec2(0, 1), 0.5);
    auto nu = boundary_normal(h, Vec2(3, 0.5));
    REQUIRE(nu);
    CHECK((*nu - Vec2(0, 1)).norm() <= 1e-14);
    CHECK_FALSE(boundary_normal(SetGeometry::cone_sector(2), Vec2::Zero()));
    CHECK_FALSE(boundary_normal(h, Vec2(0, 0)));
}

TEST_CASE("transversality angle of a diameter and an oblique line")
{
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto diameter = SetGeometry::half_space(Vec2(0, 1), 0);
    auto tv = transversality_angle(diameter, omega, Vec2(1, 0));
    CHECK(tv.psi == Approx(pi / 2).epsilon(1e-12));
    CHECK(tv.margin == Approx(1).epsilon(1e-12));

    // The chord y = 1/2 meets the circle at (sqrt(3)/2, 1/2) with angle pi/3.
    auto chord = SetGeometry::half_space(Vec2(0, 1), 0.5);
    auto tc = transversality_angle(chord, omega, Vec2(std::sqrt(3.0) / 2, 0.5));
    CHECK(std::min(tc.psi, pi - tc.psi) == Approx(pi / 3).epsilon(1e-12));
}

TEST_CASE("contact points of a chord")
{
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto pts = contact_points(SetGeometry::half_space(Vec2(0, 1), 0.5), omega);
    REQUIRE(pts.size() == 2);
    for (const auto& p : pts) {
        CHECK(p.norm() == Approx(1).epsilon(1e-12));
        CHECK(p.y() == Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("volume of a set inside a ball")
{
    auto omega = Domain::ball(Vec2::Zero(), 1);
    CHECK(volume_in(SetGeometry::half_space(Vec2(0, 1), 0), omega).value == Approx(pi / 2).epsilon(1e-10));
    // Circular segment above y = 1/2: pi/3 - sqrt(3)/4.
    auto seg = SetGeometry::complement(SetGeometry::half_space(Vec2(0, 1), 0.5));
    CHECK(volume_in(seg, omega).value == Approx(pi / 3 - std::sqrt(3.0) / 4).epsilon(1e-10));
    CHECK(volume_in(SetGeometry::cone_sector(3), omega).value == Approx(pi / 2).epsilon(1e-10));
    CHECK(volume_in(SetGeometry::ball(Vec2(5, 0), 1), omega).value == Approx(0).epsilon(1e-12));
}

TEST_CASE("Lawson fractions")
{
    CHECK(lawson_fraction(1, 1, 1.0) == Approx(0.5).epsilon(1e-12));
    CHECK(lawson_fraction(2, 1, std::sqrt(3.0)) == Approx(0.5).epsilon(1e-10));
    CHECK(lawson_fraction(1, 2, 1 / std::sqrt(3.0)) == Approx(0.5).epsilon(1e-10));
    double prev = 0;
    for (double a : {0.2, 0.5, 1.0, 2.0, 5.0}) {
        double f = lawson_fraction(2, 1, a);
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("pie_glued swaps inner and complement across the circle")
{
    auto inner = SetGeometry::half_space(Vec2(0, 1), 0);
    auto e = SetGeometry::pie_glued(inner, 1.0);
    CHECK(e.indicator(Vec2(0, -0.5)).value() == 1);
    CHECK(e.indicator(Vec2(0, 0.5)).value() == -1);
    CHECK(e.indicator(Vec2(0, -2)).value() == -1);
    CHECK(e.indicator(Vec2(0, 2)).value() == 1);
}

TEST_CASE("isometries act on the indicator")
{
    auto b = SetGeometry::ball(Vec2(1, 0), 0.5);
    auto g = Isometry::rotation_about_origin(pi / 2);
    auto tb = SetGeometry::transformed(b, g);
    CHECK(tb.indicator(Vec2(0, 1)).value() == 1);
    CHECK(tb.indicator(Vec2(1, 0)).value() == -1);
}

TEST_CASE("union and intersection")
{
    auto a = SetGeometry::ball(Vec2(-0.5, 0), 1);
    auto b = SetGeometry::ball(Vec2(0.5, 0), 1);
    CHECK(SetGeometry::unite(a, b).indicator(Vec2(1.2, 0)).value() == 1);
    CHECK(SetGeometry::intersect(a, b).indicator(Vec2(1.2, 0)).value() == -1);
    CHECK(SetGeometry::intersect(a, b).indicator(Vec2(0, 0)).value() == 1);
}

TEST_CASE("domain signed distance and projection")
{
    auto omega = Domain::ball(Vec2(1, 0), 2);
    CHECK(omega.signed_distance(Vec2(1, 0)) == Approx(-2));
    CHECK(omega.signed_distance(Vec2(4, 0)) == Approx(1));
    CHECK((omega.project(Vec2(3.1, 0)) - Vec2(3, 0)).norm() <= 1e-14);
    CHECK(omega.volume() == Approx(4 * pi));
    auto hs = Domain::half_space(Vec2(0, 1), 1);
    CHECK(hs.signed_distance(Vec2(0, 3)) == Approx(2));
    CHECK((hs.outward_normal(Vec2(0, 1)) - Vec2(0, 1)).norm() <= 1e-14);
}
