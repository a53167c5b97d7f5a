#include "fracmin/perimeter.hpp"

#include "doctest.h"

using namespace fracmin;
using doctest::Approx;

// Values from tests/oracles/perimeter_oracle.py (scipy, independent ray formulas).
TEST_CASE("perimeter of the unit disk")
{
    QuadConfig cfg;
    auto disk = SetGeometry::ball(Vec2::Zero(), 1);
    auto omega = Domain::ball(Vec2::Zero(), 2);
    const std::pair<double, double> anchors[] = {
        {0.3, 33.7872064599714}, {0.5, 40.4540572475264}, {0.7, 47.4186268589031}};
    for (auto [s, value] : anchors) {
        auto p = frac_perimeter(disk, omega, KernelSpec::standard(2, s), cfg);
        CHECK(p.total == Approx(value).epsilon(1e-7));
        CHECK(p.error <= 1e-6 * value);
    }
}

TEST_CASE("perimeter of a diameter in the unit disk")
{
    QuadConfig cfg;
    auto lower = SetGeometry::half_space(Vec2(0, 1), 0);
    auto omega = Domain::ball(Vec2::Zero(), 1);
    const std::pair<double, double> anchors[] = {
        {0.2, 14.1706408286081}, {0.5, 16.6685449072305}, {0.8, 18.3167567659312}};
    double prev = 0;
    for (auto [s, value] : anchors) {
        auto p = frac_perimeter(lower, omega, KernelSpec::standard(2, s), cfg);
        CHECK(p.total == Approx(value).epsilon(1e-7));
        CHECK(p.total > prev);
        prev = p.total;
        // The in-out and out-in terms agree by the reflection y -> -y.
        CHECK(p.term_in_out.value == Approx(p.term_out_in.value).epsilon(1e-9));
    }
}

TEST_CASE("perimeter is invariant under complement")
{
    QuadConfig cfg;
    auto k = KernelSpec::standard(2, 0.4);
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto e = SetGeometry::half_space(Vec2(0.6, 0.8), 0.25);
    auto a = frac_perimeter(e, omega, k, cfg);
    auto b = frac_perimeter(!e, omega, k, cfg);
    CHECK(a.total == Approx(b.total).epsilon(1e-9));
    CHECK(a.term_in_in.value == Approx(b.term_in_in.value).epsilon(1e-9));
}

TEST_CASE("perimeter scales like lambda^{2-s}")
{
    QuadConfig cfg;
    const double s = 0.5;
    auto k = KernelSpec::standard(2, s);
    auto p1 = frac_perimeter(SetGeometry::ball(Vec2(0.1, 0), 0.5), Domain::ball(Vec2::Zero(), 1), k, cfg);
    auto p2 = frac_perimeter(SetGeometry::ball(Vec2(0.2, 0), 1.0), Domain::ball(Vec2::Zero(), 2), k, cfg);
    CHECK(p2.total == Approx(std::pow(2.0, 2 - s) * p1.total).epsilon(1e-7));
}

TEST_CASE("interaction of disjoint disks is symmetric and positive")
{
    QuadConfig cfg;
    auto k = KernelSpec::standard(2, 0.5);
    auto a = SetGeometry::ball(Vec2(-1, 0), 0.5);
    auto b = SetGeometry::ball(Vec2(1.2, 0.3), 0.7);
    double ab = interaction(a, b, k, cfg).value;
    double ba = interaction(b, a, k, cfg).value;
    CHECK(ab > 0);
    CHECK(ab == Approx(ba).epsilon(1e-9));
    // Crude bound from the pair distances, which all lie in [dist, dist + diameters].
    double d = (Vec2(1.2, 0.3) - Vec2(-1, 0)).norm();
    double area = pi * 0.25 * pi * 0.49;
    CHECK(ab <= area * k.profile(d - 1.2));
    CHECK(ab >= area * k.profile(d + 1.2));
}
