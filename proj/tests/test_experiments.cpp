#include "fracmin/experiments.hpp"

#include "doctest.h"

using namespace fracmin;
using doctest::Approx;

TEST_CASE("annulus solution at s = 0.4")
{
    QuadConfig cfg;
    auto sol = solve_annulus(0.4, cfg);
    CHECK(sol.Rstar == Approx(4.60273200999).epsilon(1e-6));
    CHECK(sol.rstar == Approx(0.719169072964).epsilon(1e-6));
    CHECK(sol.no_contact());
    CHECK(sol.residual_f <= 10 * sol.error_f);
    CHECK(sol.residual_g <= 10 * sol.error_g);
    CHECK_FALSE(sol.history_R.empty());
    for (const auto& b : sol.history_R) CHECK(b.f_lo * b.f_hi <= 0);

    for (double lambda : {0.5, 2.0}) {
        auto sc = annulus_scaling_check(sol, lambda, cfg);
        CHECK(sc.pass);
    }
}

TEST_CASE("R_* grows as s decreases")
{
    QuadConfig cfg;
    auto sw = sweep_Rstar({0.4, 0.3, 0.2}, cfg);
    REQUIRE(sw.rows.size() == 3);
    CHECK(sw.strictly_increasing);
    CHECK(sw.rows[2].Rstar == Approx(29.0741935316).epsilon(1e-6));
}

TEST_CASE("R_* bracket search gives up at the limit")
{
    QuadConfig cfg;
    RootOptions opt;
    opt.x_max = 100;
    try {
        solve_Rstar(0.1, cfg, opt);
        FAIL("expected a bracket error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::bracket);
    }
}

TEST_CASE("bracket scan for r_*")
{
    QuadConfig cfg;
    auto t = rstar_bracket_scan({0.4, 0.2}, cfg);
    REQUIRE(t.bracketed.size() == 2);
    CHECK(t.bracketed[0]);
    CHECK(t.bracketed[1]);
    CHECK(t.largest_bracketed == Approx(0.4));
}

TEST_CASE("volume condition for planar cones")
{
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto v = volume_condition_check(SetGeometry::half_space(Vec2(0.6, 0.8), 0), omega);
    CHECK(v.consistent);
    CHECK(std::abs(v.defect) <= 1e-6);
    CHECK(v.domain_volume == Approx(pi));
    auto off = volume_condition_check(SetGeometry::half_space(Vec2(0, 1), 0.2), omega);
    CHECK_FALSE(off.consistent);
    CHECK(off.defect > 0);
    CHECK(volume_condition_check(SetGeometry::cone_sector(3), omega).consistent);
    CHECK(volume_condition_check(SetGeometry::lawson_cone(1, 1, 1.0), omega).consistent);
}

TEST_CASE("Lawson cones")
{
    CHECK(lawson_halfvolume_alpha(2, 1) == Approx(std::sqrt(3.0)).epsilon(1e-10));
    CHECK(lawson_halfvolume_alpha(1, 2) == Approx(1 / std::sqrt(3.0)).epsilon(1e-10));
    CHECK(lawson_halfvolume_alpha(1, 1) == Approx(1).epsilon(1e-12));
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto v = volume_condition_check(SetGeometry::lawson_cone(2, 1, std::sqrt(0.1)), omega);
    CHECK(std::abs(v.defect) >= 0.1 * v.domain_volume);
    CHECK(v.defect / v.domain_volume == Approx(-0.906925).epsilon(1e-5));
}

TEST_CASE("catenoid volume defect over the radius grid")
{
    auto scan = catenoid_scan();
    REQUIRE(scan.R.size() == 40);
    for (double d : scan.defect) CHECK(d != 0.0);
    CHECK(scan.min_abs > 0);
    // The solid {|x_3| < arccosh |x'|} splits B_R evenly at two radii in [0.5, 8].
    CHECK(scan.sign_change);
    REQUIRE(scan.equal_volume_radii.size() == 2);
    CHECK(scan.equal_volume_radii[0] == Approx(2.69314011598).epsilon(1e-8));
    CHECK(scan.equal_volume_radii[1] == Approx(4.29185451271).epsilon(1e-8));
    for (double R : scan.equal_volume_radii) CHECK(std::abs(catenoid_volume_defect(R)) <= 1e-8 * R * R * R);
}

// The catenoid should fail the volume condition in every ball; the
// computed defect changes sign, so the stronger claim fails visibly.
TEST_CASE("catenoid defect keeps one sign" * doctest::should_fail())
{
    auto scan = catenoid_scan();
    CHECK_FALSE(scan.sign_change);
}

TEST_CASE("order-one constant")
{
    CHECK(frac_constant_limit_one(2) == Approx(8 / std::sqrt(pi)).epsilon(1e-14));
    CHECK(frac_constant_limit_one(3) == Approx(16 / std::pow(pi, 1.5)).epsilon(1e-14));
}

TEST_CASE("concentration at a pi/3 wedge")
{
    QuadConfig cfg;
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto e = SetGeometry::half_space(Vec2(0, -1), -0.5);
    FieldSpec f;
    f.bump_center = Vec2(std::sqrt(3.0) / 2, 0.5);
    f.bump_radius = 0.4;
    auto x = make_tangent_field({f}, omega);
    auto t = s_to_1_concentration(e, omega, x, {0.7, 0.9}, cfg);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.psi.size() == 2);
    for (double psi : t.psi) CHECK(psi == Approx(pi / 3).epsilon(1e-10));
    CHECK(t.rows[0].rhs == Approx(-4.5135167).epsilon(1e-7));
    CHECK(t.rows[0].rhs_literal == Approx(-std::sqrt(3.0) / 2).epsilon(1e-7));
    CHECK(t.rows[0].ratio == Approx(0.433851).epsilon(1e-4));
    CHECK(t.rows[1].ratio == Approx(0.770683).epsilon(1e-4));
    CHECK(t.monotone);
}

TEST_CASE("concentration refuses obtuse wedges")
{
    QuadConfig cfg;
    auto omega = Domain::ball(Vec2::Zero(), 1);
    FieldSpec f;
    f.bump_center = Vec2(std::sqrt(3.0) / 2, 0.5);
    f.bump_radius = 0.4;
    auto x = make_tangent_field({f}, omega);
    try {
        s_to_1_concentration(SetGeometry::half_space(Vec2(0, 1), 0.5), omega, x, {0.9}, cfg);
        FAIL("expected a domain error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::domain);
    }
}

TEST_CASE("concentration vanishes for a diameter")
{
    QuadConfig cfg;
    auto omega = Domain::ball(Vec2::Zero(), 1);
    FieldSpec f;
    f.bump_center = Vec2(1, 0);
    f.bump_radius = 0.4;
    auto x = make_tangent_field({f}, omega);
    auto t = s_to_1_concentration(SetGeometry::half_space(Vec2(0, 1), 0), omega, x, {0.8}, cfg);
    CHECK(std::abs(t.rows[0].lhs) <= 1e-8);
    CHECK(t.rows[0].rhs == 0.0);
}

TEST_CASE("stickiness scans")
{
    QuadConfig cfg;
    const double s = 0.5;
    auto k = KernelSpec::standard(2, s);
    auto rho = geometric_path(1.0 / 16, 0.5, 17);
    auto out = stickiness_blowup_scan(StickinessFixture::outside, rho, k, cfg);
    CHECK(out.divergent);
    CHECK(out.sign == -1);
    CHECK(std::abs(out.exponent + s) <= 0.2 * s);
    auto in = stickiness_blowup_scan(StickinessFixture::inside, rho, k, cfg);
    CHECK_FALSE(in.divergent);
    auto sym = stickiness_blowup_scan(StickinessFixture::symmetric, rho, k, cfg);
    CHECK_FALSE(sym.divergent);
    for (const auto& p : sym.points) CHECK(std::abs(p.value) <= 1e-8);
    CHECK(std::string(to_string(StickinessFixture::inside)) == "inside");
}
