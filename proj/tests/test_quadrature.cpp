#include "fracmin/quadrature.hpp"
#include "fracmin/rules.hpp"

#include "doctest.h"

#include <numeric>

using namespace fracmin;
using doctest::Approx;

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    const auto& g = gauss_legendre(6);
    CHECK(g.integrate(0.0, 2.0, [](double x) { return std::pow(x, 11); }) == Approx(std::pow(2.0, 12) / 12)
                                                                                  .epsilon(1e-13));
}

TEST_CASE("tanh-sinh handles endpoint singularities")
{
    auto r = tanh_sinh([](double, double lo, double) { return std::pow(lo, -0.7); }, 0.0, 1.0, 1e-10);
    CHECK(r.value == Approx(1 / 0.3).epsilon(1e-8));
}

TEST_CASE("Gauss-Kronrod on a smooth integrand")
{
    auto r = gauss_kronrod([](double x) { return std::exp(-x * x); }, -5.0, 5.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == Approx(std::sqrt(pi) * std::erf(5.0)).epsilon(1e-12));
}

TEST_CASE("least squares recovers a line")
{
    std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    auto f = least_squares(x, y);
    CHECK(f.slope == Approx(2));
    CHECK(f.intercept == Approx(1));
    CHECK(f.residual == Approx(0).epsilon(1e-12));
    CHECK_THROWS_AS(least_squares({1.0}, {2.0}), Error);
}

TEST_CASE("config validation")
{
    QuadConfig c;
    CHECK_NOTHROW(c.validate());
    c.rel_tol = 0.5;
    CHECK_THROWS_AS(c.validate(), Error);
    c = QuadConfig{};
    c.mc_samples = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("region integral of a disk area")
{
    QuadConfig cfg;
    auto disk = SetGeometry::ball(Vec2::Zero(), 1);
    auto r = region_integrate([](const Vec2&) { return 1.0; }, disk, Window::ball(Vec2::Zero(), 2), cfg);
    CHECK(r.value == Approx(pi).epsilon(1e-9));
    // Off-center polar origin and a half-plane clip.
    auto half = SetGeometry::intersect(disk, SetGeometry::half_space(Vec2(0, 1), 0));
    auto h = region_integrate([](const Vec2&) { return 1.0; }, half, Window::ball(Vec2::Zero(), 2), cfg,
                              Vec2(0.3, 0.1));
    CHECK(h.value == Approx(pi / 2).epsilon(1e-9));
}

TEST_CASE("region integral is linear in the integrand")
{
    QuadConfig cfg;
    auto disk = SetGeometry::ball(Vec2(0.2, 0), 1);
    auto w = Window::ball(Vec2::Zero(), 3);
    auto f = [](const Vec2& x) { return x.x() * x.x(); };
    auto g = [](const Vec2& x) { return std::cos(x.y()); };
    double a = region_integrate(f, disk, w, cfg).value;
    double b = region_integrate(g, disk, w, cfg).value;
    double ab = region_integrate([&](const Vec2& x) { return 2 * f(x) - 3 * g(x); }, disk, w, cfg).value;
    CHECK(ab == Approx(2 * a - 3 * b).epsilon(1e-10));
}

TEST_CASE("integrable point singularity at the polar center")
{
    QuadConfig cfg;
    auto disk = SetGeometry::ball(Vec2::Zero(), 1);
    auto r = region_integrate([](const Vec2& x) { return 1 / std::hypot(x.x(), x.y()); }, disk, Window::ball(Vec2::Zero(), 1.5),
                              cfg, Vec2::Zero());
    CHECK(r.value == Approx(2 * pi).epsilon(1e-8));
}

TEST_CASE("cell streams are deterministic and distinct")
{
    auto a = cell_rng(5, 3), b = cell_rng(5, 3), c = cell_rng(5, 4);
    auto x = a();
    CHECK(x == b());
    CHECK(x != c());
}

TEST_CASE("parallel_for writes every slot once")
{
    std::vector<int> v(1000, 0);
    parallel_for(1000, [&](long i) { v[i] += 1; });
    CHECK(std::accumulate(v.begin(), v.end(), 0) == 1000);
    CHECK(*std::min_element(v.begin(), v.end()) == 1);
}

TEST_CASE("Monte Carlo pair integral is seed-deterministic and unbiased")
{
    // Two unit squares at distance one: the exact value is a smooth
    // four-dimensional integral, computed here by adaptive region quadrature.
    auto k = KernelSpec::standard(2, 0.5);
    auto a = SetGeometry::intersect(
        SetGeometry::intersect(SetGeometry::half_space(Vec2(1, 0), 0), SetGeometry::half_space(Vec2(-1, 0), 1)),
        SetGeometry::intersect(SetGeometry::half_space(Vec2(0, 1), 1), SetGeometry::half_space(Vec2(0, -1), 0)));
    auto b = SetGeometry::transformed(a, Isometry{Mat2::Identity(), Vec2(2, 0)});

    QuadConfig cfg;
    cfg.rel_tol = 1e-6;
    auto inner = [&](const Vec2& x) {
        return region_integrate([&](const Vec2& y) { return k(Vec2(x - y)); }, b, Window::ball(Vec2(2.5, 0.5), 1),
                                cfg)
            .value;
    };
    cfg.rel_tol = 1e-5;
    double exact = region_integrate(inner, a, Window::ball(Vec2(-0.5, 0.5), 1), cfg).value;

    QuadConfig mc;
    mc.mc_samples = 200000;
    mc.seed = 11;
    // Pair distances lie in [1, sqrt(10)], so this window drops nothing.
    PairOptions opt{0.5, 5.0};
    auto r1 = mc_pair_integrate(a, b, k, mc, opt);
    auto r2 = mc_pair_integrate(a, b, k, mc, opt);
    CHECK(r1.value == r2.value);
    CHECK(r1.method == Method::mc);

    double mean = 0, var = 0;
    const int seeds = 20;
    for (int i = 0; i < seeds; ++i) {
        mc.seed = 100 + i;
        auto r = mc_pair_integrate(a, b, k, mc, opt);
        mean += r.value / seeds;
        var += r.error_estimate * r.error_estimate / (seeds * double(seeds));
    }
    CHECK(std::abs(mean - exact) <= 4 * std::sqrt(var));
}
