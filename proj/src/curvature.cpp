#include "fracmin/curvature.hpp"

#include <algorithm>

namespace fracmin {

const char* to_string(Classification c) noexcept
{
    return c == Classification::interior_curvature ? "interior-curvature" : "exterior-defect";
}

std::optional<RadialForm> radial_form(const SetGeometry& e)
{
    const auto& p = e.params();
    switch (e.shape()) {
    case Shape::ball: return RadialForm{Vec2(p[0], p[1]), {{p[2]}, {-1.0, 1.0}}};
    case Shape::annulus: return RadialForm{Vec2(p[0], p[1]), {{p[2], p[3]}, {1.0, -1.0, 1.0}}};
    case Shape::complement: {
        auto inner = radial_form(e.children()[0]);
        if (!inner) return std::nullopt;
        for (double& w : inner->profile.weight) w = -w;
        return inner;
    }
    case Shape::transformed: {
        auto inner = radial_form(e.children()[0]);
        if (!inner) return std::nullopt;
        inner->center = e.isometry()(inner->center);
        return inner;
    }
    default: return std::nullopt;
    }
}

namespace {

// Distance from the center, snapped onto a sphere of the profile.
double snapped_radius(const RadialForm& f, const Vec2& x, bool require_on_sphere)
{
    double rho = (x - f.center).norm();
    for (double r : f.profile.radii)
        if (std::abs(rho - r) <= 1e-11 * (1.0 + r)) return r;
    require(!require_on_sphere, ErrorKind::domain, "point is not on the boundary of the set");
    return rho;
}

double signed_weight(unsigned mask) { return (mask & 1u) ? -1.0 : 1.0; }

}  // namespace

CurvatureReport mean_curvature(const SetGeometry& e, const Vec2& x, const KernelSpec& k, const QuadConfig& cfg,
                               PvMode mode)
{
    CurvatureReport rep;
    rep.location = x;
    rep.classification = Classification::interior_curvature;
    if (auto rf = radial_form(e)) {
        double rho = snapped_radius(*rf, x, true);
        rep.result = radial_integrate(rf->profile, rho, k, cfg);
    } else {
        require(k.n() == 2, ErrorKind::unsupported, "non-radial shapes are planar; use n = 2");
        rep.result = pv_integrate(RayIntegrand{{e}, signed_weight}, x, k, cfg, mode);
    }
    rep.value = rep.result.value;
    return rep;
}

CurvatureReport fb_defect(const SetGeometry& e, const Domain& omega, const Vec2& x, const KernelSpec& k,
                          const QuadConfig& cfg)
{
    require(omega.signed_distance(x) >= 1e-9, ErrorKind::classification,
            "defect point must lie outside the closure of the domain");
    CurvatureReport rep;
    rep.location = x;
    rep.classification = Classification::exterior_defect;
    auto rf = radial_form(e);
    if (rf && omega.kind() == Domain::Kind::ball && omega.center() == rf->center) {
        double rho = snapped_radius(*rf, x, true);
        // Merge the domain sphere into the profile; weight 0 outside Omega.
        std::vector<double> radii = rf->profile.radii;
        radii.push_back(omega.radius());
        std::sort(radii.begin(), radii.end());
        radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
        RadialProfile merged{radii, {}};
        for (std::size_t j = 0; j <= radii.size(); ++j) {
            double lo = j == 0 ? 0.0 : radii[j - 1];
            double mid = j < radii.size() ? 0.5 * (lo + radii[j]) : 2.0 * radii.back();
            merged.weight.push_back(mid < omega.radius() ? rf->profile.at(mid) : 0.0);
        }
        rep.result = radial_integrate(merged, rho, k, cfg);
    } else {
        require(k.n() == 2, ErrorKind::unsupported, "non-radial configurations are planar; use n = 2");
        require(e.indicator(x).on_boundary(), ErrorKind::domain, "defect point is not on the boundary of E");
        auto w = [](unsigned m) { return (m & 2u) ? ((m & 1u) ? -1.0 : 1.0) : 0.0; };
        rep.result = ray_integrate(RayIntegrand{{e, omega.set()}, w}, x, k, cfg);
    }
    rep.value = rep.result.value;
    return rep;
}

IntegralResult annulus_f(double s, double R, const QuadConfig& cfg, int n)
{
    require(R > 1 + 1e-6, ErrorKind::domain, "annulus outer radius must exceed 1");
    auto k = KernelSpec::standard(n, s);
    return radial_integrate(RadialProfile{{1.0, R}, {1.0, -1.0, 1.0}}, 1.0, k, cfg);
}

IntegralResult annulus_g(double s, double r, double Rstar, const QuadConfig& cfg, int n)
{
    require(Rstar > 1, ErrorKind::domain, "critical ratio must exceed 1");
    require(Rstar * r > 1, ErrorKind::classification, "evaluation point R r e_1 lies inside the domain");
    require(r < 1, ErrorKind::domain, "inner radius must lie in (1/R, 1)");
    auto k = KernelSpec::standard(n, s);
    return radial_integrate(RadialProfile{{r, 1.0}, {1.0, -1.0, 0.0}}, Rstar * r, k, cfg).scaled(1.0 / k.c());
}

double angle_density(double psi, int n)
{
    require(psi > 0 && psi <= pi / 2, ErrorKind::domain, "angle density is defined for psi in (0, pi/2]");
    require(n == 2 || n == 3, ErrorKind::config, "angle density implemented for n = 2, 3");
    if (psi == pi / 2) return 0.0;
    const double cot = std::cos(psi) / std::sin(psi);
    if (n == 2) {
        // Directions at angle phi from -e_1 contribute cos(phi) for |tan phi| < cot psi.
        double half = std::atan(cot);
        return gauss_kronrod([](double phi) { return std::cos(phi); }, -half, half, 1e-15, 0, 40).value;
    }
    auto f = [&](double mu) {
        double G = std::atan(std::cos(mu) * cot);
        return std::cos(mu) * (G + std::sin(G) * std::cos(G));
    };
    return 2.0 * gauss_kronrod(f, 0.0, pi / 2, 1e-15, 0, 40).value;
}

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

ScanReport fit_scan(std::vector<ScanPoint> points, double s)
{
    require(points.size() >= 4, ErrorKind::fit, "scan needs at least four path points");
    ScanReport rep;
    rep.points = std::move(points);
    const std::size_t m = std::min<std::size_t>(6, rep.points.size());
    const std::size_t first = rep.points.size() - m;
    bool resolved = true;
    std::vector<double> lx, ly;
    for (std::size_t i = first; i < rep.points.size(); ++i) {
        const auto& p = rep.points[i];
        resolved = resolved && std::abs(p.value) > 10 * p.error && p.value != 0;
        if (p.value != 0) {
            lx.push_back(std::log(p.distance));
            ly.push_back(std::log(std::abs(p.value)));
        }
    }
    const auto& last = rep.points.back();
    rep.sign = last.value > 0 ? 1 : (last.value < 0 ? -1 : 0);
    if (lx.size() >= 2) {
        rep.fit = least_squares(lx, ly);
        rep.exponent = rep.fit.slope;
        rep.constant = std::exp(rep.fit.intercept);
    }
    rep.divergent = resolved && lx.size() == m && rep.exponent < -0.5 * s;
    if (!resolved) rep.sign = 0;
    return rep;
}

double halfspace_mass_constant(double s)
{
    // B(1/2, (1+s)/2) / s
    return std::tgamma(0.5) * std::tgamma(0.5 * (1 + s)) / std::tgamma(1 + 0.5 * s) / s;
}

ScanReport kernel_mass_scan(const Domain& omega, const std::vector<Vec2>& path, const KernelSpec& k,
                            const QuadConfig& cfg)
{
    require(path.size() >= 4, ErrorKind::fit, "kernel-mass scan needs at least four path points");
    std::vector<ScanPoint> pts(path.size());
    parallel_for(static_cast<long>(path.size()), [&](long i) {
        const Vec2& x = path[i];
        double d = omega.signed_distance(x);
        require(d > 0, ErrorKind::classification, "kernel-mass path point must be outside the domain");
        IntegralResult r;
        if (omega.kind() == Domain::Kind::ball) {
            double rho = (x - omega.center()).norm();
            r = radial_integrate(RadialProfile{{omega.radius()}, {1.0, 0.0}}, rho, k, cfg);
        } else {
            require(k.n() == 2, ErrorKind::unsupported, "half-space kernel mass is planar");
            r = ray_integrate(RayIntegrand{{omega.set()}, [](unsigned m) { return (m & 1u) ? 1.0 : 0.0; }}, x, k,
                              cfg);
        }
        pts[i] = {x, d, r.value, r.error_estimate};
    });
    return fit_scan(std::move(pts), k.s());
}

ScanReport corner_blowup_scan(const SetGeometry& e, const Vec2& corner, const std::vector<Vec2>& path,
                              const KernelSpec& k, const QuadConfig& cfg)
{
    std::vector<ScanPoint> pts(path.size());
    for (const auto& x : path)
        require((x - corner).norm() > 0, ErrorKind::domain, "corner scan path touches the corner");
    parallel_for(static_cast<long>(path.size()), [&](long i) {
        auto rep = mean_curvature(e, path[i], k, cfg);
        pts[i] = {path[i], (path[i] - corner).norm(), rep.value, rep.result.error_estimate};
    });
    return fit_scan(std::move(pts), k.s());
}

ScanReport tilted_defect_scan(double theta, const std::vector<double>& rho, const KernelSpec& k,
                              const QuadConfig& cfg)
{
    require(theta > -pi / 2 && theta < pi / 2, ErrorKind::config, "tilt angle must lie in (-pi/2, pi/2)");
    Domain omega = Domain::half_space(Vec2(-1.0, 0.0), 0.0);  // {x1 > 0}
    Vec2 w(-std::sin(theta), std::cos(theta));
    SetGeometry e = SetGeometry::half_space(w, 0.0);
    Vec2 dir(-std::cos(theta), -std::sin(theta));
    std::vector<ScanPoint> pts(rho.size());
    parallel_for(static_cast<long>(rho.size()), [&](long i) {
        Vec2 x = rho[i] * dir;
        auto rep = fb_defect(e, omega, x, k, cfg);
        pts[i] = {x, rho[i], rep.value, rep.result.error_estimate};
    });
    return fit_scan(std::move(pts), k.s());
}

std::vector<double> geometric_path(double rho0, double q, int count)
{
    std::vector<double> out;
    double r = rho0;
    for (int i = 0; i < count; ++i, r *= q) out.push_back(r);
    return out;
}

}  // namespace fracmin
