#include "fracmin/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace fracmin {

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Sample {
    double value, error;
};

// Bisection on a bracket with f(lo) and f(hi) of opposite sign. Stops when
// the bracket is narrower than tol_x and |f(mid)| <= tol_factor * error, or
// when the bracket reaches the floating-point floor.
RootResult bisect(const std::function<Sample(double)>& f, double lo, double hi, Sample flo, Sample fhi,
                  const RootOptions& opt)
{
    RootResult out;
    out.history.push_back({lo, hi, flo.value, fhi.value});
    for (int it = 0; it < opt.max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        Sample fm = f(mid);
        out.root = mid;
        out.residual = std::abs(fm.value);
        out.error = fm.error;
        bool small = out.residual <= opt.tol_factor * fm.error;
        if ((fm.value > 0) == (flo.value > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        out.history.push_back({lo, hi, flo.value, fhi.value});
        if (fm.value == 0 || (small && hi - lo <= opt.tol_x)) {
            out.converged = true;
            return out;
        }
        if (hi - lo <= 1e-14 * std::abs(mid)) break;
    }
    out.converged = out.residual <= opt.tol_factor * out.error;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Annulus construction
// ---------------------------------------------------------------------------

RootResult solve_Rstar(double s, const QuadConfig& cfg, const RootOptions& opt, int n)
{
    require(s > 0 && s < 1, ErrorKind::config, "order s must lie in (0, 1)");
    require(opt.tol_x >= 1e-14 && opt.tol_x <= 1e-1, ErrorKind::config, "radius tolerance out of range");
    auto f = [&](double R) {
        auto r = annulus_f(s, R, cfg, n);
        return Sample{r.value, r.error_estimate};
    };
    double lo = 1 + 1e-3;
    Sample flo = f(lo);
    require(flo.value > 0, ErrorKind::bracket, "f_s is not positive near R = 1: f(" + fmt(lo) + ") = " + fmt(flo.value));
    std::ostringstream seen;
    seen << "f(" << fmt(lo) << ") = " << fmt(flo.value);
    double hi = 2;
    Sample fhi = f(hi);
    seen << ", f(" << fmt(hi) << ") = " << fmt(fhi.value);
    while (fhi.value > 0) {
        lo = hi;
        flo = fhi;
        hi *= 2;
        if (hi > opt.x_max)
            fail(ErrorKind::bracket,
                 "no sign change of f_s below R = " + fmt(opt.x_max) + " at s = " + fmt(s) + ": " + seen.str());
        fhi = f(hi);
        seen << ", f(" << fmt(hi) << ") = " << fmt(fhi.value);
    }
    auto out = bisect(f, lo, hi, flo, fhi, opt);
    require(out.converged, ErrorKind::convergence,
            "R_* bisection stalled with |f| = " + fmt(out.residual) + " against error " + fmt(out.error));
    return out;
}

RootResult solve_rstar(double s, double Rstar, const QuadConfig& cfg, const RootOptions& opt, int n, double margin)
{
    require(s > 0 && s < 1, ErrorKind::config, "order s must lie in (0, 1)");
    require(Rstar > 1, ErrorKind::domain, "critical ratio must exceed 1");
    require(margin > 0 && 1 / Rstar + margin < 1 - margin, ErrorKind::domain,
            "inner-radius interval is empty for R_* = " + fmt(Rstar));
    auto g = [&](double r) {
        auto v = annulus_g(s, r, Rstar, cfg, n);
        return Sample{v.value, v.error_estimate};
    };
    double lo = 1 / Rstar + margin, hi = 1 - margin;
    Sample glo = g(lo), ghi = g(hi);
    if ((glo.value > 0) == (ghi.value > 0))
        fail(ErrorKind::bracket, "g_s has no sign change at s = " + fmt(s) + ": g(" + fmt(lo) + ") = " +
                                     fmt(glo.value) + ", g(" + fmt(hi) + ") = " + fmt(ghi.value));
    auto out = bisect(g, lo, hi, glo, ghi, opt);
    require(out.converged, ErrorKind::convergence,
            "r_* bisection stalled with |g| = " + fmt(out.residual) + " against error " + fmt(out.error));
    return out;
}

SetGeometry AnnulusSolution::set() const { return SetGeometry::annulus(Vec2::Zero(), rstar, Rstar * rstar); }

AnnulusSolution solve_annulus(double s, const QuadConfig& cfg, const RootOptions& opt, int n)
{
    AnnulusSolution sol;
    sol.s = s;
    auto R = solve_Rstar(s, cfg, opt, n);
    auto r = solve_rstar(s, R.root, cfg, opt, n);
    sol.Rstar = R.root;
    sol.rstar = r.root;
    sol.residual_f = R.residual;
    sol.residual_g = r.residual;
    sol.error_f = R.error;
    sol.error_g = r.error;
    sol.history_R = std::move(R.history);
    sol.history_r = std::move(r.history);
    return sol;
}

ScalingCheck annulus_scaling_check(const AnnulusSolution& sol, double lambda, const QuadConfig& cfg)
{
    require(lambda > 0, ErrorKind::config, "scale factor must be positive");
    auto k = KernelSpec::standard(2, sol.s);
    auto eval = [&](double l) {
        Domain omega = Domain::ball(Vec2::Zero(), l);
        SetGeometry e = SetGeometry::annulus(Vec2::Zero(), l * sol.rstar, l * sol.Rstar * sol.rstar);
        auto h = mean_curvature(e, Vec2(l * sol.rstar, 0), k, cfg);
        auto a = fb_defect(e, omega, Vec2(l * sol.Rstar * sol.rstar, 0), k, cfg);
        return std::pair{h, a};
    };
    auto [h1, a1] = eval(1);
    auto [hl, al] = eval(lambda);
    ScalingCheck out;
    out.lambda = lambda;
    out.H = hl.value;
    out.A = al.value;
    double f = std::pow(lambda, -sol.s);
    out.H_expected = f * h1.value;
    out.A_expected = f * a1.value;
    out.error = hl.result.error_estimate + al.result.error_estimate +
                f * (h1.result.error_estimate + a1.result.error_estimate);
    out.pass = std::abs(out.H - out.H_expected) <= 10 * out.error && std::abs(out.A - out.A_expected) <= 10 * out.error;
    return out;
}

SweepResult sweep_Rstar(const std::vector<double>& s_list, const QuadConfig& cfg, const RootOptions& opt)
{
    SweepResult out;
    for (double s : s_list) {
        auto r = solve_Rstar(s, cfg, opt);
        out.rows.push_back({s, r.root, r.residual});
    }
    out.strictly_increasing = out.rows.size() >= 2;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        bool smaller_s = out.rows[i].s < out.rows[i - 1].s;
        bool larger_R = out.rows[i].Rstar > out.rows[i - 1].Rstar;
        out.strictly_increasing = out.strictly_increasing && smaller_s == larger_R;
    }
    return out;
}

ThresholdScan rstar_bracket_scan(const std::vector<double>& s_list, const QuadConfig& cfg)
{
    ThresholdScan out;
    for (double s : s_list) {
        bool ok = false;
        try {
            auto R = solve_Rstar(s, cfg);
            double lo = 1 / R.root + 1e-3, hi = 1 - 1e-3;
            if (lo < hi) {
                double glo = annulus_g(s, lo, R.root, cfg).value, ghi = annulus_g(s, hi, R.root, cfg).value;
                ok = (glo > 0) != (ghi > 0);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::bracket) throw;
        }
        out.s.push_back(s);
        out.bracketed.push_back(ok);
        if (ok) out.largest_bracketed = std::max(out.largest_bracketed, s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Volume conditions
// ---------------------------------------------------------------------------

VolumeCheck volume_condition_check(const SetGeometry& e, const Domain& omega, double tol)
{
    require(omega.bounded(), ErrorKind::config, "volume condition needs a bounded domain");
    VolumeCheck out;
    auto v = volume_in(e, omega);
    out.vol_in = v.value;
    if (e.shape() == Shape::lawson_cone && !e.planar()) {
        int dim = static_cast<int>(e.params()[0] + e.params()[1]);
        out.domain_volume = ball_volume(dim) * std::pow(omega.radius(), dim);
    } else {
        out.domain_volume = omega.volume();
    }
    out.vol_out = out.domain_volume - out.vol_in;
    out.defect = out.vol_in - out.vol_out;
    out.consistent = std::abs(out.defect) <= tol + v.error;
    return out;
}

double lawson_halfvolume_alpha(int n, int m)
{
    require(n >= 1 && m >= 1 && n + m <= 3, ErrorKind::config, "half-volume opening needs n, m >= 1, n + m <= 3");
    // The fraction increases in alpha; bisect in log(alpha).
    double lo = -30, hi = 30;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        double mid = 0.5 * (lo + hi);
        (lawson_fraction(n, m, std::exp(mid)) < 0.5 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double catenoid_volume_defect(double R)
{
    require(R > 0, ErrorKind::config, "ball radius must be positive");
    double ball = ball_volume(3) * R * R * R;
    if (R <= 1) return -ball;
    // Crossing radius where the profile meets the sphere: arccosh(rho) = sqrt(R^2 - rho^2).
    double lo = 1, hi = R;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * R; ++i) {
        double mid = 0.5 * (lo + hi);
        (std::acosh(mid) < std::sqrt(R * R - mid * mid) ? lo : hi) = mid;
    }
    double cross = 0.5 * (lo + hi);
    auto slab = [&](double rho) { return 4 * pi * rho * std::min(std::acosh(rho), std::sqrt(std::max(0.0, R * R - rho * rho))); };
    double inside = gauss_kronrod(slab, 1, cross, 1e-13, 0, 40).value + gauss_kronrod(slab, cross, R, 1e-13, 0, 40).value;
    return 2 * inside - ball;
}

CatenoidScan catenoid_scan(double R_min, double R_max, int count)
{
    require(count >= 2 && R_min > 0 && R_max > R_min, ErrorKind::config, "catenoid grid needs two or more radii");
    CatenoidScan out;
    for (int i = 0; i < count; ++i) {
        double R = R_min + (R_max - R_min) * i / (count - 1);
        double d = catenoid_volume_defect(R);
        out.R.push_back(R);
        out.defect.push_back(d);
        out.relative.push_back(d / (ball_volume(3) * R * R * R));
    }
    out.min_abs = std::abs(out.defect[0]);
    out.min_relative = std::abs(out.relative[0]);
    for (int i = 0; i < count; ++i) {
        out.min_abs = std::min(out.min_abs, std::abs(out.defect[i]));
        out.min_relative = std::min(out.min_relative, std::abs(out.relative[i]));
        if (i > 0 && (out.defect[i] > 0) != (out.defect[i - 1] > 0)) {
            out.sign_change = true;
            double lo = out.R[i - 1], hi = out.R[i];
            bool lo_positive = out.defect[i - 1] > 0;
            for (int it = 0; it < 100 && hi - lo > 1e-13 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                ((catenoid_volume_defect(mid) > 0) == lo_positive ? lo : hi) = mid;
            }
            out.equal_volume_radii.push_back(0.5 * (lo + hi));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// s -> 1 concentration
// ---------------------------------------------------------------------------

double frac_constant_limit_one(int n)
{
    require(n >= 1, ErrorKind::config, "dimension must be positive");
    return 16 * std::tgamma(0.5 * (n + 1)) / std::pow(pi, 0.5 * n);
}

ConcentrationTable s_to_1_concentration(const SetGeometry& e, const Domain& omega, const TangentField& x,
                                        const std::vector<double>& s_list, const QuadConfig& cfg)
{
    require(!s_list.empty(), ErrorKind::config, "concentration needs at least one order");
    for (std::size_t i = 1; i < s_list.size(); ++i)
        require(s_list[i] > s_list[i - 1], ErrorKind::config, "orders must increase toward 1");
    ConcentrationTable out;
    out.contacts = contact_points(e, omega);
    double rhs = 0, literal = 0;
    const double limit = frac_constant_limit_one(2);
    for (const auto& q : out.contacts) {
        auto tr = transversality_angle(e, omega, q);
        require(tr.margin >= 1e-3, ErrorKind::hypothesis, "boundaries meet tangentially at a contact point");
        double psi = pi - tr.psi;
        auto nu = boundary_normal(e, q);
        require(nu.has_value(), ErrorKind::hypothesis, "contact point is a corner of E");
        require(psi <= pi / 2 + 1e-12, ErrorKind::domain,
                "wedge angle " + fmt(psi) + " exceeds pi/2 at a contact point; pass the complement of E");
        double g = 0;  // orthogonal incidence, up to rounding in the contact point
        if (std::abs(std::cos(psi)) > 1e-12) g = angle_density(psi, 2);
        double xn = x(q).dot(*nu);
        out.psi.push_back(psi);
        literal += g * xn;
        rhs += limit * g * xn / std::sin(psi);
    }
    for (double s : s_list) {
        auto k = KernelSpec::standard(2, s);
        auto fv = first_variation_formula(e, omega, x, k, cfg);
        ConcentrationRow row{s, fv.exterior.value, fv.exterior.error_estimate, rhs, literal, 0};
        row.ratio = rhs != 0 ? row.lhs / rhs : std::numeric_limits<double>::quiet_NaN();
        out.rows.push_back(row);
    }
    out.monotone = out.rows.size() >= 2 && rhs != 0;
    out.lhs_decreasing = out.rows.size() >= 2;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        const auto &a = out.rows[i - 1], &b = out.rows[i];
        out.monotone = out.monotone && std::abs(b.ratio - 1) < std::abs(a.ratio - 1);
        out.lhs_decreasing = out.lhs_decreasing && std::abs(b.lhs) < std::abs(a.lhs);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stickiness
// ---------------------------------------------------------------------------

const char* to_string(StickinessFixture f) noexcept
{
    switch (f) {
    case StickinessFixture::outside: return "outside";
    case StickinessFixture::inside: return "inside";
    case StickinessFixture::symmetric: return "symmetric";
    }
    return "?";
}

ScanReport stickiness_blowup_scan(StickinessFixture fixture, const std::vector<double>& rho, const KernelSpec& k,
                                  const QuadConfig& cfg, double w)
{
    require(rho.size() >= 4, ErrorKind::fit, "stickiness scan needs at least four path points");
    for (double r : rho) require(r > 0, ErrorKind::config, "path distances must be positive");
    std::vector<ScanPoint> pts(rho.size());
    switch (fixture) {
    case StickinessFixture::outside: {
        // E fills B_1 and leaves it along the strip {|y| < w, x > 0}; the
        // approach runs along the upper edge of the strip toward q.
        require(w > 0 && w < 0.5, ErrorKind::config, "strip half-width must lie in (0, 1/2)");
        Domain omega = Domain::ball(Vec2::Zero(), 1.0);
        SetGeometry strip = SetGeometry::intersect(
            SetGeometry::intersect(SetGeometry::half_space(Vec2::UnitY(), w), SetGeometry::half_space(-Vec2::UnitY(), w)),
            SetGeometry::half_space(-Vec2::UnitX(), 0.0));
        SetGeometry e = SetGeometry::unite(SetGeometry::ball(Vec2::Zero(), 1.0), strip);
        Vec2 q(std::sqrt(1 - w * w), w);
        parallel_for(static_cast<long>(rho.size()), [&](long i) {
            Vec2 x = q + rho[i] * Vec2::UnitX();
            auto rep = fb_defect(e, omega, x, k, cfg);
            pts[i] = {x, omega.signed_distance(x), rep.value, rep.result.error_estimate};
        });
        break;
    }
    case StickinessFixture::inside: {
        // E = {y > 0} and Omega = {y > phi(x)} with phi = 0 on [-1, 1] and
        // phi = -(|x| - 1)^2 outside. dE beyond x = 1 lies in Omega, so the
        // values along the approach to (1, 0) are the curvature of E.
        SetGeometry e = SetGeometry::half_space(-Vec2::UnitY(), 0.0);
        auto phi = [](double t) { return std::abs(t) <= 1 ? 0.0 : -(std::abs(t) - 1) * (std::abs(t) - 1); };
        parallel_for(static_cast<long>(rho.size()), [&](long i) {
            Vec2 x(1 + rho[i], 0.0);
            require(x.y() > phi(x.x()), ErrorKind::classification, "inside path left the domain");
            auto rep = mean_curvature(e, x, k, cfg);
            pts[i] = {x, rho[i], rep.value, rep.result.error_estimate};
        });
        break;
    }
    case StickinessFixture::symmetric: {
        Domain omega = Domain::ball(Vec2::Zero(), 1.0);
        SetGeometry e = SetGeometry::half_space(Vec2::UnitY(), 0.0);
        parallel_for(static_cast<long>(rho.size()), [&](long i) {
            Vec2 x(1 + rho[i], 0.0);
            auto rep = fb_defect(e, omega, x, k, cfg);
            pts[i] = {x, rho[i], rep.value, rep.result.error_estimate};
        });
        break;
    }
    }
    return fit_scan(std::move(pts), k.s());
}

}  // namespace fracmin
