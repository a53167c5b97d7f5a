#pragma once

#include "fracmin/geometry.hpp"
#include "fracmin/kernel.hpp"
#include "fracmin/quadrature.hpp"
#include "fracmin/radial.hpp"
#include "fracmin/rules.hpp"

#include <optional>
#include <vector>

namespace fracmin {

enum class Classification { interior_curvature, exterior_defect };
const char* to_string(Classification c) noexcept;

struct CurvatureReport {
    double value = 0;
    Vec2 location = Vec2::Zero();
    IntegralResult result;
    Classification classification = Classification::interior_curvature;
};

//! Balls and annuli (and their complements) reduce to a radial profile
//! about their center; other shapes return nullopt.
struct RadialForm {
    Vec2 center;
    RadialProfile profile;  // weights of chi_{E^c} - chi_E
};
std::optional<RadialForm> radial_form(const SetGeometry& e);

//! Principal-value nonlocal mean curvature of E at a regular boundary point.
//! In R^3 only radial shapes are available (evaluated at distance |x - c|
//! from the center on the first axis).
CurvatureReport mean_curvature(const SetGeometry& e, const Vec2& x, const KernelSpec& k, const QuadConfig& cfg,
                               PvMode mode = PvMode::paired);

//! Free-boundary defect: the kernel integral of chi_{E^c} - chi_E over
//! Omega at a boundary point of E outside the closure of Omega.
CurvatureReport fb_defect(const SetGeometry& e, const Domain& omega, const Vec2& x, const KernelSpec& k,
                          const QuadConfig& cfg);

//! f_s(R): curvature of B_R minus B_1 at e_1.
IntegralResult annulus_f(double s, double R, const QuadConfig& cfg, int n = 2);

//! g_s(r) = integral over B_1 of (chi_{B_r} - chi_{B_r^c}) |R r e_1 - y|^{-n-s}
//! (no normalization constant).
IntegralResult annulus_g(double s, double r, double Rstar, const QuadConfig& cfg, int n = 2);

//! Limiting weight g(psi) for psi in (0, pi/2], n in {2, 3}.
double angle_density(double psi, int n);

// ---------------------------------------------------------------------------
// Blow-up scans
// ---------------------------------------------------------------------------

struct ScanPoint {
    Vec2 x;
    double distance;
    double value;
    double error;
};

struct ScanReport {
    std::vector<ScanPoint> points;
    LinearFit fit;       // log|value| against log(distance), last six points
    double exponent = 0;  // fit slope
    int sign = 0;         // sign of the values near the singular point
    bool divergent = false;
    double constant = 0;  // exp(intercept)
};

//! Fitting rule shared by every scan.
ScanReport fit_scan(std::vector<ScanPoint> points, double s);

//! Mass of K over Omega at exterior points (dist given by the domain).
ScanReport kernel_mass_scan(const Domain& omega, const std::vector<Vec2>& path, const KernelSpec& k,
                            const QuadConfig& cfg);

//! Half-plane kernel mass at unit distance: the constant bounding the
//! mass of any domain contained in a half-plane.
double halfspace_mass_constant(double s);

//! Curvature along regular boundary points approaching `corner`.
ScanReport corner_blowup_scan(const SetGeometry& e, const Vec2& corner, const std::vector<Vec2>& path,
                              const KernelSpec& k, const QuadConfig& cfg);

//! Flat tilted model: Omega = {x1 > 0}, E = {w.x < 0} with
//! w = (-sin t, cos t), evaluated at rho (-cos t, -sin t).
ScanReport tilted_defect_scan(double theta, const std::vector<double>& rho, const KernelSpec& k,
                              const QuadConfig& cfg);

//! Geometric path rho_k = rho0 q^k, k = 0..count-1.
std::vector<double> geometric_path(double rho0, double q, int count);

}  // namespace fracmin
