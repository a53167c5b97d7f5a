#pragma once

// Experiment drivers: the annulus construction, the
// s-sweep of its outer ratio, volume conditions for cones and the classical
// catenoid, the s -> 1 concentration of the exterior term, and the
// stickiness blow-up scans.

#include "fracmin/variation.hpp"

#include <string>
#include <vector>

namespace fracmin {

// ---------------------------------------------------------------------------
// Annulus construction
// ---------------------------------------------------------------------------

//! One bisection step: the bracket after the step and the function values
//! at its ends (always of opposite sign).
struct BracketStep {
    double lo, hi, f_lo, f_hi;
};

struct RootResult {
    double root = 0;
    double residual = 0;  // |f(root)|
    double error = 0;     // quadrature error of f at the root
    bool converged = false;
    std::vector<BracketStep> history;
};

struct RootOptions {
    double tol_x = 1e-4;      // bracket width
    double tol_factor = 10;   // |f| <= tol_factor * quadrature error
    double x_max = 1e9;       // bracket limit for R_*
    int max_iter = 200;
};

//! R_*(s): root of the decreasing map R -> f_s(R). Fails with a bracket
//! error (carrying the sampled values) when no sign change appears below
//! x_max.
RootResult solve_Rstar(double s, const QuadConfig& cfg, const RootOptions& opt = {}, int n = 2);

//! r_*: root of g_s on (1/R_* + margin, 1 - margin).
RootResult solve_rstar(double s, double Rstar, const QuadConfig& cfg, const RootOptions& opt = {}, int n = 2,
                       double margin = 1e-3);

struct AnnulusSolution {
    double s = 0;
    double Rstar = 0;
    double rstar = 0;
    double residual_f = 0, residual_g = 0;
    double error_f = 0, error_g = 0;
    std::vector<BracketStep> history_R, history_r;

    //! E = B_{R_* r_*} \ B_{r_*}.
    SetGeometry set() const;
    bool no_contact() const { return rstar < 1 && 1 < Rstar * rstar; }
};

AnnulusSolution solve_annulus(double s, const QuadConfig& cfg, const RootOptions& opt = {}, int n = 2);

//! The solved annulus scaled by lambda, tested against B_lambda: H at the
//! inner circle and A at the outer one, next to lambda^{-s} times the
//! unscaled values.
struct ScalingCheck {
    double lambda = 1;
    double H = 0, A = 0;
    double H_expected = 0, A_expected = 0;
    double error = 0;  // combined quadrature error of the four evaluations
    bool pass = false;
};

ScalingCheck annulus_scaling_check(const AnnulusSolution& sol, double lambda, const QuadConfig& cfg);

struct SweepRow {
    double s;
    double Rstar;
    double residual;
};

//! R_* along a list of orders, with a flag for strict increase as s drops.
struct SweepResult {
    std::vector<SweepRow> rows;
    bool strictly_increasing = false;
};

SweepResult sweep_Rstar(const std::vector<double>& s_list, const QuadConfig& cfg, const RootOptions& opt = {});

//! Largest s on the grid at which solve_rstar brackets a root. This is an
//! observation about the grid, not an estimate of a threshold.
struct ThresholdScan {
    std::vector<double> s;
    std::vector<bool> bracketed;
    double largest_bracketed = 0;
};

ThresholdScan rstar_bracket_scan(const std::vector<double>& s_list, const QuadConfig& cfg);

// ---------------------------------------------------------------------------
// Volume conditions
// ---------------------------------------------------------------------------

struct VolumeCheck {
    double vol_in = 0;   // |E n Omega|
    double vol_out = 0;  // |E^c n Omega|
    double defect = 0;   // vol_in - vol_out
    double domain_volume = 0;
    bool consistent = false;  // |defect| <= tol
};

//! Lawson cones are measured in R^{n+m}; every other shape in the plane.
VolumeCheck volume_condition_check(const SetGeometry& e, const Domain& omega, double tol = 1e-6);

//! The alpha at which lawson_fraction(n, m, alpha) = 1/2.
double lawson_halfvolume_alpha(int n, int m);

//! |F n B_R| - |F^c n B_R| for the classical catenoid solid
//! F = {|x3| < arccosh |x'|, |x'| >= 1} in R^3.
double catenoid_volume_defect(double R);

struct CatenoidScan {
    std::vector<double> R, defect, relative;  // relative = defect / |B_R|
    double min_abs = 0;
    double min_relative = 0;
    bool sign_change = false;
    //! Radii where the defect vanishes, refined by bisection between grid
    //! points of opposite sign.
    std::vector<double> equal_volume_radii;
};

CatenoidScan catenoid_scan(double R_min = 0.5, double R_max = 8.0, int count = 40);

// ---------------------------------------------------------------------------
// s -> 1 concentration
// ---------------------------------------------------------------------------

//! lim c_{n,s} / (1 - s) as s -> 1 for the constant in use.
double frac_constant_limit_one(int n);

struct ConcentrationRow {
    double s;
    double lhs, lhs_error;
    double rhs;          // limit of the exterior term, see s_to_1_concentration
    double rhs_literal;  // sum of g(psi) X.nu without normalization
    double ratio;
};

struct ConcentrationTable {
    std::vector<ConcentrationRow> rows;
    std::vector<Vec2> contacts;
    std::vector<double> psi;  // wedge angle of E outside Omega, in (0, pi/2]
    bool monotone = false;    // |ratio - 1| decreasing along the rows
    bool lhs_decreasing = false;
};

//! Exterior term of the first variation along s_list, against its limit
//! sum_q lim(c/(1-s)) g(psi_q) X(q).nu(q) / sin(psi_q) over the contact
//! points. psi_q is the angle of the wedge E n Omega^c at q; obtuse wedges
//! are refused (the complement of E then has acute ones).
ConcentrationTable s_to_1_concentration(const SetGeometry& e, const Domain& omega, const TangentField& x,
                                        const std::vector<double>& s_list, const QuadConfig& cfg);

// ---------------------------------------------------------------------------
// Stickiness
// ---------------------------------------------------------------------------

enum class StickinessFixture {
    outside,    // B_1 plus a strip leaving it: sticks from outside
    inside,     // flat E inside a domain that peels away: sticks from inside
    symmetric,  // half-plane through the center: no stickiness
};

const char* to_string(StickinessFixture f) noexcept;

//! Boundary values along points approaching the contact point q:
//! the defect A for the outside and symmetric fixtures (points outside
//! Omega), the curvature H for the inside fixture (whose approach runs
//! inside Omega).
ScanReport stickiness_blowup_scan(StickinessFixture fixture, const std::vector<double>& rho, const KernelSpec& k,
                                  const QuadConfig& cfg, double strip_half_width = 0.1);

}  // namespace fracmin
