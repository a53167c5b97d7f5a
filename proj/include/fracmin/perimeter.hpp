#pragma once

// Interaction energies I_K(A, B) and the three-term fractional perimeter.
//
// For the standard planar kernel c |z|^{-2-s} the double area integral is
// reduced to the boundaries by Gauss-Green twice, using
// Laplacian(|z|^{-s}) = s^2 |z|^{-2-s}:
//
//   I(A, B) = -(c / s^2) * oint_dA oint_dB |x - y|^{-s} nu_A(x).nu_B(y).
//
// The boundaries are split into panels; coincident and touching panels get
// dedicated singular rules. Other kernels fall back to Monte Carlo.

#include "fracmin/geometry.hpp"
#include "fracmin/kernel.hpp"
#include "fracmin/quadrature.hpp"

#include <functional>
#include <limits>

namespace fracmin {

//! Smooth map of the plane, the identity outside B_support. The Jacobian is
//! taken by central differences.
struct Deformation {
    std::function<Vec2(const Vec2&)> map;
    double support_radius = std::numeric_limits<double>::infinity();
    double fd_step = 1e-5;

    Mat2 jacobian(const Vec2& x) const;
};

struct PanelOptions {
    //! Panel length near the origin; panels grow like max(1, |x|).
    double h = 0.05;
    //! Optional deformation applied to both sets.
    const Deformation* flow = nullptr;
};

//! Boundary-integral form of I_K(A, B) for bounded A, B with the standard
//! planar kernel.
IntegralResult boundary_interaction(const SetGeometry& a, const SetGeometry& b, const KernelSpec& k,
                                    const PanelOptions& opt = {});

//! I_K(A, B). Unbounded sets are cut to B_{trunc_radius}; the discarded
//! tail is reported in bias_bound.
IntegralResult interaction(const SetGeometry& a, const SetGeometry& b, const KernelSpec& k, const QuadConfig& cfg);

struct PerimeterBreakdown {
    IntegralResult term_in_in;   // I(E^c n Omega, E n Omega)
    IntegralResult term_in_out;  // I(E n Omega, E^c n Omega^c)
    IntegralResult term_out_in;  // I(E n Omega^c, E^c n Omega)
    double total = 0;
    double error = 0;
    double bias_bound = 0;
};

//! Per_K(E; Omega) for a bounded domain. With the standard kernel the parts
//! beyond B_T (T = trunc_radius) are integrated exactly through the far
//! field, so the value carries no truncation bias; opt.flow, if set, is
//! applied to E and must preserve Omega and be supported inside B_T.
PerimeterBreakdown frac_perimeter(const SetGeometry& e, const Domain& omega, const KernelSpec& k,
                                  const QuadConfig& cfg, const PanelOptions& opt = {});

}  // namespace fracmin
