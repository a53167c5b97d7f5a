#pragma once

// Kernel integrals of radially banded weights in R^n, evaluated in polar
// coordinates about a point rho0 e_1. A ray at angle phi to e_1 crosses the
// sphere of radius r where t^2 + 2 t rho0 cos(phi) + rho0^2 - r^2 = 0, so
// only a one-dimensional angular quadrature remains.

#include "fracmin/kernel.hpp"
#include "fracmin/quadrature.hpp"

#include <vector>

namespace fracmin {

//! w(y) = weight[j] on the band radii[j-1] < |y| < radii[j], with
//! radii[-1] = 0 and the last weight applying beyond radii.back().
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> weight;

    double at(double rho) const;
    void validate() const;
};

//! Integral of w(y) K(rho0 e_1 - y) over R^n. When rho0 lies on one of the
//! spheres the value is a principal value, computed by pairing phi with
//! pi - phi; the weights on the two sides must then be opposite unless the
//! kernel is regularized.
IntegralResult radial_integrate(const RadialProfile& w, double rho0, const KernelSpec& k,
                                const QuadConfig& cfg);

}  // namespace fracmin
