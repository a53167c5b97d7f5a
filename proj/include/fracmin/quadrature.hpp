#pragma once

// Integration engine: angular/radial ray quadrature for singular kernel
// integrals, plain region quadrature, and the seeded heavy-tail Monte Carlo
// pair estimator.

#include "fracmin/geometry.hpp"
#include "fracmin/kernel.hpp"
#include "fracmin/rays.hpp"
#include "fracmin/rules.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace fracmin {

struct QuadConfig {
    double pv_excision = 1e-3;
    double trunc_radius = 64.0;
    double rel_tol = 1e-9;
    long mc_samples = 100000;
    std::uint64_t seed = 1;
    int max_depth = 30;

    void validate() const;
};

enum class Method { adaptive, mc, hybrid, closed_form };
const char* to_string(Method m) noexcept;

struct IntegralResult {
    double value = 0;
    double error_estimate = 0;
    long samples_used = 0;
    Method method = Method::adaptive;
    //! Systematic bias bound (truncation), reported separately from the error.
    double bias_bound = 0;
    bool converged = true;

    IntegralResult& operator+=(const IntegralResult& o);
    IntegralResult scaled(double f) const;
};

// ---------------------------------------------------------------------------
// Seeding and deterministic parallel loops
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) noexcept;

//! Generator for one work cell; the stream depends only on (seed, cell).
std::mt19937_64 cell_rng(std::uint64_t seed, std::uint64_t cell);

inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

//! Worker count (FRACMIN_THREADS caps it); results never depend on it.
int worker_count();

//! Runs body(i) for i in [0, n); each index must write only its own slot.
void parallel_for(long n, const std::function<void(long)>& body);

// ---------------------------------------------------------------------------
// Ray integrands
// ---------------------------------------------------------------------------

//! Signed integrand w(y) K(x - y) where w is constant on the cells of a set
//! family: w depends only on the membership mask of y.
struct RayIntegrand {
    std::vector<SetGeometry> sets;
    std::function<double(unsigned mask)> weight;
};

enum class PvMode {
    paired,    // antipodal pairing around the tangent line at x
    excision,  // B_eps(x) removed, extrapolated over eps, eps/2, eps/4
};

//! Principal value of the integral over R^2 around x, a regular point of
//! the boundary of the first set.
IntegralResult pv_integrate(const RayIntegrand& f, const Vec2& x, const KernelSpec& k, const QuadConfig& cfg,
                            PvMode mode = PvMode::paired);

//! Integral over R^2 for x where w vanishes near x; no principal value.
IntegralResult ray_integrate(const RayIntegrand& f, const Vec2& x, const KernelSpec& k, const QuadConfig& cfg);

// ---------------------------------------------------------------------------
// Region and pair integrals
// ---------------------------------------------------------------------------

//! Integral of f over region n window, in polar coordinates about
//! `center` (defaults to the window center). A point singularity of f of
//! order below 2 is integrable when it sits at the center.
IntegralResult region_integrate(const std::function<double(const Vec2&)>& f, const SetGeometry& region,
                                const Window& window, const QuadConfig& cfg,
                                std::optional<Vec2> center = std::nullopt);

struct PairOptions {
    double r_min = 1e-7;
    double r_max = 0;  // 0 selects 2 * trunc_radius
};

//! Monte Carlo estimate of the double integral of K(x - y) over A x B,
//! with both sets truncated to B_{trunc_radius}. bias_bound covers the
//! proposal truncation to r_min < |x - y| < r_max.
IntegralResult mc_pair_integrate(const SetGeometry& a, const SetGeometry& b, const KernelSpec& k,
                                 const QuadConfig& cfg, const PairOptions& opt = {});

}  // namespace fracmin
