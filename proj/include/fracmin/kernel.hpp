#pragma once

#include "fracmin/core.hpp"

#include <optional>
#include <vector>

namespace fracmin {

//! |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

//! Volume of the unit ball in R^n.
double ball_volume(int n);

//! c_{n,s} = 2^{2+2s} Gamma((n+s)/2) / (pi^{n/2} Gamma(2-s)) * s(1-s).
double frac_constant(int n, double s);

//! Cutoff eta_delta: 1 on [0,d] and [1/d,inf), 0 on [2d, 1/(2d)],
//! cubic smoothstep in log-radius on the two transition bands.
double eta_delta(double r, double delta);

enum class KernelKind { standard, tabulated };

//! Radial modulation m(r) tabulated at increasing radii, interpolated
//! linearly in log r and held constant outside the table.
struct RadialTable {
    std::vector<double> r;
    std::vector<double> m;
    double operator()(double radius) const;
    double max() const;
};

class KernelSpec {
public:
    static KernelSpec standard(int n, double s);
    //! K(z) = scale * m(|z|) |z|^{-n-s}.
    static KernelSpec tabulated(int n, double s, double scale, RadialTable table);

    int n() const noexcept { return n_; }
    double s() const noexcept { return s_; }
    KernelKind kind() const noexcept { return kind_; }
    double c() const noexcept { return c_; }
    double C_K() const noexcept { return ck_; }
    const std::optional<double>& delta() const noexcept { return delta_; }
    const RadialTable& table() const noexcept { return table_; }

    //! Kernel value as a function of |z|.
    double profile(double r) const;

    template <typename Derived>
    double operator()(const Eigen::MatrixBase<Derived>& z) const
    {
        return profile(z.norm());
    }

    //! Integral of r^{n-1} K(r) over [a, b]; b may be +inf, and a > b gives
    //! the negated value. This is the per-ray mass used by all polar schemes.
    double radial_mass(double a, double b) const;

    //! Same integral with the cutoff removed (the underlying kernel K).
    double radial_mass_unregularized(double a, double b) const;

    KernelSpec with_delta(double delta) const;

private:
    double raw_mass(double a, double b) const;  // a <= b, no cutoff
    double raw_profile(double r) const;

    int n_ = 2;
    double s_ = 0.5;
    KernelKind kind_ = KernelKind::standard;
    double c_ = 0;
    double ck_ = 0;
    std::optional<double> delta_;
    RadialTable table_;
};

//! K_delta = (1 - eta_delta(|z|)) K. Requires 0 < delta < 1/2.
KernelSpec regularized_kernel(const KernelSpec& k, double delta);

}  // namespace fracmin
