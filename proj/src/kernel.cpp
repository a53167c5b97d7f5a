#include "fracmin/kernel.hpp"

#include "fracmin/rules.hpp"

#include <algorithm>
#include <limits>

namespace fracmin {

namespace {

void check_order(int n, double s, int min_n)
{
    require(n >= min_n, ErrorKind::domain, "dimension out of range: " + std::to_string(n));
    require(s > 0.0 && s < 1.0, ErrorKind::domain, "order s must lie in (0,1)");
}

double smoothstep(double u)
{
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

}  // namespace

double sphere_area(int n)
{
    require(n >= 1, ErrorKind::domain, "sphere_area needs n >= 1");
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) { return sphere_area(n) / n; }

double frac_constant(int n, double s)
{
    check_order(n, s, 1);
    return std::pow(2.0, 2.0 + 2.0 * s) * std::tgamma(0.5 * (n + s))
           / (std::pow(pi, 0.5 * n) * std::tgamma(2.0 - s)) * s * (1.0 - s);
}

double eta_delta(double r, double delta)
{
    if (r <= delta || r >= 1.0 / delta) return 1.0;
    if (r >= 2.0 * delta && r <= 0.5 / delta) return 0.0;
    if (r < 2.0 * delta) return 1.0 - smoothstep(std::log2(r / delta));
    return smoothstep(std::log2(r * 2.0 * delta));
}

double RadialTable::operator()(double radius) const
{
    if (r.empty()) return 1.0;
    if (radius <= r.front()) return m.front();
    if (radius >= r.back()) return m.back();
    auto it = std::upper_bound(r.begin(), r.end(), radius);
    std::size_t i = static_cast<std::size_t>(it - r.begin());
    double u = std::log(radius / r[i - 1]) / std::log(r[i] / r[i - 1]);
    return (1.0 - u) * m[i - 1] + u * m[i];
}

double RadialTable::max() const
{
    return m.empty() ? 1.0 : *std::max_element(m.begin(), m.end());
}

KernelSpec KernelSpec::standard(int n, double s)
{
    check_order(n, s, 2);
    KernelSpec k;
    k.n_ = n;
    k.s_ = s;
    k.kind_ = KernelKind::standard;
    k.c_ = frac_constant(n, s);
    k.ck_ = k.c_;
    return k;
}

KernelSpec KernelSpec::tabulated(int n, double s, double scale, RadialTable table)
{
    check_order(n, s, 2);
    require(scale > 0, ErrorKind::config, "kernel scale must be positive");
    require(table.r.size() == table.m.size() && !table.r.empty(), ErrorKind::config,
            "radial table needs matching non-empty r and m");
    for (std::size_t i = 0; i < table.r.size(); ++i) {
        require(table.r[i] > 0 && table.m[i] >= 0, ErrorKind::config,
                "radial table entries must be positive radii with nonnegative weights");
        if (i > 0)
            require(table.r[i] > table.r[i - 1], ErrorKind::config,
                    "radial table radii must increase");
    }
    KernelSpec k;
    k.n_ = n;
    k.s_ = s;
    k.kind_ = KernelKind::tabulated;
    k.c_ = scale;
    k.ck_ = scale * table.max();
    k.table_ = std::move(table);
    return k;
}

KernelSpec KernelSpec::with_delta(double delta) const
{
    require(delta > 0.0 && delta < 0.5, ErrorKind::domain,
            "regularization delta must lie in (0, 1/2)");
    KernelSpec k = *this;
    k.delta_ = delta;
    return k;
}

KernelSpec regularized_kernel(const KernelSpec& k, double delta) { return k.with_delta(delta); }

double KernelSpec::raw_profile(double r) const
{
    double base = c_ * std::pow(r, -n_ - s_);
    return kind_ == KernelKind::tabulated ? base * table_(r) : base;
}

double KernelSpec::profile(double r) const
{
    if (delta_) {
        double cut = 1.0 - eta_delta(r, *delta_);
        if (cut == 0.0) return 0.0;
        return cut * raw_profile(r);
    }
    require(r > 0.0, ErrorKind::singularity, "kernel evaluated at z = 0");
    return raw_profile(r);
}

// Mass of c r^{-1-s} m(r) on [a, b] with 0 <= a <= b <= inf.
double KernelSpec::raw_mass(double a, double b) const
{
    if (!(b > a)) return 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    auto power_mass = [this, inf](double lo, double hi) {
        double at_lo = lo > 0 ? std::pow(lo, -s_) : inf;
        double at_hi = std::isinf(hi) ? 0.0 : std::pow(hi, -s_);
        return (at_lo - at_hi) / s_;
    };
    if (kind_ == KernelKind::standard) return c_ * power_mass(a, b);

    // Tabulated: constant outside the table, log-linear inside; Gauss on
    // each table cell in u = log r is exact up to rounding for moderate s.
    const auto& tr = table_.r;
    double total = 0.0;
    double lo = a;
    if (lo < tr.front()) {
        double hi = std::min(b, tr.front());
        total += table_.m.front() * power_mass(lo, hi);
        lo = hi;
    }
    for (std::size_t i = 1; i < tr.size() && lo < b; ++i) {
        if (tr[i] <= lo) continue;
        double hi = std::min(b, tr[i]);
        double ulo = std::log(lo), uhi = std::log(hi);
        total += gauss_legendre(16).integrate(ulo, uhi, [&](double u) {
            double r = std::exp(u);
            return table_(r) * std::pow(r, -s_);
        });
        lo = hi;
    }
    if (lo < b) total += table_.m.back() * power_mass(std::max(lo, tr.back()), b);
    return c_ * total;
}

double KernelSpec::radial_mass_unregularized(double a, double b) const
{
    if (a > b) return -radial_mass_unregularized(b, a);
    return raw_mass(a, b);
}

double KernelSpec::radial_mass(double a, double b) const
{
    if (a > b) return -radial_mass(b, a);
    if (!delta_) return raw_mass(a, b);

    const double d = *delta_;
    // Zero on [0,d] and [1/d,inf); pure kernel on [2d, 1/(2d)]; bands by Gauss in log r.
    const double cuts[] = {d, 2 * d, 0.5 / d, 1.0 / d};
    double total = 0.0;
    auto seg = [&](double lo, double hi, int zone) {
        lo = std::max(lo, a);
        hi = std::min(hi, b);
        if (!(hi > lo)) return;
        if (zone == 1) {
            total += raw_mass(lo, hi);
        } else {
            total += gauss_legendre(24).integrate(std::log(lo), std::log(hi), [&](double u) {
                double r = std::exp(u);
                return (1.0 - eta_delta(r, d)) * raw_profile(r) * std::pow(r, n_);
            });
        }
    };
    seg(cuts[0], cuts[1], 0);
    seg(cuts[1], cuts[2], 1);
    seg(cuts[2], cuts[3], 0);
    return total;
}

}  // namespace fracmin
