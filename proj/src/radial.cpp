#include "fracmin/radial.hpp"

#include <algorithm>
#include <limits>

namespace fracmin {

double RadialProfile::at(double rho) const
{
    std::size_t j = 0;
    while (j < radii.size() && rho > radii[j]) ++j;
    return weight[j];
}

void RadialProfile::validate() const
{
    require(!radii.empty() && weight.size() == radii.size() + 1, ErrorKind::config,
            "radial profile needs one more weight than radii");
    require(radii.front() > 0, ErrorKind::config, "radial profile radii must be positive");
    for (std::size_t j = 1; j < radii.size(); ++j)
        require(radii[j] > radii[j - 1], ErrorKind::config, "radial profile radii must increase");
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Ray {
    double t[16];
    double w[17];
    int count = 0;  // number of breakpoints after t = 0
};

double mass(const KernelSpec& k, double a, double b) { return a == b ? 0.0 : k.radial_mass(a, b); }

class RadialRays {
public:
    RadialRays(const RadialProfile& w, double rho0) : w_(w), rho0_(rho0)
    {
        for (std::size_t i = 0; i < w.radii.size(); ++i)
            if (std::abs(rho0 - w.radii[i]) <= 1e-14 * rho0) snapped_ = static_cast<int>(i);
    }

    int snapped() const { return snapped_; }

    // Segments along the ray with cos(phi) = c, sin(phi) = s >= 0.
    void cast(double c, double s, Ray& ray) const
    {
        double roots[32];
        int nr = 0;
        const double B = rho0_ * c;
        for (std::size_t i = 0; i < w_.radii.size(); ++i) {
            double r = w_.radii[i];
            if (static_cast<int>(i) == snapped_) {
                if (-2 * B > 0) roots[nr++] = -2 * B;
                continue;
            }
            double ps = rho0_ * s;
            double disc = (r - ps) * (r + ps);
            if (disc <= 0) continue;
            double C = (rho0_ - r) * (rho0_ + r);
            double q = -(B + std::copysign(std::sqrt(disc), B));
            if (q > 0) roots[nr++] = q;
            if (q != 0 && C / q > 0) roots[nr++] = C / q;
        }
        std::sort(roots, roots + nr);
        ray.count = nr;
        for (int j = 0; j < nr; ++j) ray.t[j] = roots[j];
        // First segment: band of rho0, or the side the ray enters when snapped.
        if (snapped_ >= 0)
            ray.w[0] = c >= 0 ? w_.weight[snapped_ + 1] : w_.weight[snapped_];
        else
            ray.w[0] = w_.at(rho0_);
        for (int j = 0; j + 1 < nr; ++j) {
            double tm = 0.5 * (roots[j] + roots[j + 1]);
            double rho = std::sqrt(rho0_ * rho0_ + 2 * tm * B + tm * tm);
            ray.w[j + 1] = w_.at(rho);
        }
        if (nr > 0) ray.w[nr] = w_.weight.back();
    }

    double tail_sum(const Ray& ray, const KernelSpec& k) const
    {
        double acc = 0;
        for (int j = 1; j <= ray.count; ++j) {
            if (ray.w[j] == 0) continue;
            double b = j < ray.count ? ray.t[j] : inf;
            acc += ray.w[j] * mass(k, ray.t[j - 1], b);
        }
        return acc;
    }

private:
    const RadialProfile& w_;
    double rho0_;
    int snapped_ = -1;
};

// cos and sin with exact values at the quarter and half turn.
void cos_sin(double a, double& c, double& s)
{
    if (a == 0) {
        c = 1;
        s = 0;
    } else if (a == 0.5 * pi) {
        c = 0;
        s = 1;
    } else if (a == pi) {
        c = -1;
        s = 0;
    } else {
        c = std::cos(a);
        s = std::sin(a);
    }
}

}  // namespace

IntegralResult radial_integrate(const RadialProfile& w, double rho0, const KernelSpec& k, const QuadConfig& cfg)
{
    w.validate();
    cfg.validate();
    require(rho0 >= 0, ErrorKind::domain, "radial evaluation point must have rho0 >= 0");
    RadialRays rays(w, rho0);
    const int n = k.n();
    const double sphere = sphere_area(n - 1);
    const bool paired = rays.snapped() >= 0;
    const bool bounded_kernel = k.delta().has_value();
    const double top = paired ? 0.5 * pi : pi;

    auto F = [&](double c, double s) {
        double jac = sphere * (n == 2 ? 1.0 : std::pow(s, n - 2));
        Ray a;
        rays.cast(c, s, a);
        if (!paired) {
            if (a.w[0] != 0) {
                require(bounded_kernel, ErrorKind::classification,
                        "integrand does not vanish near the evaluation point");
            }
            double first = a.w[0] == 0 ? 0.0 : a.w[0] * mass(k, 0.0, a.count ? a.t[0] : inf);
            return jac * (first + rays.tail_sum(a, k));
        }
        Ray b;
        rays.cast(-c, s, b);
        double ea = a.count ? a.t[0] : inf, eb = b.count ? b.t[0] : inf;
        double first;
        if (a.w[0] == -b.w[0]) {
            first = a.w[0] * mass(k, eb, ea);
        } else {
            require(bounded_kernel, ErrorKind::domain, "integrand is not odd across the sphere");
            first = a.w[0] * mass(k, 0.0, ea) + b.w[0] * mass(k, 0.0, eb);
        }
        return jac * (first + rays.tail_sum(a, k) + rays.tail_sum(b, k));
    };

    std::vector<double> cuts{0.0, top};
    for (double r : w.radii) {
        if (!(r < rho0) || std::abs(r - rho0) <= 1e-14 * rho0) continue;
        double phi = std::asin(r / rho0);
        cuts.push_back(phi);
        if (!paired) cuts.push_back(pi - phi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const GaussRule& pilot = gauss_legendre(8);
    double scale = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
        scale += pilot.integrate(cuts[j], cuts[j + 1], [&](double p) { return std::abs(F(std::cos(p), std::sin(p))); });

    IntegralResult out;
    out.method = Method::adaptive;
    double l1 = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        double a = cuts[j], b = cuts[j + 1], ca, sa, cb, sb;
        cos_sin(a, ca, sa);
        cos_sin(b, cb, sb);
        auto f = [&](double, double dlo, double dhi) {
            if (dlo <= dhi) {
                double cd = std::cos(dlo), sd = std::sin(dlo);
                return F(ca * cd - sa * sd, sa * cd + ca * sd);
            }
            double cd = std::cos(dhi), sd = std::sin(dhi);
            return F(cb * cd + sb * sd, std::max(0.0, sb * cd - cb * sd));
        };
        auto q = tanh_sinh(f, a, b, cfg.rel_tol, cfg.rel_tol * scale * 1e-2, 8, 3);
        out.value += q.value;
        out.error_estimate += q.error;
        out.samples_used += q.evaluations;
        out.converged = out.converged && q.converged;
        l1 += q.l1;
    }
    out.error_estimate += 64 * std::numeric_limits<double>::epsilon() * std::max(l1, scale);
    return out;
}

}  // namespace fracmin
