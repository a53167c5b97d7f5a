#include "fracmin/rules.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace fracmin {

GaussRule::GaussRule(int n) : x_(n), w_(n)
{
    require(n >= 1, ErrorKind::config, "Gauss rule needs at least one node");
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1, p1 = 0;
        for (int k = 1; k <= n; ++k) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        x_[i] = -z;
        x_[n - 1 - i] = z;
        w_[i] = w_[n - 1 - i] = w;
    }
    if (n % 2 == 1) x_[n / 2] = 0.0;
}

const GaussRule& gauss_legendre(int n)
{
    static std::mutex lock;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> guard(lock);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(n);
    return *slot;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::fit, "least squares needs two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0, ErrorKind::fit, "degenerate abscissae in least squares");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - fit.slope * x[i] - fit.intercept;
        fit.residual += r * r;
    }
    fit.residual = std::sqrt(fit.residual / n);
    return fit;
}

}  // namespace fracmin
