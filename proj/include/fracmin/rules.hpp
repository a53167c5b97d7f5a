#pragma once

// One-dimensional rules shared by every integrator in the library.

#include "fracmin/core.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fracmin {

struct QuadEstimate {
    double value = 0;
    double error = 0;
    double l1 = 0;  // integral of |f|, for rounding-error floors
    long evaluations = 0;
    bool converged = true;
};

class GaussRule {
public:
    explicit GaussRule(int n);
    int size() const noexcept { return static_cast<int>(x_.size()); }
    double node(int i) const { return x_[i]; }
    double weight(int i) const { return w_[i]; }

    template <typename F>
    double integrate(double a, double b, F&& f) const
    {
        double half = 0.5 * (b - a), mid = 0.5 * (a + b), sum = 0;
        for (int i = 0; i < size(); ++i) sum += w_[i] * f(mid + half * x_[i]);
        return half * sum;
    }

private:
    std::vector<double> x_, w_;
};

//! Cached n-point Gauss-Legendre rule on [-1, 1].
const GaussRule& gauss_legendre(int n);

//! Double-exponential quadrature on [a, b]. The integrand receives
//! (x, x - a, b - x) with both offsets computed without cancellation, so
//! algebraic endpoint singularities can be evaluated in local coordinates.
template <typename F>
QuadEstimate tanh_sinh(F&& f, double a, double b, double rel_tol, double abs_tol = 0,
                       int max_level = 7, int min_level = 3)
{
    QuadEstimate out;
    if (!(b > a)) return out;
    const double len = b - a;
    const double half_pi = 0.5 * pi;

    double abs_sum = 0;
    auto term = [&](double t) {
        // x = tanh(q), q = (pi/2) sinh t; offsets from both ends kept exact.
        double q = half_pi * std::sinh(std::abs(t));
        double e = std::exp(-2.0 * q);
        double small = 2.0 * e / (1.0 + e);  // 1 - |x|
        double big = 2.0 / (1.0 + e);        // 1 + |x|
        double w = half_pi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
        double dlo = 0.5 * len * (t < 0 ? small : big);
        double dhi = 0.5 * len * (t < 0 ? big : small);
        if (!(dlo > 1e-300) || !(dhi > 1e-300) || w == 0.0) return 0.0;
        double x = dlo <= dhi ? a + dlo : b - dhi;
        double v = f(x, dlo, dhi);
        ++out.evaluations;
        abs_sum += w * std::abs(v);
        return w * v;
    };

    const double t_max = 6.5;
    double h = 1.0;
    double sum = term(0.0);
    for (double t = h; t <= t_max; t += h) sum += term(t) + term(-t);
    double prev = sum * h * 0.5 * len;
    double abs_prev = abs_sum;
    out.value = prev;
    out.error = std::abs(prev);
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        abs_sum = 0;
        for (double t = h; t <= t_max; t += 2 * h) sum += term(t) + term(-t);
        abs_prev += abs_sum;
        out.l1 = abs_prev * h * 0.5 * len;
        double cur = sum * h * 0.5 * len;
        out.error = std::abs(cur - prev);
        out.value = cur;
        prev = cur;
        if (!std::isfinite(cur)) fail(ErrorKind::convergence, "non-finite tanh-sinh sum");
        if (level >= min_level && out.error <= std::max(abs_tol, rel_tol * std::abs(cur))) {
            out.converged = true;
            return out;
        }
    }
    out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value));
    return out;
}

//! Globally adaptive Gauss-Kronrod (7/15) bisection.
template <typename F>
QuadEstimate gauss_kronrod(F&& f, double a, double b, double rel_tol, double abs_tol = 0,
                           int max_depth = 30)
{
    static const double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                 0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                 0.207784955007898468, 0.0};
    static const double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                 0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                 0.204432940075298892, 0.209482141084727828};
    static const double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                 0.417959183673469388};
    struct Cell {
        double a, b, value, error, l1;
        int depth;
        bool operator<(const Cell& o) const { return error < o.error; }
    };
    QuadEstimate out;
    auto eval = [&](double lo, double hi, int depth) {
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        double fc = f(c);
        double k = wk[7] * fc, g = wg[3] * fc, ka = wk[7] * std::abs(fc);
        for (int i = 0; i < 7; ++i) {
            double f1 = f(c - h * xk[i]), f2 = f(c + h * xk[i]);
            double v = f1 + f2;
            k += wk[i] * v;
            ka += wk[i] * (std::abs(f1) + std::abs(f2));
            if (i % 2 == 1) g += wg[i / 2] * v;
        }
        out.evaluations += 15;
        return Cell{lo, hi, k * h, std::abs((k - g) * h), ka * h, depth};
    };
    std::priority_queue<Cell> heap;
    Cell root = eval(a, b, 0);
    heap.push(root);
    double total = root.value, err = root.error;
    out.converged = true;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        Cell worst = heap.top();
        if (worst.depth >= max_depth) {
            out.converged = false;
            break;
        }
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Cell l = eval(worst.a, mid, worst.depth + 1), r = eval(mid, worst.b, worst.depth + 1);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum in a fixed order so the result does not depend on heap history.
    std::vector<Cell> cells;
    cells.reserve(heap.size());
    while (!heap.empty()) {
        cells.push_back(heap.top());
        heap.pop();
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.a < y.a; });
    out.value = 0;
    out.error = 0;
    for (const auto& c : cells) {
        out.value += c.value;
        out.error += c.error;
        out.l1 += c.l1;
    }
    return out;
}

//! Ordinary least squares y = slope * x + intercept.
struct LinearFit {
    double slope = 0, intercept = 0, residual = 0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fracmin
