#include "fracmin/quadrature.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <thread>

namespace fracmin {

void QuadConfig::validate() const
{
    require(pv_excision > 0, ErrorKind::config, "pv_excision must be positive");
    require(trunc_radius > 0, ErrorKind::config, "trunc_radius must be positive");
    require(rel_tol > 1e-10 && rel_tol < 1e-1, ErrorKind::config, "rel_tol must lie in (1e-10, 1e-1)");
    require(mc_samples >= 1000, ErrorKind::config, "mc_samples must be >= 1000");
    require(max_depth >= 1, ErrorKind::config, "max_depth must be >= 1");
}

const char* to_string(Method m) noexcept
{
    switch (m) {
    case Method::adaptive: return "adaptive";
    case Method::mc: return "mc";
    case Method::hybrid: return "hybrid";
    case Method::closed_form: return "closed-form";
    }
    return "unknown";
}

IntegralResult& IntegralResult::operator+=(const IntegralResult& o)
{
    if (method == Method::mc && o.method == Method::mc)
        error_estimate = std::hypot(error_estimate, o.error_estimate);
    else
        error_estimate += o.error_estimate;
    if (method != o.method) method = Method::hybrid;
    value += o.value;
    samples_used += o.samples_used;
    bias_bound += o.bias_bound;
    converged = converged && o.converged;
    return *this;
}

IntegralResult IntegralResult::scaled(double f) const
{
    IntegralResult r = *this;
    r.value *= f;
    r.error_estimate *= std::abs(f);
    r.bias_bound *= std::abs(f);
    return r;
}

// ---------------------------------------------------------------------------
// Seeding and parallel loops
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 cell_rng(std::uint64_t seed, std::uint64_t cell)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (cell * 0xd1342543de82ef95ULL + 1)));
}

int worker_count()
{
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("FRACMIN_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(long n, const std::function<void(long)>& body)
{
    int workers = static_cast<int>(std::min<long>(worker_count(), n));
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Ray quadrature
// ---------------------------------------------------------------------------

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double mass(const KernelSpec& k, double a, double b)
{
    if (a == b) return 0.0;
    return k.radial_mass(a, b);
}

// Sum of w * M over the segments of one ray, starting at segment `from`,
// with every radius clipped below at `floor_r`.
double ray_sum(const RaySegments& seg, const std::function<double(unsigned)>& w, const KernelSpec& k,
               std::size_t from, double floor_r = 0.0)
{
    double acc = 0;
    for (std::size_t i = from; i < seg.mask.size(); ++i) {
        double wi = w(seg.mask[i]);
        if (wi == 0) continue;
        double a = std::max(seg.t[i], floor_r);
        double b = i + 1 < seg.t.size() ? std::max(seg.t[i + 1], floor_r) : inf;
        acc += wi * mass(k, a, b);
    }
    return acc;
}

// Offsets in (0, span) of the critical directions relative to theta0,
// folded mod `fold` (pi for paired rays, 2 pi otherwise).
std::vector<double> cut_offsets(const RayProgram& prog, double theta0, double fold)
{
    std::vector<double> cuts{0.0};
    for (double th : prog.critical_angles()) {
        double d = std::fmod(th - theta0, fold);
        if (d < 0) d += fold;
        if (d > 1e-13 && d < fold - 1e-13) cuts.push_back(d);
    }
    cuts.push_back(fold);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out;
    for (double c : cuts)
        if (out.empty() || c - out.back() > 1e-13) out.push_back(c);
    if (out.back() != fold) out.back() = fold;
    return out;
}

// Angular integral of F over [theta0, theta0 + span] split at the cuts.
// F receives the unit direction, built from the nearer subinterval end so
// that directions very close to a critical angle are resolved exactly.
template <typename F>
IntegralResult angular_integral(F&& eval, double theta0, const std::vector<double>& cuts, const QuadConfig& cfg,
                                const Vec2& tau)
{
    // Frame at a subinterval end: the exact tangent at offsets 0, pi, 2 pi.
    auto frame = [&](double off) -> Mat2 {
        Vec2 e = off == 0 || off == 2 * pi ? tau : (off == pi ? Vec2(-tau) : unit_dir(theta0 + off));
        Mat2 m;
        m.col(0) = e;
        m.col(1) = perp(e);
        return m;
    };
    // Pilot pass fixes an absolute floor so cancelling pieces do not chase
    // relative accuracy on a tiny value.
    const GaussRule& pilot = gauss_legendre(8);
    double scale = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        double a = cuts[j], b = cuts[j + 1];
        scale += pilot.integrate(a, b, [&](double th) { return std::abs(eval(unit_dir(theta0 + th))); });
    }
    IntegralResult out;
    out.method = Method::adaptive;
    double l1 = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        double a = cuts[j], b = cuts[j + 1];
        Mat2 ra = frame(a), rb = frame(b);
        auto f = [&](double, double dlo, double dhi) {
            Vec2 u = dlo <= dhi ? Vec2(ra * Vec2(std::cos(dlo), std::sin(dlo)))
                                : Vec2(rb * Vec2(std::cos(dhi), -std::sin(dhi)));
            return eval(u);
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

struct Tangent {
    double theta0;
    Vec2 tau;
    int atom;
};

// Tangent direction of the boundary of the first set at the snapped origin.
Tangent boundary_tangent(const RayProgram& prog)
{
    const auto& snapped = prog.snapped();
    require(!snapped.empty(), ErrorKind::domain, "point is not on the boundary of the set");
    const Formula& f = prog.formulas()[0];
    std::vector<char> s = prog.table().states(prog.origin());
    std::vector<int> active;
    for (int i : snapped) {
        s[i] = 1;
        bool in = f.eval(s);
        s[i] = 0;
        bool out = f.eval(s);
        if (in != out) active.push_back(i);
    }
    require(!active.empty(), ErrorKind::domain, "point is not on the boundary of the set");
    require(active.size() == 1, ErrorKind::corner, "point is a corner of the boundary");
    const Atom& a = prog.table().atoms()[active[0]];
    Vec2 tan = a.kind == Atom::Kind::half_plane ? Vec2(perp(a.n)) : Vec2(perp(prog.origin() - a.c));
    tan.normalize();
    return {std::atan2(tan.y(), tan.x()), tan, active[0]};
}

}  // namespace

IntegralResult pv_integrate(const RayIntegrand& f, const Vec2& x, const KernelSpec& k, const QuadConfig& cfg,
                            PvMode mode)
{
    cfg.validate();
    RayProgram prog(f.sets);
    prog.set_origin(x);
    Tangent tg = boundary_tangent(prog);
    const bool bounded_kernel = k.delta().has_value();

    if (mode == PvMode::paired) {
        auto eval = [&](const Vec2& u) {
            RaySegments p, m;
            prog.cast(u, false, p);
            prog.cast(-u, true, m);
            double sp = f.weight(p.mask[0]), sm = f.weight(m.mask[0]);
            double ap = p.t.size() > 1 ? p.t[1] : inf, am = m.t.size() > 1 ? m.t[1] : inf;
            double first;
            if (sp == -sm) {
                first = sp * mass(k, am, ap);
            } else {
                require(bounded_kernel, ErrorKind::domain, "integrand is not odd across the boundary at x");
                first = sp * mass(k, 0.0, ap) + sm * mass(k, 0.0, am);
            }
            return first + ray_sum(p, f.weight, k, 1) + ray_sum(m, f.weight, k, 1);
        };
        return angular_integral(eval, tg.theta0, cut_offsets(prog, tg.theta0, pi), cfg, tg.tau);
    }

    // Plain excision at eps, eps/2, eps/4, eps/8 followed by Aitken
    // extrapolation; the rate is estimated from the data.
    const auto base_cuts = cut_offsets(prog, tg.theta0, 2 * pi);
    const Atom& snapped_atom = prog.table().atoms()[tg.atom];
    double v[4];
    IntegralResult acc;
    for (int j = 0; j < 4; ++j) {
        double eps = cfg.pv_excision / (1 << j);
        // Directions whose chord through a snapped circle has length eps.
        auto cuts = base_cuts;
        if (snapped_atom.kind == Atom::Kind::disk && eps < 2 * snapped_atom.r) {
            double al = std::asin(eps / (2 * snapped_atom.r));
            for (double c : {al, pi - al, pi + al, 2 * pi - al}) cuts.push_back(c);
            std::sort(cuts.begin(), cuts.end());
        }
        auto eval = [&](const Vec2& u) {
            RaySegments seg;
            prog.cast(u, false, seg);
            return ray_sum(seg, f.weight, k, 0, eps);
        };
        auto r = angular_integral(eval, tg.theta0, cuts, cfg, tg.tau);
        v[j] = r.value;
        acc.error_estimate = std::max(acc.error_estimate, r.error_estimate);
        acc.samples_used += r.samples_used;
    }
    auto aitken = [](double a, double b, double c) {
        double d1 = b - a, d2 = c - b, den = d2 - d1;
        return den == 0 ? c : c - d2 * d2 / den;
    };
    double e1 = aitken(v[0], v[1], v[2]), e2 = aitken(v[1], v[2], v[3]);
    IntegralResult out;
    out.value = e2;
    out.method = Method::adaptive;
    out.samples_used = acc.samples_used;
    out.error_estimate = std::abs(e2 - e1) + acc.error_estimate;
    out.converged = std::abs(e2 - e1) <= 10 * cfg.rel_tol * std::abs(e2) + 4 * acc.error_estimate;
    if (!out.converged) fail(ErrorKind::convergence, "excision extrapolation did not converge");
    return out;
}

IntegralResult ray_integrate(const RayIntegrand& f, const Vec2& x, const KernelSpec& k, const QuadConfig& cfg)
{
    cfg.validate();
    RayProgram prog(f.sets);
    prog.set_origin(x);
    const bool bounded_kernel = k.delta().has_value();
    auto eval = [&](const Vec2& u) {
        RaySegments seg;
        prog.cast(u, false, seg);
        if (!bounded_kernel && f.weight(seg.mask[0]) != 0)
            fail(ErrorKind::classification, "integrand does not vanish near the evaluation point");
        return ray_sum(seg, f.weight, k, 0);
    };
    return angular_integral(eval, 0.0, cut_offsets(prog, 0.0, 2 * pi), cfg, Vec2::UnitX());
}

// ---------------------------------------------------------------------------
// Region quadrature
// ---------------------------------------------------------------------------

IntegralResult region_integrate(const std::function<double(const Vec2&)>& f, const SetGeometry& region,
                                const Window& window, const QuadConfig& cfg, std::optional<Vec2> center)
{
    cfg.validate();
    IntegralResult out;
    out.method = Method::adaptive;
    if (region.shape() == Shape::empty) return out;

    std::vector<SetGeometry> sets{region, SetGeometry::ball(window.center, window.r_out)};
    if (window.r_in > 0) sets.push_back(SetGeometry::ball(window.center, window.r_in));
    const unsigned want = 3u;
    const unsigned full = window.r_in > 0 ? 7u : 3u;
    RayProgram prog(sets);
    Vec2 o = center.value_or(window.center);
    prog.set_origin(o);

    double worst_inner = 0;
    long evals = 0;
    auto along = [&](double theta) {
        Vec2 u = unit_dir(theta);
        RaySegments seg;
        prog.cast(u, false, seg);
        double acc = 0;
        for (std::size_t i = 0; i < seg.mask.size(); ++i) {
            if ((seg.mask[i] & full) != want) continue;
            require(i + 1 < seg.t.size(), ErrorKind::domain, "unbounded segment in a bounded window");
            auto g = [&](double t, double, double) { return f(o + t * u) * t; };
            auto q = tanh_sinh(g, seg.t[i], seg.t[i + 1], cfg.rel_tol * 0.1, 0.0, 7, 2);
            acc += q.value;
            evals += q.evaluations;
            if (q.value != 0) worst_inner = std::max(worst_inner, q.error / std::abs(q.value));
        }
        return acc;
    };
    std::vector<double> cuts = cut_offsets(prog, 0.0, 2 * pi);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        auto q = gauss_kronrod(along, cuts[j], cuts[j + 1], cfg.rel_tol, 0.0, cfg.max_depth);
        out.value += q.value;
        out.error_estimate += q.error;
        out.converged = out.converged && q.converged;
    }
    out.error_estimate += worst_inner * std::abs(out.value);
    out.samples_used = evals;
    return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo pairs
// ---------------------------------------------------------------------------

IntegralResult mc_pair_integrate(const SetGeometry& a, const SetGeometry& b, const KernelSpec& k,
                                 const QuadConfig& cfg, const PairOptions& opt)
{
    cfg.validate();
    require(k.n() == 2, ErrorKind::unsupported, "pair sampler is planar");
    const double T = cfg.trunc_radius;
    const double R = std::min(a.bounding_radius(), T);
    const double r_min = opt.r_min;
    const double r_max = opt.r_max > 0 ? opt.r_max : 2 * T;
    require(r_min > 0 && r_max > r_min, ErrorKind::config, "pair sampler needs 0 < r_min < r_max");
    const double s = k.s();
    const double lo = std::pow(r_min, -s), hi = std::pow(r_max, -s);
    const double norm = (lo - hi) / s;  // integral of r^{-1-s} over (r_min, r_max)
    const double box = 4 * R * R;

    const long per_cell = 4096;
    const long cells = (cfg.mc_samples + per_cell - 1) / per_cell;
    struct Partial {
        double sum = 0, sq = 0;
        long hits = 0;
    };
    std::vector<Partial> parts(cells);
    parallel_for(cells, [&](long c) {
        auto g = cell_rng(cfg.seed, static_cast<std::uint64_t>(c));
        long count = std::min(per_cell, cfg.mc_samples - c * per_cell);
        Partial p;
        for (long i = 0; i < count; ++i) {
            Vec2 x(R * (2 * uniform01(g) - 1), R * (2 * uniform01(g) - 1));
            double ur = uniform01(g), ut = uniform01(g);
            if (x.norm() > T || a.indicator(x).side != Side::inside) continue;
            double r = std::pow(lo - ur * (lo - hi), -1.0 / s);
            Vec2 y = x + r * unit_dir(2 * pi * ut);
            if (y.norm() > T || b.indicator(y).side != Side::inside) continue;
            double v = k.profile(r) * std::pow(r, 2 + s) * 2 * pi * norm;
            p.sum += v;
            p.sq += v * v;
            ++p.hits;
        }
        parts[c] = p;
    });
    Partial tot;
    for (const auto& p : parts) {
        tot.sum += p.sum;
        tot.sq += p.sq;
        tot.hits += p.hits;
    }
    IntegralResult out;
    out.method = Method::mc;
    out.samples_used = cfg.mc_samples;
    const double n = static_cast<double>(cfg.mc_samples);
    double mean = tot.sum / n, var = std::max(0.0, tot.sq / n - mean * mean);
    out.value = box * mean;
    out.error_estimate = box * std::sqrt(var / n);
    out.converged = tot.hits > 0;
    // Mass outside r_max, plus near-diagonal mass below r_min along an
    // interface of length at most the perimeter bound of the window.
    double area = std::min(box, pi * T * T);
    double interface = 2 * pi * R + 8 * R;
    out.bias_bound = k.C_K() * 2 * pi * (area * hi / s + interface * std::pow(r_min, 1 - s) / (s * (1 - s)));
    return out;
}

}  // namespace fracmin
