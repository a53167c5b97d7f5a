#include "fracmin/variation.hpp"

#include <algorithm>

namespace fracmin {

const char* to_string(FieldSpec::Kind k) noexcept
{
    switch (k) {
    case FieldSpec::Kind::rotation: return "rotation";
    case FieldSpec::Kind::interior_bump: return "interior-bump";
    case FieldSpec::Kind::shear: return "shear";
    }
    return "?";
}

double smooth_step(double t)
{
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

namespace {

double bump(double q)
{
    return q < 1 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
}

}  // namespace

Vec2 TangentField::term(const FieldSpec& f, const Vec2& x) const
{
    const bool ball = domain_.kind() == Domain::Kind::ball;
    const Vec2 c = ball ? domain_.center() : Vec2(domain_.normal() * domain_.offset());
    double phi = f.amplitude;
    if (std::isfinite(f.cutoff_outer)) {
        double r = (x - c).norm();
        phi *= 1.0 - smooth_step((r - f.cutoff_inner) / (f.cutoff_outer - f.cutoff_inner));
    }
    if (f.bump_center) phi *= bump((x - *f.bump_center).squaredNorm() / (f.bump_radius * f.bump_radius));
    if (phi == 0) return Vec2::Zero();
    switch (f.kind) {
    case FieldSpec::Kind::rotation: return phi * perp(x - c);
    case FieldSpec::Kind::shear: return phi * perp(domain_.normal());
    case FieldSpec::Kind::interior_bump: {
        double v = ball ? domain_.radius() * domain_.radius() - (x - c).squaredNorm()
                        : domain_.offset() - domain_.normal().dot(x);
        return phi * v * f.direction;
    }
    }
    return Vec2::Zero();
}

Vec2 TangentField::operator()(const Vec2& x) const
{
    Vec2 out = Vec2::Zero();
    if (x.norm() >= support_) return out;
    for (const auto& f : terms_) out += term(f, x);
    return out;
}

TangentField make_tangent_field(const std::vector<FieldSpec>& terms, const Domain& omega)
{
    require(!terms.empty(), ErrorKind::config, "tangent field needs at least one term");
    TangentField X;
    X.domain_ = omega;
    X.terms_ = terms;
    const bool ball = omega.kind() == Domain::Kind::ball;
    const Vec2 c = ball ? omega.center() : Vec2(omega.normal() * omega.offset());
    double support = 0;
    for (const auto& f : terms) {
        require(std::isfinite(f.amplitude), ErrorKind::config, "field amplitude must be finite");
        if (ball)
            require(f.kind != FieldSpec::Kind::shear, ErrorKind::config, "shear fields need a half-space domain");
        else
            require(f.kind != FieldSpec::Kind::rotation, ErrorKind::config, "rotation fields need a ball domain");
        double r = std::numeric_limits<double>::infinity();
        if (std::isfinite(f.cutoff_outer)) {
            require(f.cutoff_inner >= 0 && f.cutoff_outer > f.cutoff_inner, ErrorKind::config,
                    "cutoff radii must satisfy 0 <= inner < outer");
            r = c.norm() + f.cutoff_outer;
        }
        if (f.bump_center) {
            require(f.bump_radius > 0, ErrorKind::config, "bump radius must be positive");
            r = std::min(r, f.bump_center->norm() + f.bump_radius);
        }
        require(std::isfinite(r), ErrorKind::config, "field term needs a cutoff or a bump for compact support");
        if (f.kind == FieldSpec::Kind::interior_bump) {
            require(f.direction.norm() > 0, ErrorKind::config, "interior bump needs a direction");
        }
        support = std::max(support, r);
    }
    X.support_ = support;

    // max |X| on a grid over the support box
    const int grid = 160;
    double m = 0;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j) {
            Vec2 x(support * (2.0 * i / grid - 1), support * (2.0 * j / grid - 1));
            m = std::max(m, X(x).norm());
        }
    X.max_norm_ = m;

    // tangency on boundary points inside the support
    double defect = 0;
    for (int i = 0; i < 1024; ++i) {
        Vec2 x;
        if (ball) {
            x = c + omega.radius() * unit_dir(2 * pi * (i + 0.5) / 1024);
        } else {
            double u = support * (2.0 * (i + 0.5) / 1024 - 1);
            x = c + u * perp(omega.normal());
        }
        Vec2 v = X(x);
        defect = std::max(defect, std::abs(v.dot(omega.outward_normal(x))));
    }
    X.tangency_defect_ = defect;
    require(defect <= 1e-12 * std::max(1.0, m), ErrorKind::config, "vector field is not tangent to the domain boundary");
    return X;
}

// ---------------------------------------------------------------------------
// Flow
// ---------------------------------------------------------------------------

namespace {

Vec2 rk4(const TangentField& X, Vec2 x, double tau, int steps)
{
    if (tau == 0 || x.norm() >= X.support_radius()) return x;
    const double dt = tau / steps;
    for (int i = 0; i < steps; ++i) {
        Vec2 k1 = X(x);
        Vec2 k2 = X(x + 0.5 * dt * k1);
        Vec2 k3 = X(x + 0.5 * dt * k2);
        Vec2 k4 = X(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

}  // namespace

Vec2 FlowedSet::advance(const Vec2& x, double tau) const { return rk4(field_, x, tau, steps_); }

IndicatorValue FlowedSet::indicator(const Vec2& x) const { return base_.indicator(backward(x)); }

Deformation FlowedSet::deformation() const
{
    Deformation d;
    auto self = *this;
    d.map = [self](const Vec2& x) { return self.forward(x); };
    d.support_radius = field_.support_radius();
    return d;
}

std::vector<SurfaceSample> FlowedSet::boundary_sample(const Window& window, double resolution) const
{
    Deformation d = deformation();
    auto base = fracmin::boundary_sample(base_, window, resolution);
    std::vector<SurfaceSample> out(base.size());
    parallel_for(static_cast<long>(base.size()), [&](long i) {
        const auto& b = base[i];
        Mat2 D = d.jacobian(b.point);
        Mat2 inv_t;
        double det = D(0, 0) * D(1, 1) - D(0, 1) * D(1, 0);
        inv_t << D(1, 1), -D(1, 0), -D(0, 1), D(0, 0);
        inv_t /= det;
        Vec2 n = (inv_t * b.normal).normalized();
        Vec2 tangent = D * Vec2(perp(b.normal));
        out[i] = {forward(b.point), n, b.weight * tangent.norm(), b.patch};
    });
    return out;
}

FlowedSet flow(const SetGeometry& e, const TangentField& x, double t, int steps)
{
    require(steps >= 16, ErrorKind::config, "flow needs at least 16 steps");
    require(std::abs(t) <= 0.1 * x.support_radius() / std::max(x.max_norm(), 1e-300) + 1e-15, ErrorKind::config,
            "flow time exceeds 0.1 support / max|X|");
    FlowedSet f;
    f.base_ = e;
    f.field_ = x;
    f.t_ = t;
    f.steps_ = steps;
    // step halving on a spiral of probe points inside the support
    double worst = 0;
    const int probes = 64;
    for (int i = 0; i < probes; ++i) {
        double r = x.support_radius() * std::sqrt((i + 0.5) / probes);
        Vec2 p = r * unit_dir(2.399963229728653 * i);
        worst = std::max(worst, (rk4(x, p, t, steps) - rk4(x, p, t, 2 * steps)).norm());
    }
    f.halving_defect_ = worst;
    require(worst <= 1e-8, ErrorKind::convergence, "flow integrator step halving disagrees by more than 1e-8");
    return f;
}

// ---------------------------------------------------------------------------
// First variation by finite differences
// ---------------------------------------------------------------------------

FdVariation first_variation_fd(const SetGeometry& e, const Domain& omega, const TangentField& x, const KernelSpec& k,
                               const QuadConfig& cfg, double h)
{
    require(h >= 1e-3 && h <= 5e-2, ErrorKind::config, "finite-difference step must lie in [1e-3, 5e-2]");
    FdVariation out;
    out.h = h;
    double err[4];
    const double times[4] = {-h, h, -0.5 * h, 0.5 * h};
    for (int i = 0; i < 4; ++i) {
        FlowedSet fl = flow(e, x, times[i]);
        Deformation d = fl.deformation();
        PanelOptions opt;
        opt.flow = &d;
        auto p = frac_perimeter(e, omega, k, cfg, opt);
        out.perimeters.push_back(p.total);
        err[i] = p.error;
    }
    const auto& P = out.perimeters;
    out.d_h = (P[1] - P[0]) / (2 * h);
    out.d_h2 = (P[3] - P[2]) / h;
    double e_h = (err[0] + err[1]) / (2 * h), e_h2 = (err[2] + err[3]) / h;
    double gap = std::abs(out.d_h - out.d_h2);
    out.value = (4 * out.d_h2 - out.d_h) / 3;
    out.error = (4 * e_h2 + e_h) / 3 + gap / 3;
    double scale = std::max({std::abs(out.d_h), std::abs(out.d_h2), 1e-6});
    out.flagged = gap > std::max(5e-3 * scale, 3 * (e_h + e_h2));
    return out;
}

// ---------------------------------------------------------------------------
// First variation by the boundary formula
// ---------------------------------------------------------------------------

namespace {

bool on_circle(const Domain& omega, const Vec2& p) { return std::abs(omega.signed_distance(p)) <= 1e-9; }

bool is_zero_product(const Vec2& X, const Vec2& nu) { return X.norm() > 0 && std::abs(X.dot(nu)) <= 1e-14 * X.norm(); }

// A boundary piece lying on dOmega.
bool on_domain_boundary(const BoundaryPiece& pc, const Domain& omega)
{
    return pc.kind == BoundaryPiece::Kind::arc && (pc.origin - omega.center()).norm() <= 1e-12
           && std::abs(pc.radius - omega.radius()) <= 1e-12;
}

struct Accum {
    double value = 0, error = 0, max_rel = 0;
    long evals = 0;
};

// int over [p0, p1] of A X.nu, graded toward the contact end when there is one.
void exterior_piece(const SetGeometry& e, const Domain& omega, const TangentField& X, const KernelSpec& k,
                    const QuadConfig& cfg, const BoundaryPiece& pc, double p_from, double p_to, bool contact,
                    double freeze, double sin_psi, Accum& acc)
{
    const double sp = pc.speed();
    const double dir = p_to > p_from ? 1.0 : -1.0;
    const double L = std::abs(p_to - p_from) * sp;
    const double s = k.s();
    const double rel = std::max(10 * cfg.rel_tol, 1e-8);
    auto A = [&](const Vec2& x) {
        auto r = fb_defect(e, omega, x, k, cfg);
        ++acc.evals;
        if (r.value != 0) acc.max_rel = std::max(acc.max_rel, r.result.error_estimate / std::abs(r.value));
        return r.value;
    };
    QuadEstimate q;
    if (!contact) {
        auto f = [&](double p) {
            Vec2 x = pc.point(p);
            double xn = X(x).dot(pc.normal(p));
            return xn == 0 ? 0.0 : A(x) * xn * sp;
        };
        q = gauss_kronrod(f, std::min(p_from, p_to), std::max(p_from, p_to), rel, 1e-13, 24);
    } else {
        // sigma = L w^{1/(1-s)} makes the sigma^{-s} singularity of A constant in w.
        const double sigma_f = freeze / std::max(sin_psi, 1e-3);
        std::optional<double> frozen;
        auto B = [&](double sigma) {
            double sg = sigma;
            if (sigma < sigma_f) {
                if (frozen) return *frozen;
                sg = sigma_f;
            }
            Vec2 x = pc.point(p_from + dir * sg / sp);
            double b = std::pow(sg, s) * A(x);
            if (sigma < sigma_f) frozen = b;
            return b;
        };
        auto f = [&](double w) {
            double sigma = L * std::pow(w, 1.0 / (1.0 - s));
            double p = p_from + dir * sigma / sp;
            Vec2 x = pc.point(p);
            double xn = X(x).dot(pc.normal(p));
            return xn == 0 ? 0.0 : B(sigma) * xn * std::pow(L, 1.0 - s) / (1.0 - s);
        };
        q = gauss_kronrod(f, 0.0, 1.0, rel, 1e-13, 24);
    }
    acc.value += q.value;
    acc.error += q.error + (q.converged ? 0.0 : std::abs(q.value));
    if (!q.converged) acc.error += q.l1;
}

}  // namespace

FormulaVariation first_variation_formula(const SetGeometry& e, const Domain& omega, const TangentField& X,
                                         const KernelSpec& k, const QuadConfig& cfg, const FormulaOptions& opt)
{
    cfg.validate();
    require(omega.kind() == Domain::Kind::ball, ErrorKind::unsupported, "boundary formula needs a ball domain");
    require(k.n() == 2, ErrorKind::unsupported, "boundary formula is planar");
    FormulaVariation out;
    const Vec2 c = omega.center();
    const double R = omega.radius();

    // Transversality wherever the field is active at a contact point.
    for (const auto& q : contact_points(e, omega)) {
        out.contacts.push_back(q);
        if (X(q).norm() == 0) continue;
        auto nu = boundary_normal(e, q, 1e-9);
        require(nu.has_value(), ErrorKind::hypothesis, "dE is not smooth at a contact point in the field support");
        Vec2 no = omega.outward_normal(q);
        require(1.0 - std::abs(no.dot(*nu)) >= 1e-3, ErrorKind::hypothesis,
                "transversality margin below 1e-3 at a contact point");
    }

    // Interior term on two resolutions.
    {
        double q[2] = {0, 0}, herr = 0;
        int nodes = 0;
        for (int level = 0; level < 2; ++level) {
            auto samples = boundary_sample(e, Window::ball(c, R), opt.resolution / (1 << level));
            std::vector<double> val(samples.size(), 0.0), err(samples.size(), 0.0);
            std::vector<char> zero(samples.size(), 0);
            parallel_for(static_cast<long>(samples.size()), [&](long i) {
                const auto& sm = samples[i];
                Vec2 v = X(sm.point);
                if (is_zero_product(v, sm.normal)) zero[i] = 1;
                double xn = v.dot(sm.normal);
                if (xn == 0 || zero[i]) return;
                auto h = mean_curvature(e, sm.point, k, cfg);
                val[i] = sm.weight * h.value * xn;
                err[i] = std::abs(sm.weight * xn) * h.result.error_estimate;
            });
            for (std::size_t i = 0; i < samples.size(); ++i) {
                q[level] += val[i];
                if (level == 1) {
                    herr += err[i];
                    out.zero_product_nodes += zero[i];
                    nodes += val[i] != 0;
                }
            }
        }
        out.interior.value = q[1];
        out.interior.error_estimate = std::abs(q[1] - q[0]) + herr;
        out.interior_nodes = nodes;
    }

    // Sticking arcs on dOmega: X.nu vanishes there by tangency.
    for (const auto& pc : boundary_pieces(e, Window::ball(c, R + 1.0))) {
        if (!on_domain_boundary(pc, omega)) continue;
        for (const auto& sm : sample_piece(pc, opt.resolution)) {
            Vec2 v = X(sm.point);
            require(std::abs(v.dot(sm.normal)) <= 1e-12 * std::max(1.0, v.norm()), ErrorKind::hypothesis,
                    "field is not tangent on a sticking arc");
            out.zero_product_nodes += is_zero_product(v, sm.normal);
        }
    }

    // Exterior term.
    const double reach = c.norm() + X.support_radius();
    Accum acc;
    if (reach > R) {
        for (const auto& pc : boundary_pieces(e, Window::annulus(c, R, reach + 1e-9))) {
            const bool c0 = on_circle(omega, pc.point(pc.p0)), c1 = on_circle(omega, pc.point(pc.p1));
            // Concentric arcs carry X.nu = 0 for rotation fields: count and skip.
            bool all_zero = true;
            int zeros = 0, active = 0;
            for (int i = 0; i < 32; ++i) {
                double p = pc.p0 + (pc.p1 - pc.p0) * (i + 0.5) / 32;
                Vec2 v = X(pc.point(p));
                double xn = v.dot(pc.normal(p));
                if (v.norm() > 0) ++active;
                if (is_zero_product(v, pc.normal(p))) ++zeros;
                else if (xn != 0) all_zero = false;
            }
            if (all_zero && active > 0 && zeros == active) {
                out.zero_product_nodes += zeros;
                continue;
            }
            auto sin_psi = [&](const Vec2& q) {
                auto nu = boundary_normal(e, q, 1e-9);
                return nu ? std::sqrt(std::max(0.0, 1.0 - std::pow(nu->dot(omega.outward_normal(q)), 2))) : 1.0;
            };
            double mid = 0.5 * (pc.p0 + pc.p1);
            if (c0 && c1) {
                exterior_piece(e, omega, X, k, cfg, pc, pc.p0, mid, true, opt.freeze_distance, sin_psi(pc.point(pc.p0)), acc);
                exterior_piece(e, omega, X, k, cfg, pc, pc.p1, mid, true, opt.freeze_distance, sin_psi(pc.point(pc.p1)), acc);
            } else if (c0 || c1) {
                double from = c0 ? pc.p0 : pc.p1, to = c0 ? pc.p1 : pc.p0;
                exterior_piece(e, omega, X, k, cfg, pc, from, to, true, opt.freeze_distance, sin_psi(pc.point(from)), acc);
            } else {
                exterior_piece(e, omega, X, k, cfg, pc, pc.p0, pc.p1, false, opt.freeze_distance, 1.0, acc);
            }
        }
    }
    out.exterior.value = acc.value;
    out.exterior.error_estimate = acc.error + acc.max_rel * std::abs(acc.value);
    out.exterior.samples_used = acc.evals;
    out.total = out.interior.value + out.exterior.value;
    out.error = out.interior.error_estimate + out.exterior.error_estimate;
    return out;
}

// ---------------------------------------------------------------------------
// Criticality residual
// ---------------------------------------------------------------------------

namespace {

// Endpoints of boundary pieces where the normals of the adjoining pieces differ.
std::vector<Vec2> corners_of(const SetGeometry& e, double far)
{
    auto pieces = boundary_pieces(e, Window::ball(Vec2::Zero(), far), false);
    struct End {
        Vec2 x, nu;
    };
    std::vector<End> ends;
    for (const auto& pc : pieces)
        for (double p : {pc.p0, pc.p1}) {
            Vec2 x = pc.point(p);
            if (x.norm() > far * (1 - 1e-9)) continue;
            ends.push_back({x, pc.normal(p)});
        }
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        bool corner = true;
        for (std::size_t j = 0; j < ends.size(); ++j)
            if (j != i && (ends[i].x - ends[j].x).norm() < 1e-9 && (ends[i].nu - ends[j].nu).norm() < 1e-9) corner = false;
        if (corner) out.push_back(ends[i].x);
    }
    return out;
}

}  // namespace

CriticalityReport criticality_residual(const SetGeometry& e, const Domain& omega, const KernelSpec& k,
                                       const QuadConfig& cfg, const CriticalityOptions& opt)
{
    require(omega.kind() == Domain::Kind::ball, ErrorKind::unsupported, "criticality residual needs a ball domain");
    require(opt.node_budget >= 2, ErrorKind::config, "node budget must allow at least two nodes");
    const Vec2 c = omega.center();
    const double R = omega.radius();
    const double far = c.norm() + R + opt.exterior_reach + 1.0;
    const auto corners = corners_of(e, far);
    auto keep = [&](const Vec2& x) {
        if (std::abs(omega.signed_distance(x)) < opt.collar) return false;
        for (const auto& q : corners)
            if ((x - q).norm() < opt.collar) return false;
        return true;
    };

    std::vector<Vec2> in_nodes, out_nodes;
    auto collect = [&](const Window& w, std::vector<Vec2>& nodes) {
        for (const auto& pc : boundary_pieces(e, w))
            for (const auto& sm : sample_piece(pc, std::max(opt.collar, pc.length() / opt.node_budget), 2))
                if (keep(sm.point)) nodes.push_back(sm.point);
    };
    collect(Window::ball(c, R), in_nodes);
    collect(Window::annulus(c, R, R + opt.exterior_reach), out_nodes);
    // Thin both lists evenly to the budget.
    auto thin = [](std::vector<Vec2>& v, int budget) {
        if (static_cast<int>(v.size()) <= budget) return;
        std::vector<Vec2> t;
        for (int i = 0; i < budget; ++i) t.push_back(v[static_cast<std::size_t>(i) * v.size() / budget]);
        v = std::move(t);
    };
    const int half = opt.node_budget / 2;
    thin(in_nodes, out_nodes.empty() ? opt.node_budget : half);
    thin(out_nodes, in_nodes.empty() ? opt.node_budget : opt.node_budget - static_cast<int>(in_nodes.size()));

    CriticalityReport rep;
    rep.nodes_H = static_cast<int>(in_nodes.size());
    rep.nodes_A = static_cast<int>(out_nodes.size());
    std::vector<double> hv(in_nodes.size()), he(in_nodes.size()), av(out_nodes.size()), ae(out_nodes.size());
    parallel_for(static_cast<long>(in_nodes.size()), [&](long i) {
        auto r = mean_curvature(e, in_nodes[i], k, cfg);
        hv[i] = r.value;
        he[i] = r.result.error_estimate;
    });
    parallel_for(static_cast<long>(out_nodes.size()), [&](long i) {
        auto r = fb_defect(e, omega, out_nodes[i], k, cfg);
        av[i] = r.value;
        ae[i] = r.result.error_estimate;
    });
    double err_H = 0, err_A = 0;
    for (std::size_t i = 0; i < hv.size(); ++i) {
        err_H += he[i];
        if (std::abs(hv[i]) >= rep.max_H) rep.max_H = std::abs(hv[i]), rep.at_H = in_nodes[i];
    }
    for (std::size_t i = 0; i < av.size(); ++i) {
        err_A += ae[i];
        if (std::abs(av[i]) >= rep.max_A) rep.max_A = std::abs(av[i]), rep.at_A = out_nodes[i];
    }
    rep.error_H = hv.empty() ? 0.0 : err_H / hv.size();
    rep.error_A = av.empty() ? 0.0 : err_A / av.size();
    rep.tol_H = opt.tol > 0 ? opt.tol : 10 * rep.error_H;
    rep.tol_A = opt.tol > 0 ? opt.tol : 10 * rep.error_A;
    rep.pass = rep.max_H <= rep.tol_H && rep.max_A <= rep.tol_A;
    return rep;
}

}  // namespace fracmin
