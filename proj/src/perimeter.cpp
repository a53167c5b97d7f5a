#include "fracmin/perimeter.hpp"

#include "fracmin/rays.hpp"
#include "fracmin/rules.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>

namespace fracmin {

Mat2 Deformation::jacobian(const Vec2& x) const
{
    if (x.norm() > support_radius + 2 * fd_step) return Mat2::Identity();
    Mat2 d;
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = fd_step;
        d.col(j) = (map(x + e) - map(x - e)) / (2 * fd_step);
    }
    return d;
}

namespace {

constexpr int interp_nodes = 16;

// Barycentric weights for Gauss-Legendre nodes.
struct Interpolator {
    std::array<double, interp_nodes> u, w;
    Interpolator()
    {
        const GaussRule& g = gauss_legendre(interp_nodes);
        for (int j = 0; j < interp_nodes; ++j) {
            double x = g.node(j);
            u[j] = 0.5 * (1 + x);
            w[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1 - x * x) * g.weight(j));
        }
    }
};

const Interpolator& interpolator()
{
    static const Interpolator ip;
    return ip;
}

//! Boundary panel: a sub-range of a piece, mapped to u in [0, 1].
struct Panel {
    BoundaryPiece piece;
    double q0 = 0, q1 = 0;
    double kappa = 1;  // nu dsigma = kappa * perp(dX/du) du
    Vec2 a, b;         // static endpoints
    double len = 0;
    bool flowed = false;
    std::array<Vec2, interp_nodes> X, V;

    void eval(double u, Vec2& x, Vec2& nds) const
    {
        if (!flowed) {
            double p = q0 + (q1 - q0) * u;
            x = piece.point(p);
            nds = kappa * perp(piece.tangent(p) * (piece.speed() * (q1 - q0)));
            return;
        }
        const auto& ip = interpolator();
        double num_w = 0;
        Vec2 xs = Vec2::Zero(), vs = Vec2::Zero();
        for (int j = 0; j < interp_nodes; ++j) {
            double d = u - ip.u[j];
            if (d == 0) {
                x = X[j];
                nds = kappa * perp(V[j]);
                return;
            }
            double c = ip.w[j] / d;
            num_w += c;
            xs += c * X[j];
            vs += c * V[j];
        }
        x = xs / num_w;
        nds = kappa * perp(vs / num_w);
    }

    Vec2 velocity(double u) const
    {
        Vec2 x, nds;
        eval(u, x, nds);
        return -perp(nds) / kappa;
    }

    //! X(u + du) - X(u) without cancellation for small du.
    Vec2 chord(double u, double du) const
    {
        if (std::abs(du) > 0.05) {
            Vec2 xu, xw, n;
            eval(u, xu, n);
            eval(u + du, xw, n);
            return xw - xu;
        }
        const GaussRule& g = gauss_legendre(4);
        Vec2 acc = Vec2::Zero();
        for (int i = 0; i < g.size(); ++i) acc += g.weight(i) * velocity(u + 0.5 * du * (1 + g.node(i)));
        return 0.5 * du * acc;
    }
};

bool close(const Vec2& p, const Vec2& q) { return (p - q).norm() <= 1e-10 * (1 + p.norm()); }

bool same_curve(const BoundaryPiece& p, const BoundaryPiece& q)
{
    if (p.kind != q.kind) return false;
    if (p.kind == BoundaryPiece::Kind::arc)
        return close(p.origin, q.origin) && std::abs(p.radius - q.radius) <= 1e-12 * (1 + p.radius);
    return std::abs(cross2(p.dir, q.dir)) <= 1e-12 && std::abs(cross2(p.dir, q.origin - p.origin)) <= 1e-10;
}

// Parameter of q on the piece if it lies strictly inside its range.
std::optional<double> interior_param(const BoundaryPiece& pc, const Vec2& q)
{
    double p;
    if (pc.kind == BoundaryPiece::Kind::segment) {
        if (std::abs(cross2(pc.dir, q - pc.origin)) > 1e-10 * (1 + q.norm())) return std::nullopt;
        p = pc.dir.dot(q - pc.origin);
    } else {
        Vec2 d = q - pc.origin;
        if (std::abs(d.norm() - pc.radius) > 1e-10 * (1 + pc.radius)) return std::nullopt;
        p = std::atan2(d.y(), d.x());
        while (p < pc.p0) p += 2 * pi;
        while (p >= pc.p0 + 2 * pi) p -= 2 * pi;
    }
    double tol = 1e-10 / pc.speed();
    if (p <= pc.p0 + tol || p >= pc.p1 - tol) return std::nullopt;
    return p;
}

struct PanelSystem {
    std::vector<Panel> a, b;
};

void split_panels(const BoundaryPiece& pc, double q0, double q1, double h, std::vector<Panel>& out, int depth)
{
    Vec2 mid = pc.point(0.5 * (q0 + q1));
    double len = (q1 - q0) * pc.speed();
    double limit = h * std::max(1.0, mid.norm());
    if (pc.kind == BoundaryPiece::Kind::arc) limit = std::min(limit, pc.radius * pi / 4);
    if (len > limit && depth < 40) {
        double m = 0.5 * (q0 + q1);
        split_panels(pc, q0, m, h, out, depth + 1);
        split_panels(pc, m, q1, h, out, depth + 1);
        return;
    }
    Panel p;
    p.piece = pc;
    p.q0 = q0;
    p.q1 = q1;
    p.kappa = -pc.orient;  // normal = -orient * perp(tangent) on both kinds
    p.a = pc.point(q0);
    p.b = pc.point(q1);
    p.len = len;
    out.push_back(p);
}

void apply_flow(Panel& p, const Deformation& phi)
{
    const auto& ip = interpolator();
    p.flowed = true;
    for (int j = 0; j < interp_nodes; ++j) {
        double q = p.q0 + (p.q1 - p.q0) * ip.u[j];
        Vec2 x = p.piece.point(q);
        Vec2 v = p.piece.tangent(q) * (p.piece.speed() * (p.q1 - p.q0));
        p.X[j] = phi.map(x);
        p.V[j] = phi.jacobian(x) * v;
    }
}

PanelSystem build_panels(const SetGeometry& sa, const SetGeometry& sb, const PanelOptions& opt)
{
    double far = 2 * std::max(sa.bounding_radius(), sb.bounding_radius()) + 1;
    auto pa = boundary_pieces(sa, Window::ball(Vec2::Zero(), far), false);
    auto pb = boundary_pieces(sb, Window::ball(Vec2::Zero(), far), false);
    std::vector<Vec2> breaks;
    for (const auto* list : {&pa, &pb})
        for (const auto& pc : *list) {
            breaks.push_back(pc.point(pc.p0));
            breaks.push_back(pc.point(pc.p1));
        }
    PanelSystem sys;
    auto panelize = [&](const std::vector<BoundaryPiece>& pieces, std::vector<Panel>& out) {
        for (const auto& pc : pieces) {
            std::vector<double> cuts{pc.p0, pc.p1};
            for (const auto& q : breaks)
                if (auto p = interior_param(pc, q)) cuts.push_back(*p);
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
                if (!((cuts[j + 1] - cuts[j]) * pc.speed() > 1e-12)) continue;
                split_panels(pc, cuts[j], cuts[j + 1], opt.h, out, 0);
            }
        }
        if (opt.flow)
            parallel_for(static_cast<long>(out.size()), [&](long i) { apply_flow(out[i], *opt.flow); });
    };
    panelize(pa, sys.a);
    panelize(pb, sys.b);
    return sys;
}

std::vector<Panel> region_panels(const SetGeometry& region, const PanelOptions& opt)
{
    return build_panels(region, SetGeometry::empty(), opt).a;
}

// ---------------------------------------------------------------------------
// Panel-pair rules for int int |x - y|^{-s} nu_P . nu_Q
// ---------------------------------------------------------------------------

struct PairSum {
    double value = 0;
    double error = 0;
};

class PairRules {
public:
    explicit PairRules(double s) : s_(s) {}

    double g(const Panel& P, double u, const Panel& Q, double v) const
    {
        Vec2 x, nx, y, ny;
        P.eval(u, x, nx);
        Q.eval(v, y, ny);
        double d2 = (x - y).squaredNorm();
        if (!(d2 > 0)) return 0.0;
        return std::pow(d2, -0.5 * s_) * nx.dot(ny);
    }

    PairSum pair(const Panel& P, const Panel& Q) const
    {
        bool same = same_curve(P.piece, Q.piece);
        bool aa = close(P.a, Q.a), ab = close(P.a, Q.b), ba = close(P.b, Q.a), bb = close(P.b, Q.b);
        if (same && ((aa && bb) || (ab && ba))) return coincident(P, Q, ab && ba);
        int shared = int(aa) + int(ab) + int(ba) + int(bb);
        if (shared >= 2) {
            // Two distinct curves through both endpoints: halve P.
            PairSum lo = touching(P, Q, 0.0, aa ? 0.0 : 1.0, 0.0, 0.5);
            PairSum hi = touching(P, Q, 1.0, ba ? 0.0 : 1.0, 0.5, 1.0);
            return {lo.value + hi.value, lo.error + hi.error};
        }
        if (shared == 1) {
            double us = (aa || ab) ? 0.0 : 1.0;
            double vs = (aa || ba) ? 0.0 : 1.0;
            return touching(P, Q, us, vs, 0.0, 1.0);
        }
        return regular(P, 0.0, 1.0, Q, 0.0, 1.0, 0);
    }

private:
    // Identical panels; Q may run in the opposite direction.
    PairSum coincident(const Panel& P, const Panel& Q, bool reversed) const
    {
        const GaussRule& gl = gauss_legendre(20);
        auto qv = [&](double v) { return reversed ? 1.0 - v : v; };
        // Both points are taken on P so the separation is a short chord.
        auto gc = [&](double u, double du) {
            Vec2 x, nx, y, ny;
            P.eval(u, x, nx);
            Q.eval(qv(u + du), y, ny);
            double d2 = P.chord(u, du).squaredNorm();
            return d2 > 0 ? std::pow(d2, -0.5 * s_) * nx.dot(ny) : 0.0;
        };
        auto F = [&](double, double tau, double) {
            double span = 1.0 - tau;
            if (!(span > 0)) return 0.0;
            return gl.integrate(0.0, span, [&](double sig) { return gc(sig, tau) + gc(sig + tau, -tau); });
        };
        auto q = tanh_sinh(F, 0.0, 1.0, 1e-13, 0.0, 7, 3);
        return {q.value, q.error};
    }

    // P on [u0, u1] and Q meet at P(us) = Q(vs), us in {u0, u1}, vs in {0, 1}.
    PairSum touching(const Panel& P, const Panel& Q, double us, double vs, double u0, double u1) const
    {
        const GaussRule& gl = gauss_legendre(20);
        const double pl = u1 - u0;
        auto pu = [&](double x) { return us == u0 ? u0 + pl * x : u1 - pl * x; };
        auto qv = [&](double y) { return vs == 0 ? y : 1.0 - y; };
        auto F = [&](double, double x, double) {
            double inner = gl.integrate(0.0, 1.0, [&](double y) {
                return g(P, pu(x), Q, qv(x * y)) + g(P, pu(x * y), Q, qv(x));
            });
            return x * inner;
        };
        auto q = tanh_sinh(F, 0.0, 1.0, 1e-13, 0.0, 7, 3);
        return {pl * q.value, pl * q.error};
    }

    PairSum regular(const Panel& P, double u0, double u1, const Panel& Q, double v0, double v1, int depth) const
    {
        double lp = P.len * (u1 - u0), lq = Q.len * (v1 - v0);
        Vec2 xs[3], ys[3], n;
        for (int i = 0; i < 3; ++i) {
            P.eval(u0 + 0.5 * i * (u1 - u0), xs[i], n);
            Q.eval(v0 + 0.5 * i * (v1 - v0), ys[i], n);
        }
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& x : xs)
            for (const auto& y : ys) dist = std::min(dist, (x - y).norm());
        double size = std::max(lp, lq);
        if (dist < 1.5 * size && depth < 24) {
            PairSum lo, hi;
            if (lp >= lq) {
                double m = 0.5 * (u0 + u1);
                lo = regular(P, u0, m, Q, v0, v1, depth + 1);
                hi = regular(P, m, u1, Q, v0, v1, depth + 1);
            } else {
                double m = 0.5 * (v0 + v1);
                lo = regular(P, u0, u1, Q, v0, m, depth + 1);
                hi = regular(P, u0, u1, Q, m, v1, depth + 1);
            }
            return {lo.value + hi.value, lo.error + hi.error};
        }
        double fine = tensor(P, u0, u1, Q, v0, v1, 8), coarse = tensor(P, u0, u1, Q, v0, v1, 6);
        return {fine, std::abs(fine - coarse)};
    }

    double tensor(const Panel& P, double u0, double u1, const Panel& Q, double v0, double v1, int m) const
    {
        const GaussRule& gl = gauss_legendre(m);
        Vec2 x[8], nx[8], y[8], ny[8];
        for (int i = 0; i < m; ++i) {
            P.eval(u0 + 0.5 * (u1 - u0) * (1 + gl.node(i)), x[i], nx[i]);
            Q.eval(v0 + 0.5 * (v1 - v0) * (1 + gl.node(i)), y[i], ny[i]);
        }
        double acc = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                acc += gl.weight(i) * gl.weight(j) * std::pow((x[i] - y[j]).squaredNorm(), -0.5 * s_)
                       * nx[i].dot(ny[j]);
        return 0.25 * (u1 - u0) * (v1 - v0) * acc;
    }

    double s_;
};

bool standard_planar(const KernelSpec& k)
{
    return k.kind() == KernelKind::standard && k.n() == 2 && !k.delta().has_value();
}

double set_area(const SetGeometry& e)
{
    double R = e.bounding_radius();
    return volume_in(e, Domain::ball(Vec2::Zero(), R + 1)).value;
}

// Tensor Chebyshev interpolant on the square |x - c|_inf <= rho, with the
// coefficients of an x-antiderivative.
class ChebyshevPatch {
public:
    ChebyshevPatch(const std::function<double(const Vec2&)>& f, const Vec2& c, double rho, int n)
        : c_(c), rho_(rho), a_(n, n), g_(Eigen::MatrixXd::Zero(n + 1, n))
    {
        std::vector<double> u(n);
        for (int k = 0; k < n; ++k) u[k] = std::cos(pi * (k + 0.5) / n);
        std::vector<double> vals(static_cast<std::size_t>(n) * n);
        parallel_for(static_cast<long>(vals.size()), [&](long idx) {
            vals[idx] = f(c + rho * Vec2(u[idx / n], u[idx % n]));
        });
        Eigen::MatrixXd F = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            vals.data(), n, n);
        Eigen::MatrixXd C(n, n);  // C(i, k) = T_i(u_k) scaled for the discrete transform
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) C(i, k) = (i == 0 ? 1.0 : 2.0) / n * std::cos(i * pi * (k + 0.5) / n);
        a_ = C * F * C.transpose();
        // int T_0 = T_1, int T_1 = T_2 / 4, int T_i = T_{i+1} / (2(i+1)) - T_{i-1} / (2(i-1))
        for (int i = 0; i < n; ++i) {
            if (i == 0) g_.row(1) += a_.row(0);
            else if (i == 1) g_.row(2) += 0.25 * a_.row(1);
            else {
                g_.row(i + 1) += a_.row(i) / (2.0 * (i + 1));
                g_.row(i - 1) -= a_.row(i) / (2.0 * (i - 1));
            }
        }
        g_ *= rho;
    }

    double value(const Vec2& x) const { return eval(a_, x); }
    double antiderivative(const Vec2& x) const { return eval(g_, x); }

private:
    double eval(const Eigen::MatrixXd& m, const Vec2& x) const
    {
        Eigen::VectorXd tu = basis((x.x() - c_.x()) / rho_, m.rows()), tv = basis((x.y() - c_.y()) / rho_, m.cols());
        return tu.dot(m * tv);
    }
    static Eigen::VectorXd basis(double u, Eigen::Index n)
    {
        Eigen::VectorXd t(n);
        t[0] = 1;
        if (n > 1) t[1] = u;
        for (Eigen::Index i = 2; i < n; ++i) t[i] = 2 * u * t[i - 1] - t[i - 2];
        return t;
    }
    Vec2 c_;
    double rho_;
    Eigen::MatrixXd a_, g_;
};

std::vector<Panel> region_panels(const SetGeometry& region, const PanelOptions& opt);

// Flowed far field: f is far smoother than the flow, so it is interpolated
// on a square around the domain and integrated over Phi(region) through
// int f = oint G nu_x with dG/dx = f, on the flowed panels.
IntegralResult far_field_flowed(const SetGeometry& region, const RayIntegrand& f, double rho, const Vec2& center,
                                const KernelSpec& k, const QuadConfig& inner, const Deformation& flow)
{
    auto mass = [&](const Vec2& y) { return ray_integrate(f, y, k, inner).value; };
    const Vec2 probes[4] = {center + rho * Vec2(0.31, -0.72), center + rho * Vec2(-0.83, 0.11),
                            center + rho * Vec2(0.05, 0.93), center + rho * Vec2(0.67, 0.58)};
    double exact[4];
    for (int i = 0; i < 4; ++i) exact[i] = mass(probes[i]);
    for (int n : {16, 32, 48}) {
        ChebyshevPatch patch(mass, center, rho, n);
        double dev = 0, scale = 0;
        for (int i = 0; i < 4; ++i) {
            dev = std::max(dev, std::abs(patch.value(probes[i]) - exact[i]));
            scale = std::max(scale, std::abs(exact[i]));
        }
        if (dev > 1e-12 * scale && n < 48) continue;
        PanelOptions opt;
        opt.flow = &flow;
        const GaussRule& g = gauss_legendre(20);
        IntegralResult out;
        out.method = Method::adaptive;
        double area = 0;
        for (const auto& P : region_panels(region, opt))
            for (int i = 0; i < g.size(); ++i) {
                Vec2 x, nds;
                P.eval(0.5 * (1 + g.node(i)), x, nds);
                out.value += 0.5 * g.weight(i) * patch.antiderivative(x) * nds.x();
                area += 0.5 * g.weight(i) * 0.5 * x.dot(nds);
            }
        out.error_estimate = dev * std::abs(area) + 1e-13 * std::abs(out.value);
        out.converged = dev <= 1e-10 * scale;
        out.samples_used = static_cast<long>(n) * n;
        return out;
    }
    return {};
}

// int_{Phi(A)} f(y) dy with f(y) = int_F K(y - z) dz, where F is the part of
// `far_set` outside B_T (untouched by the flow).
IntegralResult far_field(const SetGeometry& region, const SetGeometry& far_set, double T, const Vec2& center,
                         double domain_radius, const KernelSpec& k, const QuadConfig& cfg, const Deformation* flow)
{
    IntegralResult out;
    out.method = Method::adaptive;
    const SetGeometry ball_T = SetGeometry::ball(Vec2::Zero(), T);
    RayIntegrand f{{far_set, ball_T}, [](unsigned m) { return ((m & 1u) && !(m & 2u)) ? 1.0 : 0.0; }};
    QuadConfig inner = cfg;
    inner.rel_tol = std::max(cfg.rel_tol, 1e-11);
    if (flow) return far_field_flowed(region, f, domain_radius * (1 + 1e-9), center, k, inner, *flow);

    RayProgram prog({region});
    prog.set_origin(center);
    std::vector<double> cuts = prog.critical_angles();
    cuts.push_back(0.0);
    cuts.push_back(2 * pi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return b - a < 1e-13; }), cuts.end());

    const GaussRule& gl = gauss_legendre(16);
    struct Node {
        Vec2 x;
        double w;
    };
    std::vector<Node> nodes;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        double a = cuts[j], b = cuts[j + 1], half = 0.5 * (b - a);
        for (int i = 0; i < gl.size(); ++i) {
            double th = a + half * (1 + gl.node(i));
            Vec2 u = unit_dir(th);
            RaySegments seg;
            prog.cast(u, false, seg);
            for (std::size_t m = 0; m < seg.mask.size(); ++m) {
                if (!(seg.mask[m] & 1u)) continue;
                require(m + 1 < seg.t.size(), ErrorKind::domain, "far-field region must be bounded");
                double t0 = seg.t[m], t1 = seg.t[m + 1], rh = 0.5 * (t1 - t0);
                for (int l = 0; l < gl.size(); ++l) {
                    double t = t0 + rh * (1 + gl.node(l));
                    nodes.push_back({center + t * u, half * gl.weight(i) * rh * gl.weight(l) * t});
                }
            }
        }
    }
    std::vector<double> val(nodes.size()), err(nodes.size());
    parallel_for(static_cast<long>(nodes.size()), [&](long i) {
        auto r = ray_integrate(f, nodes[i].x, k, inner);
        val[i] = nodes[i].w * r.value;
        err[i] = std::abs(nodes[i].w) * r.error_estimate;
    });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out.value += val[i];
        out.error_estimate += err[i];
    }
    out.samples_used = static_cast<long>(nodes.size());
    return out;
}

void check_disjoint(const SetGeometry& a, const SetGeometry& b, const QuadConfig& cfg)
{
    double R = std::min({a.bounding_radius(), b.bounding_radius(), cfg.trunc_radius});
    auto g = cell_rng(cfg.seed, 0xd15c0u);
    for (int i = 0; i < 4096; ++i) {
        Vec2 x(R * (2 * uniform01(g) - 1), R * (2 * uniform01(g) - 1));
        require(!(a.indicator(x).side == Side::inside && b.indicator(x).side == Side::inside), ErrorKind::config,
                "interaction sets overlap");
    }
}

}  // namespace

IntegralResult boundary_interaction(const SetGeometry& a, const SetGeometry& b, const KernelSpec& k,
                                    const PanelOptions& opt)
{
    require(standard_planar(k), ErrorKind::unsupported, "boundary form needs the standard planar kernel");
    require(a.bounded() && b.bounded(), ErrorKind::domain, "boundary form needs bounded sets");
    require(opt.h > 0, ErrorKind::config, "panel length must be positive");
    IntegralResult out;
    out.method = Method::adaptive;
    if (a.shape() == Shape::empty || b.shape() == Shape::empty) return out;
    PanelSystem sys = build_panels(a, b, opt);
    PairRules rules(k.s());
    std::vector<PairSum> rows(sys.a.size());
    parallel_for(static_cast<long>(sys.a.size()), [&](long i) {
        PairSum acc;
        for (const auto& Q : sys.b) {
            PairSum p = rules.pair(sys.a[i], Q);
            acc.value += p.value;
            acc.error += p.error;
        }
        rows[i] = acc;
    });
    double sum = 0, err = 0;
    for (const auto& r : rows) {
        sum += r.value;
        err += r.error;
    }
    const double f = -k.c() / (k.s() * k.s());
    out.value = f * sum;
    out.error_estimate = std::abs(f) * err + 1e-14 * std::abs(out.value);
    out.samples_used = static_cast<long>(sys.a.size() * sys.b.size());
    return out;
}

IntegralResult interaction(const SetGeometry& a, const SetGeometry& b, const KernelSpec& k, const QuadConfig& cfg)
{
    cfg.validate();
    require(a.bounded() || b.bounded(), ErrorKind::domain, "at least one interaction set must be bounded");
    check_disjoint(a, b, cfg);
    if (!standard_planar(k)) return mc_pair_integrate(a.bounded() ? a : b, a.bounded() ? b : a, k, cfg);

    const double T = cfg.trunc_radius;
    const SetGeometry ball_T = SetGeometry::ball(Vec2::Zero(), T);
    const SetGeometry& inner = a.bounded() ? a : b;
    const SetGeometry& outer = a.bounded() ? b : a;
    double R = inner.bounding_radius();
    require(R < T, ErrorKind::config, "trunc_radius must exceed the bounded set's radius");
    if (outer.bounded()) return boundary_interaction(a, b, k);
    auto out = boundary_interaction(inner, SetGeometry::intersect(outer, ball_T), k);
    out.bias_bound = k.c() * set_area(inner) * 2 * pi * std::pow(T - R, -k.s()) / k.s();
    return out;
}

PerimeterBreakdown frac_perimeter(const SetGeometry& e, const Domain& omega, const KernelSpec& k,
                                  const QuadConfig& cfg, const PanelOptions& opt)
{
    cfg.validate();
    require(omega.bounded(), ErrorKind::domain, "fractional perimeter needs a bounded domain");
    const SetGeometry& om = omega.set();
    const SetGeometry ec = !e;
    PerimeterBreakdown out;

    if (!standard_planar(k)) {
        require(!opt.flow, ErrorKind::unsupported, "flowed perimeters need the standard planar kernel");
        out.term_in_in = interaction(SetGeometry::intersect(ec, om), SetGeometry::intersect(e, om), k, cfg);
        out.term_in_out = interaction(SetGeometry::intersect(e, om), SetGeometry::intersect(ec, !om), k, cfg);
        out.term_out_in = interaction(SetGeometry::intersect(e, !om), SetGeometry::intersect(ec, om), k, cfg);
    } else {
        const double T = cfg.trunc_radius;
        const double R = omega.center().norm() + omega.radius();
        require(T > R + 1, ErrorKind::config, "trunc_radius must exceed the domain radius by at least 1");
        if (opt.flow)
            require(opt.flow->support_radius < T - 0.5, ErrorKind::config,
                    "flow support must lie well inside B_trunc_radius");
        const SetGeometry shell = SetGeometry::intersect(SetGeometry::ball(Vec2::Zero(), T), !om);
        const SetGeometry e_in = SetGeometry::intersect(e, om), ec_in = SetGeometry::intersect(ec, om);
        out.term_in_in = boundary_interaction(ec_in, e_in, k, opt);
        out.term_in_out = boundary_interaction(e_in, SetGeometry::intersect(ec, shell), k, opt);
        out.term_in_out += far_field(e_in, ec, T, omega.center(), omega.radius(), k, cfg, opt.flow);
        out.term_out_in = boundary_interaction(SetGeometry::intersect(e, shell), ec_in, k, opt);
        out.term_out_in += far_field(ec_in, e, T, omega.center(), omega.radius(), k, cfg, opt.flow);
    }
    for (const auto* t : {&out.term_in_in, &out.term_in_out, &out.term_out_in}) {
        out.total += t->value;
        out.bias_bound += t->bias_bound;
    }
    if (out.term_in_in.method == Method::mc)
        out.error = std::sqrt(std::pow(out.term_in_in.error_estimate, 2) + std::pow(out.term_in_out.error_estimate, 2)
                              + std::pow(out.term_out_in.error_estimate, 2));
    else
        out.error = out.term_in_in.error_estimate + out.term_in_out.error_estimate + out.term_out_in.error_estimate;
    return out;
}

}  // namespace fracmin
