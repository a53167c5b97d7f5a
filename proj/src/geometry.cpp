#include "fracmin/geometry.hpp"

#include "fracmin/kernel.hpp"
#include "fracmin/rays.hpp"
#include "fracmin/rules.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace fracmin {

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

double Atom::margin(const Vec2& x) const
{
    return kind == Kind::half_plane ? n.dot(x) - b : (x - c).norm() - r;
}

Vec2 Atom::outward(const Vec2& x) const
{
    if (kind == Kind::half_plane) return n;
    Vec2 d = x - c;
    double len = d.norm();
    return len > 0 ? Vec2(d / len) : Vec2::UnitX();
}

bool Atom::same_curve(const Atom& o) const
{
    if (kind != o.kind) return false;
    if (kind == Kind::disk) return c == o.c && r == o.r;
    return (n == o.n && b == o.b) || (n == -o.n && b == -o.b);
}

bool Formula::eval(const std::vector<char>& s) const
{
    // Nodes are topologically ordered; a small stack buffer covers all shapes.
    char buf[64];
    std::vector<char> heap;
    char* v = buf;
    if (nodes.size() > 64) {
        heap.resize(nodes.size());
        v = heap.data();
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& nd = nodes[i];
        switch (nd.op) {
        case Op::atom: v[i] = s[nd.a] != 0; break;
        case Op::negate: v[i] = !v[nd.a]; break;
        case Op::both: v[i] = v[nd.a] && v[nd.b]; break;
        case Op::either: v[i] = v[nd.a] || v[nd.b]; break;
        case Op::constant: v[i] = nd.value; break;
        }
    }
    return nodes.empty() ? false : v[nodes.size() - 1] != 0;
}

int Formula::atom_count_hint() const
{
    int m = -1;
    for (const auto& nd : nodes)
        if (nd.op == Op::atom) m = std::max(m, nd.a);
    return m + 1;
}

namespace {

double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

}  // namespace

std::pair<int, bool> AtomTable::add(const Atom& in)
{
    Atom a = in;
    bool flipped = false;
    if (a.kind == Atom::Kind::half_plane) {
        double len = a.n.norm();
        require(len > 0, ErrorKind::config, "half-plane normal must be nonzero");
        if (std::abs(len - 1.0) > 1e-15) {
            a.n /= len;
            a.b /= len;
        }
        if (a.n.x() < 0 || (a.n.x() == 0 && a.n.y() < 0)) {
            a.n = -a.n;
            a.b = -a.b;
            flipped = true;
        }
        a.n = Vec2(clean_zero(a.n.x()), clean_zero(a.n.y()));
        a.b = clean_zero(a.b);
        a.c = Vec2::Zero();
        a.r = 0;
    } else {
        require(a.r > 0, ErrorKind::config, "disk radius must be positive");
        a.n = Vec2::Zero();
        a.b = 0;
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& o = atoms_[i];
        if (o.kind != a.kind) continue;
        if (a.kind == Atom::Kind::half_plane ? (o.n == a.n && o.b == a.b) : (o.c == a.c && o.r == a.r))
            return {static_cast<int>(i), flipped};
    }
    atoms_.push_back(a);
    return {static_cast<int>(atoms_.size()) - 1, flipped};
}

std::vector<char> AtomTable::states(const Vec2& x) const
{
    std::vector<char> s(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) s[i] = atoms_[i].margin(x) < 0 ? 1 : 0;
    return s;
}

namespace {

// Intersection points of two atom boundary curves.
void curve_intersections(const Atom& a, const Atom& b, std::vector<Vec2>& out)
{
    using K = Atom::Kind;
    if (a.kind == K::half_plane && b.kind == K::half_plane) {
        double det = cross2(a.n, b.n);
        if (std::abs(det) < 1e-14) return;
        out.push_back(Vec2((a.b * b.n.y() - b.b * a.n.y()) / det, (a.n.x() * b.b - b.n.x() * a.b) / det));
        return;
    }
    if (a.kind == K::disk && b.kind == K::half_plane) {
        curve_intersections(b, a, out);
        return;
    }
    if (a.kind == K::half_plane) {
        Vec2 foot = a.n * a.b;
        Vec2 tau = perp(a.n);
        Vec2 d = foot - b.c;
        double p = tau.dot(d), q = d.squaredNorm() - b.r * b.r;
        double disc = p * p - q;
        if (disc < 0) return;
        double sq = std::sqrt(disc);
        out.push_back(foot + (-p - sq) * tau);
        if (sq > 0) out.push_back(foot + (-p + sq) * tau);
        return;
    }
    Vec2 d = b.c - a.c;
    double dist = d.norm();
    if (dist == 0 || dist > a.r + b.r || dist < std::abs(a.r - b.r)) return;
    double along = (a.r * a.r - b.r * b.r + dist * dist) / (2 * dist);
    double h = std::sqrt(std::max(0.0, a.r * a.r - along * along));
    Vec2 e = d / dist;
    Vec2 base = a.c + along * e;
    out.push_back(base + h * perp(e));
    if (h > 0) out.push_back(base - h * perp(e));
}

}  // namespace

std::vector<Vec2> AtomTable::vertices() const
{
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        for (std::size_t j = i + 1; j < atoms_.size(); ++j) curve_intersections(atoms_[i], atoms_[j], v);
    return v;
}

// ---------------------------------------------------------------------------
// SetGeometry nodes and compilation
// ---------------------------------------------------------------------------

struct SetGeometry::Node {
    Shape shape = Shape::empty;
    std::vector<double> params;
    std::vector<SetGeometry> kids;
    Isometry iso;
    bool planar = true;
    mutable AtomTable table;
    mutable Formula formula;
};

namespace {

struct Builder {
    Formula f;
    AtomTable& table;
    std::vector<Isometry> stack;

    int push(Formula::Op op, int a = -1, int b = -1, bool value = false)
    {
        f.nodes.push_back({op, a, b, value});
        return static_cast<int>(f.nodes.size()) - 1;
    }
    int atom(Atom a)
    {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const Isometry& g = *it;
            if (a.kind == Atom::Kind::half_plane) {
                Vec2 n = g.R * a.n;
                a.b = a.b + n.dot(g.t);
                a.n = n;
            } else {
                a.c = g(a.c);
            }
        }
        auto [id, flipped] = table.add(a);
        int node = push(Formula::Op::atom, id);
        return flipped ? push(Formula::Op::negate, node) : node;
    }
    int half_plane(const Vec2& n, double b)
    {
        Atom a;
        a.kind = Atom::Kind::half_plane;
        a.n = n;
        a.b = b;
        return atom(a);
    }
    int disk(const Vec2& c, double r)
    {
        Atom a;
        a.kind = Atom::Kind::disk;
        a.c = c;
        a.r = r;
        return atom(a);
    }
    int neg(int i) { return push(Formula::Op::negate, i); }
    int both(int i, int j) { return push(Formula::Op::both, i, j); }
    int either(int i, int j) { return push(Formula::Op::either, i, j); }
    int constant(bool v) { return push(Formula::Op::constant, -1, -1, v); }
};

}  // namespace

namespace detail {

int build(const SetGeometry& e, Builder& bld);

// Unit direction of the boundary ray at angle m pi / k, with the rays m and
// m + k computed as exact negatives so the shared line deduplicates.
Vec2 sector_ray(int m, int k)
{
    int base = m % k;
    Vec2 d = unit_dir(pi * base / k);
    return ((m / k) % 2 == 0) ? d : Vec2(-d);
}

int build(const SetGeometry& e, Builder& bld)
{
    const auto& p = e.params();
    switch (e.shape()) {
    case Shape::half_space: return bld.half_plane(Vec2(p[0], p[1]), p[2]);
    case Shape::ball: return bld.disk(Vec2(p[0], p[1]), p[2]);
    case Shape::annulus: {
        int outer = bld.disk(Vec2(p[0], p[1]), p[3]);
        int inner = bld.disk(Vec2(p[0], p[1]), p[2]);
        return bld.both(outer, bld.neg(inner));
    }
    case Shape::cone_sector: {
        int k = static_cast<int>(p[0]);
        int acc = -1;
        for (int j = 0; j < k; ++j) {
            Vec2 da = sector_ray(2 * j, k), db = sector_ray(2 * j + 1, k);
            int left = bld.half_plane(-perp(da), 0.0);  // cross(da, x) > 0
            int right = bld.half_plane(perp(db), 0.0);  // cross(x, db) > 0
            int sec = bld.both(left, right);
            acc = acc < 0 ? sec : bld.either(acc, sec);
        }
        return acc;
    }
    case Shape::pie_glued: {
        int inner = build(e.children()[0], bld);
        int disk = bld.disk(Vec2::Zero(), p[0]);
        return bld.either(bld.both(inner, disk), bld.both(bld.neg(inner), bld.neg(disk)));
    }
    case Shape::corner_pair: {
        Vec2 w1(-std::sin(p[0]), std::cos(p[0])), w2(-std::sin(p[1]), std::cos(p[1]));
        int left_half = bld.half_plane(Vec2::UnitX(), 0.0);  // x1 < 0
        int e1 = bld.both(bld.neg(left_half), bld.half_plane(w1, 0.0));
        int e2 = bld.both(left_half, bld.half_plane(w2, 0.0));
        return bld.either(e1, e2);
    }
    case Shape::lawson_cone: {
        require(p[0] == 1 && p[1] == 1, ErrorKind::unsupported,
                "Lawson cone has a planar indicator only for n = m = 1");
        double a = p[2];
        int l1 = bld.half_plane(Vec2(1.0, -a), 0.0);
        int l2 = bld.half_plane(Vec2(1.0, a), 0.0);
        return bld.either(bld.both(l1, bld.neg(l2)), bld.both(bld.neg(l1), l2));
    }
    case Shape::complement: return bld.neg(build(e.children()[0], bld));
    case Shape::set_union: return bld.either(build(e.children()[0], bld), build(e.children()[1], bld));
    case Shape::set_intersection:
        return bld.both(build(e.children()[0], bld), build(e.children()[1], bld));
    case Shape::transformed: {
        bld.stack.push_back(e.isometry());
        int r = build(e.children()[0], bld);
        bld.stack.pop_back();
        return r;
    }
    case Shape::empty: return bld.constant(false);
    }
    return bld.constant(false);
}

std::shared_ptr<SetGeometry::Node> make_node(Shape shape, std::vector<double> params,
                                             std::vector<SetGeometry> kids = {}, Isometry iso = {})
{
    auto node = std::make_shared<SetGeometry::Node>();
    node->shape = shape;
    node->params = std::move(params);
    node->kids = std::move(kids);
    node->iso = iso;
    node->planar = true;
    for (const auto& k : node->kids) node->planar = node->planar && k.planar();
    return node;
}

}  // namespace detail

Formula SetGeometry::compile(AtomTable& table) const
{
    require(planar(), ErrorKind::unsupported, "set has no planar indicator: " + describe());
    Builder bld{Formula{}, table, {}};
    detail::build(*this, bld);
    return bld.f;
}

struct GeometryAccess {
    // Wraps a node and caches its compiled formula.
    static SetGeometry finish(std::shared_ptr<SetGeometry::Node> node)
    {
        SetGeometry out(node);
        if (node->planar) node->formula = out.compile(node->table);
        return out;
    }
};

namespace {

SetGeometry finish(std::shared_ptr<SetGeometry::Node> node) { return GeometryAccess::finish(std::move(node)); }

}  // namespace

SetGeometry SetGeometry::half_space(const Vec2& normal, double offset)
{
    double len = normal.norm();
    require(len > 0 && std::isfinite(offset), ErrorKind::config, "half-space needs a nonzero normal");
    Vec2 n = normal / len;
    return finish(detail::make_node(Shape::half_space, {n.x(), n.y(), offset / len}));
}

SetGeometry SetGeometry::ball(const Vec2& center, double radius)
{
    require(radius > 0, ErrorKind::config, "ball radius must be positive");
    return finish(detail::make_node(Shape::ball, {center.x(), center.y(), radius}));
}

SetGeometry SetGeometry::annulus(const Vec2& center, double r_in, double r_out)
{
    require(r_in > 0 && r_in < r_out, ErrorKind::config, "annulus requires 0 < r_in < r_out");
    return finish(detail::make_node(Shape::annulus, {center.x(), center.y(), r_in, r_out}));
}

SetGeometry SetGeometry::cone_sector(int k)
{
    require(k >= 1, ErrorKind::config, "cone sector count must be >= 1");
    return finish(detail::make_node(Shape::cone_sector, {static_cast<double>(k)}));
}

SetGeometry SetGeometry::pie_glued(const SetGeometry& inner, double radius)
{
    require(radius > 0, ErrorKind::config, "glue radius must be positive");
    return finish(detail::make_node(Shape::pie_glued, {radius}, {inner}));
}

SetGeometry SetGeometry::corner_pair(double theta1, double theta2)
{
    auto ok = [](double t) { return t > -pi / 2 && t < pi / 2; };
    require(ok(theta1) && ok(theta2), ErrorKind::config, "corner angles must lie in (-pi/2, pi/2)");
    return finish(detail::make_node(Shape::corner_pair, {theta1, theta2}));
}

SetGeometry SetGeometry::lawson_cone(int n, int m, double alpha)
{
    require(n >= 1 && m >= 1 && alpha > 0, ErrorKind::config, "Lawson cone needs n, m >= 1, alpha > 0");
    auto node = detail::make_node(Shape::lawson_cone,
                                  {static_cast<double>(n), static_cast<double>(m), alpha});
    node->planar = (n == 1 && m == 1);
    return finish(node);
}

SetGeometry SetGeometry::complement(const SetGeometry& e)
{
    return finish(detail::make_node(Shape::complement, {}, {e}));
}

SetGeometry SetGeometry::unite(const SetGeometry& a, const SetGeometry& b)
{
    return finish(detail::make_node(Shape::set_union, {}, {a, b}));
}

SetGeometry SetGeometry::intersect(const SetGeometry& a, const SetGeometry& b)
{
    return finish(detail::make_node(Shape::set_intersection, {}, {a, b}));
}

SetGeometry SetGeometry::transformed(const SetGeometry& e, const Isometry& g)
{
    return finish(detail::make_node(Shape::transformed, {}, {e}, g));
}

SetGeometry SetGeometry::empty() { return finish(detail::make_node(Shape::empty, {})); }

SetGeometry operator!(const SetGeometry& e) { return SetGeometry::complement(e); }

Shape SetGeometry::shape() const { return node_->shape; }
const std::vector<double>& SetGeometry::params() const { return node_->params; }
const std::vector<SetGeometry>& SetGeometry::children() const { return node_->kids; }
const Isometry& SetGeometry::isometry() const { return node_->iso; }
bool SetGeometry::planar() const { return node_->planar; }

std::vector<std::string> SetGeometry::symmetry_tags() const
{
    switch (shape()) {
    case Shape::half_space: return {"reflective", "translational"};
    case Shape::ball:
    case Shape::annulus: return {"rotational", "reflective"};
    case Shape::cone_sector: return {"rotational-discrete", "antipodal-exchange"};
    case Shape::pie_glued: return {"rotational-discrete", "antipodal-exchange"};
    case Shape::lawson_cone: return {"rotational", "reflective"};
    case Shape::corner_pair:
        return params()[0] == -params()[1] ? std::vector<std::string>{"reflective"}
                                           : std::vector<std::string>{};
    case Shape::complement: return children()[0].symmetry_tags();
    default: return {};
    }
}

bool SetGeometry::bounded() const { return std::isfinite(bounding_radius()); }

double SetGeometry::bounding_radius() const
{
    const double inf = std::numeric_limits<double>::infinity();
    const auto& p = params();
    switch (shape()) {
    case Shape::ball: return Vec2(p[0], p[1]).norm() + p[2];
    case Shape::annulus: return Vec2(p[0], p[1]).norm() + p[3];
    case Shape::empty: return 0.0;
    case Shape::set_union:
        return std::max(children()[0].bounding_radius(), children()[1].bounding_radius());
    case Shape::set_intersection:
        return std::min(children()[0].bounding_radius(), children()[1].bounding_radius());
    case Shape::transformed: {
        double r = children()[0].bounding_radius();
        return std::isfinite(r) ? r + isometry().t.norm() : inf;
    }
    default: return inf;
    }
}

IndicatorValue SetGeometry::indicator(const Vec2& x) const
{
    const auto& atoms = node_->table.atoms();
    std::vector<char> s(atoms.size());
    int near[8];
    int n_near = 0;
    const double tol = 1e-12 * (1.0 + x.norm());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double m = atoms[i].margin(x);
        s[i] = m < 0 ? 1 : 0;
        if (std::abs(m) <= tol) {
            if (n_near == 8) return {Side::boundary};
            near[n_near++] = static_cast<int>(i);
        }
    }
    const Formula& f = node_->formula;
    if (n_near == 0) return {f.eval(s) ? Side::inside : Side::outside};
    bool first = false;
    for (int combo = 0; combo < (1 << n_near); ++combo) {
        for (int j = 0; j < n_near; ++j) s[near[j]] = (combo >> j) & 1;
        bool v = f.eval(s);
        if (combo == 0)
            first = v;
        else if (v != first)
            return {Side::boundary};
    }
    return {first ? Side::inside : Side::outside};
}

std::string SetGeometry::describe() const
{
    std::ostringstream os;
    static const char* names[] = {"half_space", "ball", "annulus", "cone_sector", "pie_glued",
                                  "corner_pair", "complement", "lawson_cone", "union",
                                  "intersection", "transformed", "empty"};
    os << names[static_cast<int>(shape())] << "(";
    for (std::size_t i = 0; i < params().size(); ++i) os << (i ? "," : "") << params()[i];
    for (const auto& k : children()) os << (params().empty() ? "" : ";") << k.describe();
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain Domain::ball(const Vec2& center, double radius, double tube)
{
    Domain d;
    d.kind_ = Kind::ball;
    d.set_ = SetGeometry::ball(center, radius);
    d.center_ = center;
    d.radius_ = radius;
    require(tube > 0 && tube < radius, ErrorKind::config, "tubular radius must lie in (0, R)");
    d.tube_ = tube;
    return d;
}

Domain Domain::half_space(const Vec2& normal, double offset, double tube)
{
    Domain d;
    d.kind_ = Kind::half_space;
    double len = normal.norm();
    require(len > 0 && tube > 0, ErrorKind::config, "half-space domain needs a nonzero normal");
    d.normal_ = normal / len;
    d.offset_ = offset / len;
    d.set_ = SetGeometry::half_space(d.normal_, d.offset_);
    d.tube_ = tube;
    return d;
}

double Domain::signed_distance(const Vec2& x) const
{
    return kind_ == Kind::ball ? (x - center_).norm() - radius_ : normal_.dot(x) - offset_;
}

Vec2 Domain::project(const Vec2& x) const
{
    require(std::abs(signed_distance(x)) <= tube_, ErrorKind::domain,
            "point outside the tubular neighbourhood of the domain boundary");
    if (kind_ == Kind::half_space) return x - signed_distance(x) * normal_;
    Vec2 d = x - center_;
    return center_ + radius_ * d / d.norm();
}

Vec2 Domain::outward_normal(const Vec2& x) const
{
    if (kind_ == Kind::half_space) return normal_;
    Vec2 d = x - center_;
    return d / d.norm();
}

double Domain::volume() const
{
    require(bounded(), ErrorKind::unsupported, "unbounded domain has infinite volume");
    return pi * radius_ * radius_;
}

// ---------------------------------------------------------------------------
// Boundary pieces and sampling
// ---------------------------------------------------------------------------

bool Window::contains(const Vec2& x) const
{
    double d = (x - center).norm();
    double tol = 1e-12 * (1.0 + r_out);
    return (r_in == 0 || d > r_in + tol) && d < r_out - tol;
}

Vec2 BoundaryPiece::point(double p) const
{
    return kind == Kind::segment ? Vec2(origin + p * dir) : Vec2(origin + radius * unit_dir(p));
}

Vec2 BoundaryPiece::tangent(double p) const
{
    return kind == Kind::segment ? dir : Vec2(perp(unit_dir(p)));
}

Vec2 BoundaryPiece::normal(double p) const
{
    // dir = perp(n) for a half-plane atom {n.x < b}, so its outward n is -perp(dir).
    Vec2 out = kind == Kind::segment ? Vec2(-perp(dir)) : unit_dir(p);
    return orient * out;
}

namespace {

struct Split {
    double p;
    bool from_e;
};

// Parameters where curve `a` meets curve `b`.
void curve_params(const Atom& a, const Atom& b, std::vector<double>& out)
{
    std::vector<Vec2> pts;
    curve_intersections(a, b, pts);
    for (const auto& q : pts) {
        if (a.kind == Atom::Kind::half_plane) {
            out.push_back(perp(a.n).dot(q - a.n * a.b));
        } else {
            Vec2 d = q - a.c;
            out.push_back(std::atan2(d.y(), d.x()));
        }
    }
}

}  // namespace

std::vector<BoundaryPiece> boundary_pieces(const SetGeometry& e, const Window& window, bool trim_corners)
{
    AtomTable table;
    Formula f = e.compile(table);
    const int n_e = table.size();
    {
        Atom w;
        w.kind = Atom::Kind::disk;
        w.c = window.center;
        w.r = window.r_out;
        table.add(w);
        if (window.r_in > 0) {
            w.r = window.r_in;
            table.add(w);
        }
    }
    const auto& atoms = table.atoms();
    std::vector<BoundaryPiece> pieces;

    for (int i = 0; i < n_e; ++i) {
        const Atom& a = atoms[i];
        const bool line = a.kind == Atom::Kind::half_plane;
        std::vector<Split> splits;
        for (int j = 0; j < table.size(); ++j) {
            if (j == i) continue;
            std::vector<double> ps;
            curve_params(a, atoms[j], ps);
            for (double p : ps) splits.push_back({p, j < n_e});
        }
        double lo, hi;
        Vec2 foot = a.n * a.b, tau = perp(a.n);
        if (line) {
            Vec2 d = foot - window.center;
            double p = tau.dot(d), q = d.squaredNorm() - window.r_out * window.r_out;
            double disc = p * p - q;
            if (disc <= 0) continue;
            lo = -p - std::sqrt(disc);
            hi = -p + std::sqrt(disc);
        } else {
            std::sort(splits.begin(), splits.end(), [](const Split& x, const Split& y) { return x.p < y.p; });
            lo = splits.empty() ? -pi : splits.front().p;
            hi = lo + 2 * pi;
            for (auto& sp : splits)
                if (sp.p < lo) sp.p += 2 * pi;
        }
        std::vector<Split> cuts{{lo, false}};
        for (const auto& sp : splits)
            if (sp.p > lo && sp.p < hi) cuts.push_back(sp);
        cuts.push_back({hi, false});
        if (!line && !splits.empty()) cuts.front().from_e = splits.front().from_e, cuts.back().from_e = splits.front().from_e;
        std::sort(cuts.begin(), cuts.end(), [](const Split& x, const Split& y) { return x.p < y.p; });

        auto point_at = [&](double p) -> Vec2 { return line ? Vec2(foot + p * tau) : Vec2(a.c + a.r * unit_dir(p)); };

        struct Elem {
            double p0, p1;
            bool e0, e1;
            double orient;
        };
        std::vector<Elem> elems;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double p0 = cuts[k].p, p1 = cuts[k + 1].p;
            if (!(p1 - p0 > 1e-14 * (1.0 + std::abs(p0)))) continue;
            Vec2 mid = point_at(0.5 * (p0 + p1));
            if (!window.contains(mid)) continue;
            std::vector<char> s = table.states(mid);
            s[i] = 1;
            bool in = f.eval(s);
            s[i] = 0;
            bool out = f.eval(s);
            if (in == out) continue;
            elems.push_back({p0, p1, cuts[k].from_e, cuts[k + 1].from_e, in ? 1.0 : -1.0});
        }
        // Merge contiguous elements with equal orientation (smooth continuation).
        std::vector<Elem> merged;
        for (const auto& el : elems) {
            if (!merged.empty() && merged.back().p1 == el.p0 && merged.back().orient == el.orient) {
                merged.back().p1 = el.p1;
                merged.back().e1 = el.e1;
            } else {
                merged.push_back(el);
            }
        }
        if (!line && merged.size() > 1 && merged.front().p0 == lo && merged.back().p1 == hi
            && merged.front().orient == merged.back().orient) {
            merged.front().p0 = merged.back().p0 - 2 * pi;
            merged.front().e0 = merged.back().e0;
            merged.pop_back();
        }
        if (!line && merged.size() == 1 && merged.front().p0 == lo && merged.front().p1 == hi) {
            merged.front().e0 = merged.front().e1 = false;  // full closed curve
        }
        for (const auto& el : merged) {
            BoundaryPiece bp;
            bp.kind = line ? BoundaryPiece::Kind::segment : BoundaryPiece::Kind::arc;
            bp.origin = line ? foot : a.c;
            bp.dir = tau;
            bp.radius = line ? 0.0 : a.r;
            double trim = trim_corners ? corner_hole / bp.speed() : 0.0;
            bp.p0 = el.e0 ? el.p0 + trim : el.p0;
            bp.p1 = el.e1 ? el.p1 - trim : el.p1;
            if (!(bp.p1 > bp.p0)) continue;
            bp.orient = el.orient;
            bp.atom = i;
            bp.patch = static_cast<int>(pieces.size());
            pieces.push_back(bp);
        }
    }
    return pieces;
}

std::vector<SurfaceSample> sample_piece(const BoundaryPiece& piece, double resolution, int nodes_per_panel)
{
    require(resolution > 0, ErrorKind::config, "sampling resolution must be positive");
    std::vector<SurfaceSample> out;
    int panels = std::max(1, static_cast<int>(std::ceil(piece.length() / resolution)));
    const GaussRule& g = gauss_legendre(nodes_per_panel);
    double step = (piece.p1 - piece.p0) / panels;
    for (int k = 0; k < panels; ++k) {
        double a = piece.p0 + k * step, half = 0.5 * step;
        for (int i = 0; i < g.size(); ++i) {
            double p = a + half * (1.0 + g.node(i));
            out.push_back({piece.point(p), piece.normal(p), g.weight(i) * half * piece.speed(), piece.patch});
        }
    }
    return out;
}

std::vector<SurfaceSample> boundary_sample(const SetGeometry& e, const Window& window, double resolution,
                                           int nodes_per_panel)
{
    std::vector<SurfaceSample> out;
    for (const auto& piece : boundary_pieces(e, window)) {
        auto s = sample_piece(piece, resolution, nodes_per_panel);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::optional<Vec2> boundary_normal(const SetGeometry& e, const Vec2& x, double tol)
{
    AtomTable table;
    Formula f = e.compile(table);
    std::vector<char> s = table.states(x);
    std::optional<Vec2> found;
    int count = 0;
    for (int i = 0; i < table.size(); ++i) {
        const Atom& a = table.atoms()[i];
        if (std::abs(a.margin(x)) > tol) continue;
        char keep = s[i];
        s[i] = 1;
        bool in = f.eval(s);
        s[i] = 0;
        bool out = f.eval(s);
        s[i] = keep;
        if (in == out) continue;
        ++count;
        found = (in ? 1.0 : -1.0) * a.outward(x);
    }
    if (count != 1) return std::nullopt;
    return found;
}

Transversality transversality_angle(const SetGeometry& e, const Domain& omega, const Vec2& x)
{
    require(std::abs(omega.signed_distance(x)) <= 1e-9, ErrorKind::domain,
            "transversality point is not on the domain boundary");
    auto ne = boundary_normal(e, x, 1e-9);
    require(ne.has_value(), ErrorKind::domain, "transversality point is not a regular point of dE");
    Vec2 no = omega.outward_normal(x);
    double dot = std::clamp(no.dot(*ne), -1.0, 1.0);
    Transversality t;
    t.margin = 1.0 - std::abs(dot);
    require(t.margin >= 1e-6, ErrorKind::degenerate, "tangential contact between dE and dOmega");
    t.psi = pi / 2 - std::asin(dot);
    return t;
}

std::vector<Vec2> contact_points(const SetGeometry& e, const Domain& omega)
{
    double far = omega.bounded() ? 4.0 * (omega.center().norm() + omega.radius()) + 10.0 : 1e4;
    std::vector<Vec2> out;
    Atom dom;
    if (omega.kind() == Domain::Kind::ball) {
        dom.kind = Atom::Kind::disk;
        dom.c = omega.center();
        dom.r = omega.radius();
    } else {
        dom.kind = Atom::Kind::half_plane;
        dom.n = omega.normal();
        dom.b = omega.offset();
    }
    AtomTable table;
    e.compile(table);
    for (const auto& piece : boundary_pieces(e, Window::ball(Vec2::Zero(), far))) {
        const Atom& a = table.atoms()[piece.atom];
        if (a.same_curve(dom)) continue;
        std::vector<Vec2> pts;
        curve_intersections(a, dom, pts);
        for (const auto& q : pts) {
            double p;
            if (piece.kind == BoundaryPiece::Kind::segment) {
                p = piece.dir.dot(q - piece.origin);
            } else {
                Vec2 d = q - piece.origin;
                p = std::atan2(d.y(), d.x());
                while (p < piece.p0) p += 2 * pi;
                while (p > piece.p1 + 1e-12) p -= 2 * pi;
            }
            if (p < piece.p0 - 1e-12 || p > piece.p1 + 1e-12) continue;
            bool dup = false;
            for (const auto& o : out) dup = dup || (o - q).norm() < 1e-12;
            if (!dup) out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    return out;
}

// ---------------------------------------------------------------------------
// Volumes
// ---------------------------------------------------------------------------

namespace {

// Area of B_R(c) n {n.x < b}.
double segment_area(const Vec2& c, double R, const Vec2& n, double b)
{
    double h = (b - n.dot(c)) / n.norm();  // signed distance from center to the line, inside side positive
    if (h >= R) return pi * R * R;
    if (h <= -R) return 0.0;
    double cap = R * R * std::acos(h / R) - h * std::sqrt(R * R - h * h);  // area beyond the line
    return pi * R * R - cap;
}

// Area of B_r1(c1) n B_r2(c2).
double lens_area(const Vec2& c1, double r1, const Vec2& c2, double r2)
{
    double d = (c1 - c2).norm();
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) return pi * std::min(r1, r2) * std::min(r1, r2);
    double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
    double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
    return r1 * r1 * (a1 - std::sin(2 * a1) / 2) + r2 * r2 * (a2 - std::sin(2 * a2) / 2);
}

}  // namespace

double lawson_fraction(int n, int m, double alpha)
{
    double phi = std::atan(alpha);  // opening measured from the y-axis block
    if (n == 1 && m == 1) return 2.0 * phi / pi;
    if (n == 2 && m == 1) return 1.0 - std::cos(phi);
    if (n == 1 && m == 2) return std::sin(phi) == 0 ? 0.0 : 1.0 / std::sqrt(1.0 + 1.0 / (alpha * alpha));
    fail(ErrorKind::unsupported, "Lawson cone volume implemented for n + m <= 3");
}

namespace {

std::optional<double> closed_form_area(const SetGeometry& e, const Vec2& c, double R)
{
    const auto& p = e.params();
    switch (e.shape()) {
    case Shape::half_space: return segment_area(c, R, Vec2(p[0], p[1]), p[2]);
    case Shape::ball: return lens_area(c, R, Vec2(p[0], p[1]), p[2]);
    case Shape::annulus:
        return lens_area(c, R, Vec2(p[0], p[1]), p[3]) - lens_area(c, R, Vec2(p[0], p[1]), p[2]);
    case Shape::cone_sector:
        if (c == Vec2::Zero()) return 0.5 * pi * R * R;
        return std::nullopt;
    case Shape::lawson_cone:
        if (c == Vec2::Zero()) return lawson_fraction(1, 1, p[2]) * pi * R * R;
        return std::nullopt;
    case Shape::complement: {
        auto inner = closed_form_area(e.children()[0], c, R);
        if (inner) return pi * R * R - *inner;
        return std::nullopt;
    }
    case Shape::empty: return 0.0;
    default: return std::nullopt;
    }
}

}  // namespace

VolumeResult volume_in(const SetGeometry& e, const Domain& omega)
{
    require(omega.bounded(), ErrorKind::unsupported, "volume_in needs a bounded domain");
    if (e.shape() == Shape::lawson_cone && !e.planar()) {
        int n = static_cast<int>(e.params()[0]), m = static_cast<int>(e.params()[1]);
        require(omega.center() == Vec2::Zero(), ErrorKind::unsupported,
                "Lawson cone volume needs a ball centered at the apex");
        double frac = lawson_fraction(n, m, e.params()[2]);
        return {frac * ball_volume(n + m) * std::pow(omega.radius(), n + m), 0.0, "closed-form"};
    }
    if (auto v = closed_form_area(e, omega.center(), omega.radius())) return {*v, 0.0, "closed-form"};

    // Polar quadrature about the domain center: exact radial segments, adaptive angles.
    RayProgram prog({e, omega.set()});
    prog.set_origin(omega.center());
    std::vector<double> cuts = prog.critical_angles();
    cuts.push_back(0.0);
    cuts.push_back(2 * pi);
    std::sort(cuts.begin(), cuts.end());
    RaySegments seg;
    auto area_along = [&](double theta) {
        prog.cast(unit_dir(theta), false, seg);
        double acc = 0;
        for (std::size_t i = 0; i < seg.mask.size(); ++i) {
            if (seg.mask[i] != 3u) continue;
            if (i + 1 >= seg.t.size()) fail(ErrorKind::domain, "unbounded segment inside bounded domain");
            acc += 0.5 * (seg.t[i + 1] * seg.t[i + 1] - seg.t[i] * seg.t[i]);
        }
        return acc;
    };
    VolumeResult out{0.0, 0.0, "adaptive"};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (!(cuts[k + 1] > cuts[k] + 1e-15)) continue;
        auto r = gauss_kronrod(area_along, cuts[k], cuts[k + 1], 1e-12, 1e-14, 40);
        out.value += r.value;
        out.error += r.error;
    }
    return out;
}

}  // namespace fracmin
