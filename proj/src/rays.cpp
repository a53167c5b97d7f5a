#include "fracmin/rays.hpp"

#include <algorithm>

namespace fracmin {

RayProgram::RayProgram(const std::vector<SetGeometry>& sets)
{
    require(!sets.empty() && sets.size() <= 32, ErrorKind::config, "ray program needs 1..32 sets");
    for (const auto& s : sets) formulas_.push_back(s.compile(table_));
    vertices_ = table_.vertices();
    set_origin(Vec2::Zero());
}

void RayProgram::set_origin(const Vec2& x, double snap_tol)
{
    x_ = x;
    base_state_ = table_.states(x);
    is_snapped_.assign(table_.size(), 0);
    snapped_.clear();
    const double tol = snap_tol * (1.0 + x.norm());
    for (int i = 0; i < table_.size(); ++i) {
        if (std::abs(table_.atoms()[i].margin(x)) <= tol) {
            is_snapped_[i] = 1;
            snapped_.push_back(i);
        }
    }
}

unsigned RayProgram::mask_of(const std::vector<char>& states) const
{
    unsigned m = 0;
    for (std::size_t j = 0; j < formulas_.size(); ++j)
        if (formulas_[j].eval(states)) m |= 1u << j;
    return m;
}

namespace {

// State of a snapped atom just after leaving x in direction u.
char local_state(const Atom& a, const Vec2& x, const Vec2& u, bool reverse)
{
    if (a.kind == Atom::Kind::half_plane) {
        double d = a.n.dot(u);
        if (d == 0) return reverse ? 1 : 0;
        return d < 0 ? 1 : 0;
    }
    return u.dot(x - a.c) < 0 ? 1 : 0;
}

}  // namespace

unsigned RayProgram::start_mask(const Vec2& u, bool reverse) const
{
    std::vector<char> s = base_state_;
    for (int i : snapped_) s[i] = local_state(table_.atoms()[i], x_, u, reverse);
    return mask_of(s);
}

void RayProgram::cast(const Vec2& u, bool reverse, RaySegments& out) const
{
    const auto& atoms = table_.atoms();
    std::vector<char> s = base_state_;
    struct Root {
        double t;
        int atom;
    };
    Root roots[64];
    std::vector<Root> extra;
    int n_roots = 0;
    auto add = [&](double t, int i) {
        if (!(t > 0) || !std::isfinite(t)) return;
        if (n_roots < 64)
            roots[n_roots++] = {t, i};
        else
            extra.push_back({t, i});
    };
    for (int i = 0; i < table_.size(); ++i) {
        const Atom& a = atoms[i];
        if (is_snapped_[i]) {
            s[i] = local_state(a, x_, u, reverse);
            if (a.kind == Atom::Kind::disk) add(-2.0 * u.dot(x_ - a.c), i);
            continue;
        }
        if (a.kind == Atom::Kind::half_plane) {
            double d = a.n.dot(u);
            if (d != 0) add((a.b - a.n.dot(x_)) / d, i);
        } else {
            Vec2 d = x_ - a.c;
            double B = u.dot(d), C = d.squaredNorm() - a.r * a.r;
            double disc = B * B - C;
            if (disc <= 0) continue;
            double q = -(B + std::copysign(std::sqrt(disc), B));
            add(q, i);
            if (q != 0) add(C / q, i);
        }
    }
    std::vector<Root> all(roots, roots + n_roots);
    all.insert(all.end(), extra.begin(), extra.end());
    std::sort(all.begin(), all.end(), [](const Root& a, const Root& b) { return a.t < b.t; });

    out.t.assign(1, 0.0);
    out.mask.assign(1, mask_of(s));
    for (std::size_t k = 0; k < all.size();) {
        double t = all[k].t;
        while (k < all.size() && all[k].t == t) {
            s[all[k].atom] ^= 1;
            ++k;
        }
        unsigned m = mask_of(s);
        if (m != out.mask.back()) {
            out.t.push_back(t);
            out.mask.push_back(m);
        }
    }
}

std::vector<double> RayProgram::critical_angles() const
{
    std::vector<double> a;
    auto push = [&](const Vec2& d) {
        double th = std::atan2(d.y(), d.x());
        if (th < 0) th += 2 * pi;
        if (th >= 2 * pi) th = 0;
        a.push_back(th);
    };
    for (const auto& v : vertices_) {
        Vec2 d = v - x_;
        if (d.norm() > 1e-14 * (1.0 + x_.norm())) push(d);
    }
    for (int i = 0; i < table_.size(); ++i) {
        const Atom& at = table_.atoms()[i];
        if (at.kind == Atom::Kind::half_plane) {
            push(perp(at.n));
            push(-perp(at.n));
            // Nearest-point directions: the ray data peak there for nearby x.
            push(at.n);
            push(-at.n);
            continue;
        }
        Vec2 d = at.c - x_;
        if (is_snapped_[i]) {
            push(perp(d));
            push(-perp(d));
            continue;
        }
        double len = d.norm();
        if (len > 0) {
            push(d);
            push(-d);
        }
        if (len <= at.r) continue;
        double base = std::atan2(d.y(), d.x()), half = std::asin(at.r / len);
        push(unit_dir(base + half));
        push(unit_dir(base - half));
    }
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

}  // namespace fracmin
