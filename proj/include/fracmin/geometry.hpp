#pragma once

#include "fracmin/core.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fracmin {

// ---------------------------------------------------------------------------
// Atoms and formulas
// ---------------------------------------------------------------------------

//! Elementary region: open half-plane {n.x < b} or open disk {|x-c| < r}.
struct Atom {
    enum class Kind { half_plane, disk };
    Kind kind = Kind::half_plane;
    Vec2 n = Vec2::UnitY();  // unit normal (half-plane)
    double b = 0;
    Vec2 c = Vec2::Zero();   // center (disk)
    double r = 1;

    //! Negative inside, positive outside, zero on the boundary curve.
    double margin(const Vec2& x) const;
    //! Outward unit normal of the atom at a point of its boundary curve.
    Vec2 outward(const Vec2& x) const;
    bool same_curve(const Atom& o) const;
};

struct Isometry {
    Mat2 R = Mat2::Identity();
    Vec2 t = Vec2::Zero();
    Vec2 operator()(const Vec2& x) const { return R * x + t; }
    Isometry inverse() const { return {R.transpose(), -(R.transpose() * t)}; }
    static Isometry rotation_about_origin(double angle) { return {fracmin::rotation(angle), Vec2::Zero()}; }
};

//! Boolean expression over a table of atoms, stored in topological order.
struct Formula {
    enum class Op { atom, negate, both, either, constant };
    struct Node {
        Op op;
        int a = -1, b = -1;
        bool value = false;
    };
    std::vector<Node> nodes;

    bool eval(const std::vector<char>& atom_state) const;
    int atom_count_hint() const;
};

// ---------------------------------------------------------------------------
// SetGeometry
// ---------------------------------------------------------------------------

enum class Shape {
    half_space,
    ball,
    annulus,
    cone_sector,
    pie_glued,
    corner_pair,
    complement,
    lawson_cone,
    set_union,
    set_intersection,
    transformed,
    empty
};

enum class Side { inside, outside, boundary };

struct IndicatorValue {
    Side side;
    //! +1 inside, -1 outside, 0 on the boundary (the boundary flag).
    int value() const { return side == Side::inside ? 1 : (side == Side::outside ? -1 : 0); }
    bool on_boundary() const { return side == Side::boundary; }
};

class AtomTable;

//! Planar region with an exact indicator and closed-form boundary curves.
class SetGeometry {
public:
    static SetGeometry half_space(const Vec2& normal, double offset);
    static SetGeometry ball(const Vec2& center, double radius);
    static SetGeometry annulus(const Vec2& center, double r_in, double r_out);
    //! Union of the k sectors 2j pi/k < theta < (2j+1) pi/k.
    static SetGeometry cone_sector(int k);
    //! (inner n B_R) u (inner^c n B_R^c), B_R centered at the origin.
    static SetGeometry pie_glued(const SetGeometry& inner, double radius);
    //! {x1 >= 0, w1.x < 0} u {x1 <= 0, w2.x < 0}, w_i = (-sin t_i, cos t_i).
    static SetGeometry corner_pair(double theta1, double theta2);
    //! {|x| < alpha |y|} in R^n x R^m; only n = m = 1 has a planar indicator.
    static SetGeometry lawson_cone(int n, int m, double alpha);
    static SetGeometry complement(const SetGeometry& e);
    static SetGeometry unite(const SetGeometry& a, const SetGeometry& b);
    static SetGeometry intersect(const SetGeometry& a, const SetGeometry& b);
    static SetGeometry transformed(const SetGeometry& e, const Isometry& g);
    static SetGeometry empty();

    Shape shape() const;
    const std::vector<double>& params() const;
    const std::vector<SetGeometry>& children() const;
    const Isometry& isometry() const;
    std::vector<std::string> symmetry_tags() const;
    //! Does the bounded part of the plane contain the whole set?
    bool bounded() const;
    //! Radius of a ball about the origin containing the set (inf if unbounded).
    double bounding_radius() const;
    bool planar() const;

    IndicatorValue indicator(const Vec2& x) const;

    //! Append this set's atoms to the table and return its formula.
    Formula compile(AtomTable& table) const;

    std::string describe() const;

    struct Node;

private:
    friend struct GeometryAccess;
    explicit SetGeometry(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

SetGeometry operator!(const SetGeometry& e);

//! Deduplicating atom table; half-planes are stored in a canonical
//! orientation and formulas refer to them with an explicit negation.
class AtomTable {
public:
    //! Returns the atom id and whether the stored orientation is flipped
    //! relative to the requested one.
    std::pair<int, bool> add(const Atom& atom);
    const std::vector<Atom>& atoms() const { return atoms_; }
    int size() const { return static_cast<int>(atoms_.size()); }
    //! Atom states (inside = 1) at a point not on any atom boundary.
    std::vector<char> states(const Vec2& x) const;
    //! Points where two atom boundary curves meet.
    std::vector<Vec2> vertices() const;

private:
    std::vector<Atom> atoms_;
};

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

class Domain {
public:
    enum class Kind { ball, half_space };
    static Domain ball(const Vec2& center, double radius, double tube = 0.25);
    //! Omega = {normal.x < offset}.
    static Domain half_space(const Vec2& normal, double offset, double tube = 1.0);

    Kind kind() const { return kind_; }
    const SetGeometry& set() const { return set_; }
    bool bounded() const { return kind_ == Kind::ball; }
    Vec2 center() const { return center_; }
    double radius() const { return radius_; }
    Vec2 normal() const { return normal_; }
    double offset() const { return offset_; }
    double tube() const { return tube_; }

    //! Signed distance to the boundary, negative inside.
    double signed_distance(const Vec2& x) const;
    //! Nearest point on the boundary; requires |signed_distance| <= tube.
    Vec2 project(const Vec2& x) const;
    //! Outward unit normal of Omega at (or nearest to) x.
    Vec2 outward_normal(const Vec2& x) const;
    double volume() const;

private:
    Kind kind_ = Kind::ball;
    SetGeometry set_ = SetGeometry::ball(Vec2::Zero(), 1.0);
    Vec2 center_ = Vec2::Zero();
    double radius_ = 1;
    Vec2 normal_ = Vec2::UnitX();
    double offset_ = 0;
    double tube_ = 0.25;
};

// ---------------------------------------------------------------------------
// Boundary curves and samples
// ---------------------------------------------------------------------------

//! Smooth piece of a boundary curve: a segment or a circular arc,
//! parametrized by arclength (segment) or angle (arc).
struct BoundaryPiece {
    enum class Kind { segment, arc };
    Kind kind = Kind::segment;
    Vec2 origin = Vec2::Zero();   // segment base point, or arc center
    Vec2 dir = Vec2::UnitX();     // segment unit direction
    double radius = 0;            // arc radius
    double p0 = 0, p1 = 0;        // parameter range
    double orient = 1;            // +1 if E's outward normal is the atom's outward normal
    int atom = -1;
    int patch = -1;

    Vec2 point(double p) const;
    Vec2 tangent(double p) const;  // unit, increasing p
    Vec2 normal(double p) const;   // outward for E
    double speed() const { return kind == Kind::segment ? 1.0 : radius; }
    double length() const { return (p1 - p0) * speed(); }
};

struct SurfaceSample {
    Vec2 point;
    Vec2 normal;
    double weight;
    int patch;
};

//! Window for boundary sampling: the annulus r_in < |x - center| < r_out
//! (r_in = 0 gives a ball).
struct Window {
    Vec2 center = Vec2::Zero();
    double r_in = 0;
    double r_out = 1;
    static Window ball(const Vec2& c, double r) { return {c, 0.0, r}; }
    static Window annulus(const Vec2& c, double a, double b) { return {c, a, b}; }
    bool contains(const Vec2& x) const;
};

inline constexpr double corner_hole = 1e-8;

//! Smooth boundary pieces of E inside the window; pieces ending at a corner
//! of E stop corner_hole short of it unless trim_corners is false.
std::vector<BoundaryPiece> boundary_pieces(const SetGeometry& e, const Window& window, bool trim_corners = true);

//! Composite Gauss nodes on the boundary pieces, panel length <= resolution.
std::vector<SurfaceSample> boundary_sample(const SetGeometry& e, const Window& window,
                                           double resolution, int nodes_per_panel = 6);

std::vector<SurfaceSample> sample_piece(const BoundaryPiece& piece, double resolution,
                                        int nodes_per_panel = 6);

//! Outward unit normal of E at a regular boundary point.
std::optional<Vec2> boundary_normal(const SetGeometry& e, const Vec2& x, double tol = 1e-9);

struct Transversality {
    double psi;     // angle between the tangent lines, pi/2 for orthogonal crossing
    double margin;  // 1 - |nu_Omega . nu_E|
};

Transversality transversality_angle(const SetGeometry& e, const Domain& omega, const Vec2& x);

//! Points of dE n dOmega (dE restricted to genuine boundary pieces).
std::vector<Vec2> contact_points(const SetGeometry& e, const Domain& omega);

struct VolumeResult {
    double value = 0;
    double error = 0;
    std::string method;
};

//! Volume fraction of {|x| < alpha |y|} in a centered ball of R^{n+m},
//! n + m <= 3.
double lawson_fraction(int n, int m, double alpha);

//! |E n Omega| for bounded Omega.
VolumeResult volume_in(const SetGeometry& e, const Domain& omega);

}  // namespace fracmin
