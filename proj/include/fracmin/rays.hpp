#pragma once

// Exact ray casting against compiled sets. A ray from an origin x meets
// each atom boundary in at most two points, so the membership pattern along
// the ray is a finite list of segments with closed-form endpoints.

#include "fracmin/geometry.hpp"

#include <vector>

namespace fracmin {

struct RaySegments {
    //! Breakpoints t[0] = 0 < t[1] < ... ; segment i is [t[i], t[i+1]) with
    //! t[size] = +inf implied for the last one.
    std::vector<double> t;
    //! Bit j of mask[i] is the value of formula j on segment i.
    std::vector<unsigned> mask;
};

class RayProgram {
public:
    explicit RayProgram(const std::vector<SetGeometry>& sets);

    int formula_count() const { return static_cast<int>(formulas_.size()); }
    const AtomTable& table() const { return table_; }
    const std::vector<Formula>& formulas() const { return formulas_; }

    //! Fix the ray origin. Atoms whose boundary passes within snap_tol of x
    //! are treated as passing exactly through x.
    void set_origin(const Vec2& x, double snap_tol = 1e-11);
    const Vec2& origin() const { return x_; }
    const std::vector<int>& snapped() const { return snapped_; }

    //! Membership pattern along x + t u, t > 0. For snapped atoms the state
    //! just after x comes from the local side of the curve; reverse = true
    //! breaks exact ties the opposite way, so paired rays stay consistent.
    void cast(const Vec2& u, bool reverse, RaySegments& out) const;

    //! Formula values just after x in direction u.
    unsigned start_mask(const Vec2& u, bool reverse) const;

    //! Directions (angles in [0, 2 pi)) where the segment data is not smooth:
    //! rays through vertices, tangents to circles, and line directions.
    std::vector<double> critical_angles() const;

    unsigned mask_of(const std::vector<char>& states) const;

private:
    AtomTable table_;
    std::vector<Formula> formulas_;
    std::vector<Vec2> vertices_;
    Vec2 x_ = Vec2::Zero();
    std::vector<char> base_state_;
    std::vector<char> is_snapped_;
    std::vector<int> snapped_;
};

}  // namespace fracmin
