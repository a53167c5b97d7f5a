#pragma once

// Tangent vector fields, their flows, and the two sides of the first
// variation identity: a finite difference of Per_s(E_t; Omega) against the
// boundary integrals of H over dE n Omega and of the free-boundary defect A
// over dE outside Omega.

#include "fracmin/curvature.hpp"
#include "fracmin/perimeter.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace fracmin {

// ---------------------------------------------------------------------------
// Tangent fields
// ---------------------------------------------------------------------------

//! One term of a tangent field X = amplitude * phi(x) * V(x), where phi is a
//! smooth scalar profile and V depends on the kind and the domain:
//!
//!   ball B_R(c):         rotation       V = J (x - c)
//!                        interior_bump  V = (R^2 - |x - c|^2) b
//!   half-space n.x < d:  shear          V = perp(n)
//!                        interior_bump  V = (d - n.x) b
//!
//! phi is the product of a radial cutoff about the domain center (1 up to
//! cutoff_inner, 0 beyond cutoff_outer) and, when bump_center is set, the
//! bump exp(1 - 1/(1 - |x - p|^2 / rho^2)).
struct FieldSpec {
    enum class Kind { rotation, interior_bump, shear };
    Kind kind = Kind::rotation;
    double amplitude = 1;
    Vec2 direction = Vec2::UnitX();
    double cutoff_inner = std::numeric_limits<double>::infinity();
    double cutoff_outer = std::numeric_limits<double>::infinity();
    std::optional<Vec2> bump_center;
    double bump_radius = 0.5;
};

const char* to_string(FieldSpec::Kind k) noexcept;

//! C^infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

class TangentField {
public:
    Vec2 operator()(const Vec2& x) const;
    //! Every term vanishes outside B_support(0).
    double support_radius() const { return support_; }
    //! max |X|, taken on a fine grid over the support.
    double max_norm() const { return max_norm_; }
    const Domain& domain() const { return domain_; }
    const std::vector<FieldSpec>& terms() const { return terms_; }

    //! Largest |X . nu_Omega| found on the tangency sample.
    double tangency_defect() const { return tangency_defect_; }

private:
    friend TangentField make_tangent_field(const std::vector<FieldSpec>&, const Domain&);
    Vec2 term(const FieldSpec& f, const Vec2& x) const;
    std::vector<FieldSpec> terms_;
    Domain domain_ = Domain::ball(Vec2::Zero(), 1.0);
    double support_ = 0;
    double max_norm_ = 0;
    double tangency_defect_ = 0;
};

//! Builds X and checks X . nu_Omega = 0 on 1024 boundary points to 1e-12.
TangentField make_tangent_field(const std::vector<FieldSpec>& terms, const Domain& omega);

// ---------------------------------------------------------------------------
// Flows
// ---------------------------------------------------------------------------

//! Phi_t for dPhi/dt = X(Phi), by classical Runge-Kutta.
class FlowedSet {
public:
    const SetGeometry& base() const { return base_; }
    const TangentField& field() const { return field_; }
    double time() const { return t_; }
    int steps() const { return steps_; }

    //! Phi_tau(x) with the configured step size.
    Vec2 advance(const Vec2& x, double tau) const;
    Vec2 forward(const Vec2& x) const { return advance(x, t_); }
    Vec2 backward(const Vec2& x) const { return advance(x, -t_); }

    //! Indicator of Phi_t(E): the base indicator at Phi_{-t}(x).
    IndicatorValue indicator(const Vec2& x) const;

    //! Boundary samples of E moved by Phi_t; normals by the inverse
    //! transpose of the finite-difference Jacobian, weights by the
    //! stretch of the tangent.
    std::vector<SurfaceSample> boundary_sample(const Window& window, double resolution) const;

    //! Phi_t as a deformation for the perimeter engine.
    Deformation deformation() const;

    //! Largest endpoint change seen when halving the step at construction.
    double halving_defect() const { return halving_defect_; }

private:
    friend FlowedSet flow(const SetGeometry&, const TangentField&, double, int);
    SetGeometry base_ = SetGeometry::empty();
    TangentField field_;
    double t_ = 0;
    int steps_ = 16;
    double halving_defect_ = 0;
};

//! Requires |t| <= 0.1 support / max|X| and steps >= 16; fails with a
//! convergence error when halving the step moves probe trajectories by
//! more than 1e-8.
FlowedSet flow(const SetGeometry& e, const TangentField& x, double t, int steps = 16);

// ---------------------------------------------------------------------------
// First variation
// ---------------------------------------------------------------------------

struct FdVariation {
    double value = 0;  // Richardson extrapolation of the two central differences
    double error = 0;
    double d_h = 0, d_h2 = 0;
    double h = 0;
    bool flagged = false;  // the two steps disagree beyond max(5e-3 scale, 3 error)
    std::vector<double> perimeters;  // Per at -h, +h, -h/2, +h/2
};

//! Central differences of Per_s(Phi_t(E); Omega) at t = +-h, +-h/2.
FdVariation first_variation_fd(const SetGeometry& e, const Domain& omega, const TangentField& x, const KernelSpec& k,
                               const QuadConfig& cfg, double h = 1e-2);

struct FormulaOptions {
    //! Panel length for the interior surface rule.
    double resolution = 0.05;
    //! Below this arclength from a contact point, sigma^s A is frozen.
    double freeze_distance = 1e-8;
};

struct FormulaVariation {
    IntegralResult interior;  // int over dE n Omega of H X.nu
    IntegralResult exterior;  // int over dE outside Omega of A X.nu
    double total = 0;
    double error = 0;
    int interior_nodes = 0;
    int zero_product_nodes = 0;  // interior nodes skipped because X.nu = 0
    std::vector<Vec2> contacts;
};

//! Right side of the first variation identity for a ball domain. Refuses
//! (hypothesis error) when dE meets dOmega with transversality margin
//! below 1e-3.
FormulaVariation first_variation_formula(const SetGeometry& e, const Domain& omega, const TangentField& x,
                                         const KernelSpec& k, const QuadConfig& cfg,
                                         const FormulaOptions& opt = {});

struct CriticalityReport {
    double max_H = 0;
    Vec2 at_H = Vec2::Zero();
    double max_A = 0;
    Vec2 at_A = Vec2::Zero();
    //! Mean reported error of the H and of the A evaluations.
    double error_H = 0, error_A = 0;
    double tol_H = 0, tol_A = 0;
    int nodes_H = 0, nodes_A = 0;
    bool pass = false;
};

struct CriticalityOptions {
    //! Total node count; pieces are sampled at spacing max(collar, length / budget).
    int node_budget = 200;
    //! Nodes within this distance of dOmega or of a corner of E are skipped.
    double collar = 0.05;
    //! Exterior nodes are taken up to this distance outside dOmega.
    double exterior_reach = 2.0;
    //! Tolerance for both maxima; 0 selects 10 x error_H and 10 x error_A.
    double tol = 0;
};

//! Largest |H| on dE n Omega and |A| on dE outside the closed domain, away
//! from dOmega and from corners.
CriticalityReport criticality_residual(const SetGeometry& e, const Domain& omega, const KernelSpec& k,
                                       const QuadConfig& cfg, const CriticalityOptions& opt = {});

}  // namespace fracmin
