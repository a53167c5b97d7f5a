#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracmin {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

using Vec2 = Vector2<double>;
using Mat2 = Matrix2<double>;

inline constexpr double pi = std::numbers::pi;

//! Failure categories; each maps to one CLI exit code.
enum class ErrorKind {
    config,          // malformed input or out-of-range parameter
    domain,          // point or argument outside the operation's domain
    singularity,     // kernel evaluated at the origin
    corner,          // curvature requested at a non-smooth boundary point
    classification,  // point on the wrong side of the reference domain
    degenerate,      // tangential contact between boundaries
    hypothesis,      // transversality or other structural assumption fails
    convergence,     // extrapolation, bisection or integrator failed
    bracket,         // no sign change found
    fit,             // too few points for a regression
    unsupported
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

//! CLI exit code: 2 config, 3 numerical convergence, 4 hypothesis violation.
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what)
{
    if (!ok) fail(kind, what);
}

//! Counter-clockwise quarter turn.
template <typename Derived>
auto perp(const Eigen::MatrixBase<Derived>& v)
{
    using S = typename Derived::Scalar;
    return Vector2<S>(-v.y(), v.x());
}

template <typename Scalar>
Vector2<Scalar> unit_dir(Scalar angle)
{
    using std::cos;
    using std::sin;
    return Vector2<Scalar>(cos(angle), sin(angle));
}

template <typename Scalar>
Matrix2<Scalar> rotation(Scalar angle)
{
    using std::cos;
    using std::sin;
    Matrix2<Scalar> r;
    r << cos(angle), -sin(angle), sin(angle), cos(angle);
    return r;
}

template <typename DerivedA, typename DerivedB>
auto cross2(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

}  // namespace fracmin
