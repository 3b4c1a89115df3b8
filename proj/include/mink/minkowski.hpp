#ifndef MINK_MINKOWSKI_HPP_
#define MINK_MINKOWSKI_HPP_

// Linear algebra of R^{2,1} with the form x1*y1 + x2*y2 - x3*y3, the Klein
// disc chart of the hyperboloid, and oriented geodesics of H^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "mink/errors.hpp"

namespace mink {

struct MinkVec3 {
	double x1 = 0.0;
	double x2 = 0.0;
	double x3 = 0.0;

	constexpr MinkVec3& operator+=(const MinkVec3& o) {
		x1 += o.x1; x2 += o.x2; x3 += o.x3;
		return *this;
	}
	constexpr MinkVec3& operator-=(const MinkVec3& o) {
		x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
		return *this;
	}
	constexpr MinkVec3& operator*=(double s) {
		x1 *= s; x2 *= s; x3 *= s;
		return *this;
	}
	friend constexpr MinkVec3 operator+(MinkVec3 a, const MinkVec3& b) { return a += b; }
	friend constexpr MinkVec3 operator-(MinkVec3 a, const MinkVec3& b) { return a -= b; }
	friend constexpr MinkVec3 operator*(MinkVec3 a, double s) { return a *= s; }
	friend constexpr MinkVec3 operator*(double s, MinkVec3 a) { return a *= s; }
	friend constexpr MinkVec3 operator-(MinkVec3 a) { return a *= -1.0; }
	friend constexpr bool operator==(const MinkVec3&, const MinkVec3&) = default;
};

inline constexpr double kCausalTol = 1e-12;

enum class Causal { Spacelike, Lightlike, Timelike };

constexpr double inner(const MinkVec3& a, const MinkVec3& b) {
	return a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3;
}

/// Minkowski cross product, fixed by inner(cross(a, b), c) == det[a|b|c].
constexpr MinkVec3 cross(const MinkVec3& a, const MinkVec3& b) {
	return {a.x2 * b.x3 - a.x3 * b.x2,
			a.x3 * b.x1 - a.x1 * b.x3,
			-(a.x1 * b.x2 - a.x2 * b.x1)};
}

constexpr double det3(const MinkVec3& a, const MinkVec3& b, const MinkVec3& c) {
	return a.x1 * (b.x2 * c.x3 - b.x3 * c.x2)
		 - b.x1 * (a.x2 * c.x3 - a.x3 * c.x2)
		 + c.x1 * (a.x2 * b.x3 - a.x3 * b.x2);
}

inline Causal classify(const MinkVec3& v) {
	const double q = inner(v, v);
	if (q > kCausalTol) return Causal::Spacelike;
	if (q < -kCausalTol) return Causal::Timelike;
	return Causal::Lightlike;
}

inline bool is_future_timelike(const MinkVec3& v) {
	return classify(v) == Causal::Timelike && v.x3 > 0.0;
}

/// Lorentzian length of a spacelike vector; 0 for causal vectors.
inline double spacelike_norm(const MinkVec3& v) {
	const double q = inner(v, v);
	return q > 0.0 ? std::sqrt(q) : 0.0;
}

/// Rescales a future timelike vector onto the hyperboloid H^2.
inline MinkVec3 to_hyperboloid(const MinkVec3& x) {
	const double q = inner(x, x);
	if (!(q < 0.0) || x.x3 <= 0.0) throw InvalidArgument("to_hyperboloid: vector is not future timelike");
	return x * (1.0 / std::sqrt(-q));
}

/// Hyperbolic distance between two points of H^2.
inline double hyperbolic_distance(const MinkVec3& x, const MinkVec3& y) {
	return std::acosh(std::max(1.0, -inner(x, y)));
}

// ---------------------------------------------------------------------------
// Isometries (linear part in SO_0(2,1))

using Mat3 = std::array<std::array<double, 3>, 3>;

inline constexpr Mat3 kIdentity3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

constexpr MinkVec3 apply(const Mat3& m, const MinkVec3& v) {
	return {m[0][0] * v.x1 + m[0][1] * v.x2 + m[0][2] * v.x3,
			m[1][0] * v.x1 + m[1][1] * v.x2 + m[1][2] * v.x3,
			m[2][0] * v.x1 + m[2][1] * v.x2 + m[2][2] * v.x3};
}

constexpr Mat3 multiply(const Mat3& a, const Mat3& b) {
	Mat3 r{};
	for (int i = 0; i < 3; ++i)
		for (int j = 0; j < 3; ++j)
			for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
	return r;
}

struct Isometry {
	Mat3 linear = kIdentity3;
	MinkVec3 translation{};

	MinkVec3 operator()(const MinkVec3& x) const { return apply(linear, x) + translation; }

	/// (*this) after `first`.
	Isometry after(const Isometry& first) const {
		return {multiply(linear, first.linear), apply(linear, first.translation) + translation};
	}

	/// Max deviation of linear^T J linear from J, with J = diag(1,1,-1).
	double form_defect() const {
		constexpr double J[3] = {1.0, 1.0, -1.0};
		double worst = 0.0;
		for (int i = 0; i < 3; ++i) {
			for (int j = 0; j < 3; ++j) {
				double s = 0.0;
				for (int k = 0; k < 3; ++k) s += linear[k][i] * J[k] * linear[k][j];
				worst = std::max(worst, std::abs(s - (i == j ? J[i] : 0.0)));
			}
		}
		return worst;
	}

	double determinant() const {
		return det3({linear[0][0], linear[1][0], linear[2][0]},
					{linear[0][1], linear[1][1], linear[2][1]},
					{linear[0][2], linear[1][2], linear[2][2]});
	}

	/// Orientation- and time-orientation-preserving isometry of the form.
	bool is_valid(double tol = 1e-10) const {
		return form_defect() <= tol && std::abs(determinant() - 1.0) <= tol && linear[2][2] > 0.0;
	}
};

// ---------------------------------------------------------------------------
// Klein disc chart

struct DiscPoint {
	double z1 = 0.0;
	double z2 = 0.0;

	double norm() const { return std::hypot(z1, z2); }
	double norm_sq() const { return z1 * z1 + z2 * z2; }
	bool is_boundary() const { return norm() >= 1.0 - 1e-12; }
	bool is_valid() const { return norm() <= 1.0 + 1e-12; }
};

/// Point of H^2 over an interior disc point: (z, 1) / sqrt(1 - |z|^2).
inline MinkVec3 klein_up(const DiscPoint& z) {
	if (!z.is_valid() || z.is_boundary())
		throw InvalidArgument("klein_up: disc point is not interior");
	const double w = 1.0 / std::sqrt(1.0 - z.norm_sq());
	return {z.z1 * w, z.z2 * w, w};
}

/// Radial projection of a future timelike (or future null) vector to the disc.
inline DiscPoint klein_down(const MinkVec3& x) {
	if (!(x.x3 > 0.0) || inner(x, x) > kCausalTol * std::max(1.0, x.x3 * x.x3))
		throw InvalidArgument("klein_down: vector is not future causal");
	return {x.x1 / x.x3, x.x2 / x.x3};
}

// ---------------------------------------------------------------------------
// Ideal boundary and geodesics

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Representative of an angle in [0, 2*pi).
inline double canonical_angle(double theta) {
	double a = std::fmod(theta, kTwoPi);
	if (a < 0.0) a += kTwoPi;
	if (a >= kTwoPi) a = 0.0;
	return a;
}

/// Length of the shorter arc between two angles.
inline double angular_separation(double a, double b) {
	const double d = canonical_angle(a - b);
	return std::min(d, kTwoPi - d);
}

/// Null lift (cos theta, sin theta, 1) of a point of the ideal boundary.
inline MinkVec3 ideal_point(double theta) {
	return {std::cos(theta), std::sin(theta), 1.0};
}

/// Unit counterclockwise tangent of the unit circle at theta, as a vector of R^{2,1}.
inline MinkVec3 boundary_tangent(double theta) {
	return {-std::sin(theta), std::cos(theta), 0.0};
}

/// Side of the chord directed from the first endpoint to the second.
enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

inline constexpr double kMinEndpointSeparation = 1e-9;

/// Geodesic of H^2 given by its ideal endpoints. `positive` names the side of
/// the chord on which the dual vector pairs positively with points.
struct Geodesic {
	double theta1 = 0.0;
	double theta2 = 0.0;
	Side positive = Side::Left;

	static Geodesic make(double a, double b, Side positive = Side::Left) {
		Geodesic g{canonical_angle(a), canonical_angle(b), positive};
		if (!g.is_valid()) throw InvalidArgument("geodesic endpoints coincide");
		return g;
	}

	bool is_valid() const {
		return std::isfinite(theta1) && std::isfinite(theta2) &&
			   angular_separation(theta1, theta2) >= kMinEndpointSeparation;
	}

	Geodesic flipped() const { return {theta1, theta2, opposite(positive)}; }

	bool has_endpoint(double theta, double tol = 1e-12) const {
		return angular_separation(theta, theta1) <= tol || angular_separation(theta, theta2) <= tol;
	}
};

/// Unit spacelike vector orthogonal to both null lifts of the endpoints,
/// pairing positively with points on the `positive` side of the chord.
inline MinkVec3 geodesic_dual(const Geodesic& l) {
	if (!l.is_valid()) throw InvalidArgument("geodesic_dual: degenerate endpoints");
	// cross(p1, p2) pairs positively with the left side of the chord p1 -> p2.
	const MinkVec3 n = cross(ideal_point(l.theta1), ideal_point(l.theta2));
	const double q = inner(n, n);
	if (!(q > 0.0)) throw InvalidArgument("geodesic_dual: degenerate endpoints");
	const double s = (l.positive == Side::Left ? 1.0 : -1.0) / std::sqrt(q);
	return n * s;
}

/// Point of the leaf at signed arclength from the foot of the perpendicular
/// dropped from the disc center.
inline MinkVec3 geodesic_point(const Geodesic& l, double arclength_from_center) {
	const MinkVec3 sigma = geodesic_dual(l);
	const MinkVec3 o{0.0, 0.0, 1.0};
	MinkVec3 foot = o - sigma * inner(o, sigma);  // projection onto sigma^perp
	foot = to_hyperboloid(foot);
	MinkVec3 dir = cross(foot, sigma);
	dir = dir * (1.0 / spacelike_norm(dir));
	return foot * std::cosh(arclength_from_center) + dir * std::sinh(arclength_from_center);
}

inline constexpr double kLeafTol = 1e-12;

/// True iff the geodesic separates x from y. Throws OnLeafError if either
/// point lies within kLeafTol of the leaf.
inline bool separates(const Geodesic& l, const MinkVec3& x, const MinkVec3& y) {
	const MinkVec3 sigma = geodesic_dual(l);
	const double sx = inner(x, sigma);
	const double sy = inner(y, sigma);
	if (std::abs(sx) <= kLeafTol || std::abs(sy) <= kLeafTol)
		throw OnLeafError("separates: point lies on the leaf");
	return (sx > 0.0) != (sy > 0.0);
}

// ---------------------------------------------------------------------------
// Parabolic one-parameter groups

/// Basis with <v0,v0> = <v1,v1> = 0, <v0,v1> = -1, v2 unit spacelike orthogonal to both.
struct NullFrame {
	MinkVec3 v0;
	MinkVec3 v1;
	MinkVec3 v2;

	/// v0 = (1,0,1)/sqrt2, v1 = (-1,0,1)/sqrt2, v2 = (0,1,0); (v0 + v1)/sqrt2 is the time axis.
	static NullFrame standard() {
		const double r = std::numbers::sqrt2 / 2.0;
		return {{r, 0.0, r}, {-r, 0.0, r}, {0.0, 1.0, 0.0}};
	}

	double defect() const {
		double d = 0.0;
		d = std::max(d, std::abs(inner(v0, v0)));
		d = std::max(d, std::abs(inner(v1, v1)));
		d = std::max(d, std::abs(inner(v0, v1) + 1.0));
		d = std::max(d, std::abs(inner(v2, v2) - 1.0));
		d = std::max(d, std::abs(inner(v0, v2)));
		d = std::max(d, std::abs(inner(v1, v2)));
		return d;
	}

	bool is_valid(double tol = 1e-10) const {
		return defect() <= tol && v0.x3 > 0.0 && v1.x3 > 0.0;
	}

	/// Coordinates (c0, c1, c2) of x in this basis.
	std::array<double, 3> coordinates(const MinkVec3& x) const {
		return {-inner(x, v1), -inner(x, v0), inner(x, v2)};
	}
};

/// A_t fixing v0, with A_t(v1) = (t^2/2) v0 + v1 + t v2 and A_t(v2) = v2 + t v0.
inline Isometry parabolic_isometry(double t, const NullFrame& frame) {
	if (!frame.is_valid()) throw InvalidArgument("parabolic_isometry: not a future null frame");
	const MinkVec3 images[3] = {
		frame.v0,
		frame.v0 * (0.5 * t * t) + frame.v1 + frame.v2 * t,
		frame.v2 + frame.v0 * t,
	};
	// A = sum_k image_k (x) dual_k, where the dual basis under the form is (-v1, -v0, v2).
	const MinkVec3 duals[3] = {-frame.v1, -frame.v0, frame.v2};
	constexpr double J[3] = {1.0, 1.0, -1.0};
	Isometry a;
	a.linear = Mat3{};
	const auto comp = [](const MinkVec3& v, int i) { return i == 0 ? v.x1 : (i == 1 ? v.x2 : v.x3); };
	for (int k = 0; k < 3; ++k)
		for (int i = 0; i < 3; ++i)
			for (int j = 0; j < 3; ++j)
				a.linear[i][j] += comp(images[k], i) * comp(duals[k], j) * J[j];
	return a;
}

}  // namespace mink

#endif  // MINK_MINKOWSKI_HPP_
