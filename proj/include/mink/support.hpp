#ifndef MINK_SUPPORT_HPP_
#define MINK_SUPPORT_HPP_

// Support functions of future-convex domains restricted to the Klein disc:
// envelopes, Gauss-map inversion, curvature, shape operator, cosmological
// levels and boundary limits.
//
// Operations accept either a GridSupportFn evaluated at one of its nodes, or
// any callable u(DiscPoint) together with a finite-difference spacing.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mink/envelope.hpp"
#include "mink/errors.hpp"
#include "mink/grid.hpp"
#include "mink/minkowski.hpp"

namespace mink {

using GridSupportFn = GridFunction;

/// Convex envelope of the boundary data sampled on every defined node of the grid.
inline GridSupportFn convex_envelope(const BoundaryFn& phi, std::shared_ptr<const Grid> grid) {
	const ConvexEnvelope env(phi);
	return GridSupportFn::sample(std::move(grid), env);
}

inline GridSupportFn convex_envelope(const BoundaryFn& phi, const GridSpec& spec) {
	return convex_envelope(phi, std::make_shared<const Grid>(spec));
}

// ---------------------------------------------------------------------------
// 3x3 stencils

/// Values of u at z + h (di, dj) for di, dj in {-1, 0, 1}; v[dj + 1][di + 1].
struct Stencil {
	DiscPoint z;
	double h = 0.0;
	std::array<std::array<double, 3>, 3> v{};

	double operator()(int di, int dj) const { return v[dj + 1][di + 1]; }

	double ux() const { return ((*this)(1, 0) - (*this)(-1, 0)) / (2.0 * h); }
	double uy() const { return ((*this)(0, 1) - (*this)(0, -1)) / (2.0 * h); }
	double uxx() const { return ((*this)(1, 0) + (*this)(-1, 0) - 2.0 * (*this)(0, 0)) / (h * h); }
	double uyy() const { return ((*this)(0, 1) + (*this)(0, -1) - 2.0 * (*this)(0, 0)) / (h * h); }
	double uxy() const {
		return ((*this)(1, 1) + (*this)(-1, -1) - (*this)(-1, 1) - (*this)(1, -1)) / (4.0 * h * h);
	}
	double hessian_det() const {
		const double xy = uxy();
		return uxx() * uyy() - xy * xy;
	}
};

template <class F>
Stencil make_stencil(const F& u, const DiscPoint& z, double h) {
	if (!(h > 0.0)) throw InvalidArgument("stencil spacing must be positive");
	if (std::hypot(std::abs(z.z1) + h, std::abs(z.z2) + h) >= 1.0)
		throw InvalidArgument("stencil leaves the open disc");
	Stencil s{z, h, {}};
	for (int dj = -1; dj <= 1; ++dj)
		for (int di = -1; di <= 1; ++di) s.v[dj + 1][di + 1] = u(DiscPoint{z.z1 + di * h, z.z2 + dj * h});
	return s;
}

inline Stencil make_stencil(const GridSupportFn& u, const DiscPoint& z) {
	const Grid& g = u.grid();
	const auto node = g.node_at(z);
	if (!node) throw InvalidArgument("point is not a grid node");
	const auto [i, j] = *node;
	Stencil s{g.point(i, j), g.h(), {}};
	for (int dj = -1; dj <= 1; ++dj) {
		for (int di = -1; di <= 1; ++di) {
			if (!g.defined(i + di, j + dj))
				throw InvalidArgument("node is adjacent to the ring; one-sided differences would be required");
			s.v[dj + 1][di + 1] = u.at(i + di, j + dj);
		}
	}
	if (g.kind(i, j) != NodeKind::Interior) throw InvalidArgument("node is not interior");
	return s;
}

// ---------------------------------------------------------------------------
// Gauss map inverse and curvature

/// Surface point with future normal over z: (Du(z), <z, Du(z)> - u(z)).
inline MinkVec3 gauss_inverse(const Stencil& s) {
	const double ux = s.ux(), uy = s.uy();
	return {ux, uy, s.z.z1 * ux + s.z.z2 * uy - s(0, 0)};
}

inline MinkVec3 gauss_inverse(const GridSupportFn& u, const DiscPoint& z) {
	return gauss_inverse(make_stencil(u, z));
}

template <class F>
MinkVec3 gauss_inverse(const F& u, const DiscPoint& z, double h) {
	return gauss_inverse(make_stencil(u, z, h));
}

/// Gauss curvature -1 / ((1 - |z|^2)^2 det D^2 u).
inline double curvature(const Stencil& s) {
	const double det = s.hessian_det();
	if (!(det > 0.0)) throw DegeneracyError("curvature: Hessian determinant is not positive");
	const double w = 1.0 - s.z.norm_sq();
	return -1.0 / (w * w * det);
}

inline double curvature(const GridSupportFn& u, const DiscPoint& z) { return curvature(make_stencil(u, z)); }

template <class F>
double curvature(const F& u, const DiscPoint& z, double h) {
	return curvature(make_stencil(u, z, h));
}

// ---------------------------------------------------------------------------
// Shape operator

/// Eigenvalues of B^{-1} = Hess ubar - ubar I, sorted ascending.
struct ShapeInverse {
	double lambda_min = 0.0;
	double lambda_max = 0.0;

	bool convex() const { return lambda_min > 0.0; }
	double product() const { return lambda_min * lambda_max; }
};

namespace detail {

inline ShapeInverse symmetric_eigen(double a, double b, double c) {
	// [[a, b], [b, c]]
	const double m = 0.5 * (a + c);
	const double r = std::hypot(0.5 * (a - c), b);
	return {m - r, m + r};
}

/// Orthonormal tangent frame of H^2 at x.
inline std::pair<MinkVec3, MinkVec3> tangent_frame(const MinkVec3& x) {
	// project whichever horizontal axis is less aligned with x
	const MinkVec3 axis = std::abs(x.x1) <= std::abs(x.x2) ? MinkVec3{1, 0, 0} : MinkVec3{0, 1, 0};
	MinkVec3 e1 = axis + x * inner(axis, x);
	e1 = e1 * (1.0 / spacelike_norm(e1));
	MinkVec3 e2 = cross(x, e1);
	e2 = e2 * (1.0 / spacelike_norm(e2));
	return {e1, e2};
}

}  // namespace detail

/// B^{-1} at x in H^2 for a support function given on H^2, by second
/// differences of ubar along the geodesics through x in directions e1, e2
/// and (e1 +- e2)/sqrt2 of an orthonormal tangent frame.
template <class UBar>
ShapeInverse shape_inverse_eigen_hyperboloid(const UBar& ubar, const MinkVec3& x, double delta = 1e-3) {
	const auto [e1, e2] = detail::tangent_frame(x);
	const double u0 = ubar(x);
	const auto second = [&](const MinkVec3& e) {
		const MinkVec3 fwd = x * std::cosh(delta) + e * std::sinh(delta);
		const MinkVec3 bwd = x * std::cosh(delta) - e * std::sinh(delta);
		return (ubar(fwd) + ubar(bwd) - 2.0 * u0) / (delta * delta);
	};
	const double r = std::numbers::sqrt2 / 2.0;
	const double h11 = second(e1);
	const double h22 = second(e2);
	const double h12 = 0.5 * (second((e1 + e2) * r) - second((e1 - e2) * r));
	return detail::symmetric_eigen(h11 - u0, h12, h22 - u0);
}

/// Disc-chart version: ubar(x) = x3 u(x / x3).
template <class F>
ShapeInverse shape_inverse_eigen(const F& u, const DiscPoint& z, double delta = 1e-3) {
	const auto ubar = [&u](const MinkVec3& x) { return x.x3 * u(DiscPoint{x.x1 / x.x3, x.x2 / x.x3}); };
	return shape_inverse_eigen_hyperboloid(ubar, klein_up(z), delta);
}

/// Grid version: B^{-1} is the Euclidean Hessian of the 1-homogeneous
/// extension U restricted to T_x H^2, i.e. (1/x3) (P e_i)^T D^2u (P e_j) with
/// P(a, b) = a - b z, using the central-difference Hessian of the grid.
inline ShapeInverse shape_inverse_eigen(const GridSupportFn& u, const DiscPoint& z) {
	const Stencil s = make_stencil(u, z);
	const MinkVec3 x = klein_up(s.z);
	const auto [e1, e2] = detail::tangent_frame(x);
	const auto proj = [&](const MinkVec3& e) {
		return std::array<double, 2>{e.x1 - e.x3 * s.z.z1, e.x2 - e.x3 * s.z.z2};
	};
	const auto p1 = proj(e1), p2 = proj(e2);
	const double hxx = s.uxx(), hyy = s.uyy(), hxy = s.uxy();
	const auto form = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
		return (a[0] * hxx * b[0] + a[0] * hxy * b[1] + a[1] * hxy * b[0] + a[1] * hyy * b[1]) / x.x3;
	};
	return detail::symmetric_eigen(form(p1, p1), form(p1, p2), form(p2, p2));
}

// ---------------------------------------------------------------------------
// Cosmological time levels

/// Support function of the level set at cosmological time d: h - d sqrt(1 - |z|^2).
inline GridSupportFn cosmological_level(const GridSupportFn& hfn, double d) {
	if (!(d >= 0.0)) throw InvalidArgument("cosmological level must be non-negative");
	std::vector<double> v = hfn.values();
	const Grid& g = hfn.grid();
	for (std::size_t k = 0; k < v.size(); ++k) {
		if (g.kind(k) == NodeKind::Outside) continue;
		v[k] -= d * std::sqrt(std::max(0.0, 1.0 - g.point(k).norm_sq()));
	}
	return GridSupportFn(hfn.grid_ptr(), std::move(v));
}

// ---------------------------------------------------------------------------
// Radial limits

struct RadialFit {
	double limit = 0.0;  ///< extrapolated value at r = 1
	double gap = 0.0;    ///< disagreement between the 10-sample and 6-sample fits
	double rms = 0.0;    ///< residual of the 10-sample fit
	bool monotone = true;

	/// False when the tail is not monotone; the limit is then a heuristic.
	bool reliable() const { return monotone; }
};

struct RadialSampling {
	double r_inner = 0.0;
	double r_outer = 0.9;
	int count = 20;  ///< samples on [r_inner, r_outer]; the outermost 10 are fitted
};

namespace detail {

/// Least-squares fit of a + b (1 - r) + c sqrt(1 - r^2); returns a.
inline std::pair<double, double> fit_radial_tail(const std::vector<double>& r, const std::vector<double>& u,
												 std::size_t first) {
	const std::size_t m = r.size() - first;
	Eigen::MatrixXd A(m, 3);
	Eigen::VectorXd b(m);
	for (std::size_t k = 0; k < m; ++k) {
		const double rr = r[first + k];
		A(k, 0) = 1.0;
		A(k, 1) = 1.0 - rr;
		A(k, 2) = std::sqrt(std::max(0.0, 1.0 - rr * rr));
		b(k) = u[first + k];
	}
	const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
	const double rms = std::sqrt((A * coef - b).squaredNorm() / static_cast<double>(m));
	return {coef(0), rms};
}

}  // namespace detail

/// Extrapolated boundary value lim_{r -> 1} u(r e^{i theta}) from samples of a radial profile.
template <class Profile>
RadialFit radial_limit(const Profile& profile, const RadialSampling& sampling = {}) {
	if (sampling.count < 10 || !(sampling.r_outer > sampling.r_inner) || !(sampling.r_outer < 1.0))
		throw InvalidArgument("radial sampling needs >= 10 samples on an interval inside [0, 1)");
	std::vector<double> r(sampling.count), u(sampling.count);
	for (int k = 0; k < sampling.count; ++k) {
		r[k] = sampling.r_inner + (sampling.r_outer - sampling.r_inner) * (k + 1) / sampling.count;
		u[k] = profile(r[k]);
	}
	const std::size_t first10 = r.size() - 10, first6 = r.size() - 6;
	RadialFit fit;
	std::tie(fit.limit, fit.rms) = detail::fit_radial_tail(r, u, first10);
	fit.gap = std::abs(fit.limit - detail::fit_radial_tail(r, u, first6).first);
	double scale = 0.0;
	for (std::size_t k = first10; k < u.size(); ++k) scale = std::max(scale, std::abs(u[k]));
	const double slack = 1e-12 * std::max(1.0, scale);
	bool up = true, down = true;
	for (std::size_t k = first10 + 1; k < u.size(); ++k) {
		up = up && u[k] >= u[k - 1] - slack;
		down = down && u[k] <= u[k - 1] + slack;
	}
	fit.monotone = up || down;
	return fit;
}

/// Boundary value of a callable support function along the ray at angle theta.
template <class F>
RadialFit radial_boundary_value(const F& u, double theta, const RadialSampling& sampling) {
	const double c = std::cos(theta), s = std::sin(theta);
	return radial_limit([&](double r) { return u(DiscPoint{r * c, r * s}); }, sampling);
}

/// Grid version: samples by bilinear interpolation on [R/2, R].
inline RadialFit radial_boundary_value(const GridSupportFn& u, double theta) {
	const double R = u.grid().R();
	return radial_boundary_value([&u](const DiscPoint& z) { return u.interpolate(z); }, theta,
								 RadialSampling{0.5 * R, R, 20});
}

// ---------------------------------------------------------------------------
// Graph asymptotics

struct AsymptoticReport {
	double graph_limit = 0.0;    ///< lim (f(r e) - r)
	double support_limit = 0.0;  ///< boundary support value at the same angle
	double gap = 0.0;            ///< |graph_limit + support_limit|
	double fit_rms = 0.0;
	bool pass = false;
};

/// Compares lim_{r -> inf} (f(r e_theta) - r) with -u(e_theta), fitting
/// a + b / r + c / r^2 on samples r in [r0, r1].
template <class Graph>
AsymptoticReport asymptotic_graph_check(const Graph& f, double support_limit, double theta, double r0,
										double r1, double tol = 1e-3, int count = 16) {
	if (!(r0 > 0.0 && r1 > r0) || count < 4) throw InvalidArgument("asymptotic check needs 0 < r0 < r1");
	const double c = std::cos(theta), s = std::sin(theta);
	Eigen::MatrixXd A(count, 3);
	Eigen::VectorXd b(count);
	for (int k = 0; k < count; ++k) {
		const double r = r0 + (r1 - r0) * k / (count - 1);
		A(k, 0) = 1.0;
		A(k, 1) = 1.0 / r;
		A(k, 2) = 1.0 / (r * r);
		b(k) = f(r * c, r * s) - r;
	}
	const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
	AsymptoticReport rep;
	rep.graph_limit = coef(0);
	rep.support_limit = support_limit;
	rep.gap = std::abs(rep.graph_limit + support_limit);
	rep.fit_rms = std::sqrt((A * coef - b).squaredNorm() / count);
	if (!std::isfinite(rep.graph_limit)) throw InvalidArgument("asymptotic fit diverged");
	rep.pass = rep.gap <= tol;
	return rep;
}

template <class Graph>
AsymptoticReport asymptotic_graph_check(const Graph& f, const GridSupportFn& u, double theta, double r0,
										double r1, double tol = 1e-3) {
	return asymptotic_graph_check(f, radial_boundary_value(u, theta).limit, theta, r0, r1, tol);
}

}  // namespace mink

#endif  // MINK_SUPPORT_HPP_
