#ifndef MINK_LAMINATION_HPP_
#define MINK_LAMINATION_HPP_

// Finite measured geodesic laminations of H^2 and the domains of dependence
// they generate: support functions, boundary points, Thurston-norm lower
// bounds, infinitesimal earthquakes and the Zygmund seminorm of traces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mink/envelope.hpp"
#include "mink/errors.hpp"
#include "mink/minkowski.hpp"

namespace mink {

struct Leaf {
	Geodesic geodesic;
	double weight = 0.0;
};

struct MeasuredLamination {
	std::vector<Leaf> leaves;

	bool empty() const { return leaves.empty(); }
	std::size_t size() const { return leaves.size(); }
	double total_weight() const {
		double s = 0.0;
		for (const auto& l : leaves) s += l.weight;
		return s;
	}
};

namespace detail {

/// theta lies strictly inside the counterclockwise arc from a to b.
inline bool in_open_arc(double theta, double a, double b, double tol = 1e-12) {
	const double span = canonical_angle(b - a);
	const double off = canonical_angle(theta - a);
	return off > tol && off < span - tol;
}

}  // namespace detail

/// Endpoints of two geodesics alternate around the circle (the leaves cross).
inline bool interleaved(const Geodesic& a, const Geodesic& b) {
	if (a.has_endpoint(b.theta1) || a.has_endpoint(b.theta2)) return false;
	return detail::in_open_arc(b.theta1, a.theta1, a.theta2) != detail::in_open_arc(b.theta2, a.theta1, a.theta2);
}

struct LaminationReport {
	std::vector<std::pair<std::size_t, std::size_t>> crossings;
	std::vector<std::size_t> bad_weights;
	std::vector<std::size_t> degenerate;

	bool pass() const { return crossings.empty() && bad_weights.empty() && degenerate.empty(); }
};

inline LaminationReport validate(const MeasuredLamination& mu) {
	LaminationReport rep;
	for (std::size_t i = 0; i < mu.size(); ++i) {
		const Leaf& l = mu.leaves[i];
		if (!(l.weight > 0.0) || !std::isfinite(l.weight)) rep.bad_weights.push_back(i);
		if (!l.geodesic.is_valid()) rep.degenerate.push_back(i);
	}
	for (std::size_t i = 0; i < mu.size(); ++i)
		for (std::size_t j = i + 1; j < mu.size(); ++j)
			if (interleaved(mu.leaves[i].geodesic, mu.leaves[j].geodesic)) rep.crossings.emplace_back(i, j);
	return rep;
}

// ---------------------------------------------------------------------------
// Domains of dependence

/// Mess domain D(mu, x0, y0). Dual vectors are oriented to pair negatively
/// with x0, so <x, sigma_l> > 0 exactly when l separates x from x0.
class DomainOfDependence {
public:
	DomainOfDependence(MeasuredLamination mu, const MinkVec3& x0, const MinkVec3& y0 = {})
		: mu_(std::move(mu)), x0_(x0), y0_(y0) {
		const LaminationReport rep = validate(mu_);
		if (!rep.pass()) throw InvalidArgument("lamination has crossing, degenerate or non-positive leaves");
		if (!is_future_timelike(x0_) || std::abs(inner(x0_, x0_) + 1.0) > 1e-10)
			throw InvalidArgument("base point must lie on the hyperboloid");
		duals_.reserve(mu_.size());
		for (const Leaf& l : mu_.leaves) {
			const MinkVec3 sigma = geodesic_dual(l.geodesic);
			const double s = inner(x0_, sigma);
			if (std::abs(s) <= 1e-10) throw OnLeafError("base point lies on a weighted leaf");
			duals_.push_back(s < 0.0 ? sigma : -sigma);
		}
	}

	const MeasuredLamination& lamination() const { return mu_; }
	const MinkVec3& x0() const { return x0_; }
	const MinkVec3& y0() const { return y0_; }
	/// Outward dual of leaf i as seen from x0.
	const MinkVec3& dual(std::size_t i) const { return duals_[i]; }

	/// Pairings <x, sigma_l>; throws if x lies on a weighted leaf.
	double pairing(std::size_t i, const MinkVec3& x) const {
		const double s = inner(x, duals_[i]);
		if (std::abs(s) <= kLeafTol * std::max(1.0, std::abs(x.x3)))
			throw OnLeafError("point lies on a weighted leaf");
		return s;
	}

private:
	MeasuredLamination mu_;
	MinkVec3 x0_;
	MinkVec3 y0_;
	std::vector<MinkVec3> duals_;
};

namespace detail {

inline void require_future_causal(const MinkVec3& x) {
	if (!(x.x3 > 0.0) || inner(x, x) > 1e-12 * std::max(1.0, x.x3 * x.x3))
		throw InvalidArgument("point is not in the closed future cone");
}

}  // namespace detail

/// H(x) = <x, y0> + sum over leaves separating x0 from x of a_l <x, sigma_l>.
inline double mess_support(const DomainOfDependence& d, const MinkVec3& x) {
	detail::require_future_causal(x);
	double h = inner(x, d.y0());
	const auto& leaves = d.lamination().leaves;
	for (std::size_t i = 0; i < leaves.size(); ++i) {
		const double s = d.pairing(i, x);
		if (s > 0.0) h += leaves[i].weight * s;
	}
	return h;
}

/// y(x) = y0 + sum over leaves separating x0 from x of a_l sigma_l.
inline MinkVec3 mess_boundary_point(const DomainOfDependence& d, const MinkVec3& x) {
	detail::require_future_causal(x);
	MinkVec3 y = d.y0();
	const auto& leaves = d.lamination().leaves;
	for (std::size_t i = 0; i < leaves.size(); ++i)
		if (d.pairing(i, x) > 0.0) y += d.dual(i) * leaves[i].weight;
	return y;
}

/// Support function at infinity, H(cos t, sin t, 1). Continuous across leaf
/// endpoints, where the leaf's term vanishes.
inline double mess_boundary_trace(const DomainOfDependence& d, double theta) {
	const MinkVec3 eta = ideal_point(theta);
	double h = inner(eta, d.y0());
	const auto& leaves = d.lamination().leaves;
	for (std::size_t i = 0; i < leaves.size(); ++i)
		h += leaves[i].weight * std::max(0.0, inner(eta, d.dual(i)));
	return h;
}

inline BoundaryFn mess_boundary_fn(const DomainOfDependence& d, int samples) {
	return BoundaryFn::sample([&d](double t) { return mess_boundary_trace(d, t); }, samples);
}

// ---------------------------------------------------------------------------
// Weight versus Minkowski distance

struct WeightDistanceReport {
	double crossed_weight = 0.0;  ///< mu(G[x1, x2])
	double distance = 0.0;        ///< ||y1 - y2||, Lorentzian length of a spacelike vector
	bool pass = false;
};

inline WeightDistanceReport weight_distance_check(const DomainOfDependence& d, const MinkVec3& x1,
												  const MinkVec3& x2, double tol = 1e-10) {
	WeightDistanceReport rep;
	const auto& leaves = d.lamination().leaves;
	for (std::size_t i = 0; i < leaves.size(); ++i)
		if ((d.pairing(i, x1) > 0.0) != (d.pairing(i, x2) > 0.0)) rep.crossed_weight += leaves[i].weight;
	rep.distance = spacelike_norm(mess_boundary_point(d, x1) - mess_boundary_point(d, x2));
	rep.pass = rep.crossed_weight <= rep.distance + tol;
	return rep;
}

// ---------------------------------------------------------------------------
// Thurston norm

namespace detail {

/// Weight crossed by the geodesic segment of length `length` centered at x in direction e.
inline double segment_mass(const MeasuredLamination& mu, const std::vector<MinkVec3>& duals, const MinkVec3& x,
						   const MinkVec3& e, double length = 1.0) {
	const double c = std::cosh(0.5 * length), s = std::sinh(0.5 * length);
	const MinkVec3 p = x * c + e * s, q = x * c - e * s;
	double mass = 0.0;
	for (std::size_t i = 0; i < duals.size(); ++i)
		if (inner(p, duals[i]) * inner(q, duals[i]) < 0.0) mass += mu.leaves[i].weight;
	return mass;
}

/// Unit tangent at x in the direction of y.
inline MinkVec3 direction_towards(const MinkVec3& x, const MinkVec3& y) {
	MinkVec3 e = y + x * inner(x, y);
	return e * (1.0 / spacelike_norm(e));
}

}  // namespace detail

/// Lower bound for sup_I mu(G_I) over unit geodesic segments I. Candidate
/// segments: perpendicular to each leaf along its length, along common
/// perpendiculars of leaf pairs, a hyperbolic grid of centers, and `trials`
/// random segments drawn from `seed`.
inline double thurston_norm_lower(const MeasuredLamination& mu, int trials, std::uint64_t seed) {
	if (mu.empty()) return 0.0;
	std::vector<MinkVec3> duals;
	for (const Leaf& l : mu.leaves) duals.push_back(geodesic_dual(l.geodesic));
	double best = 0.0;
	const auto consider = [&](const MinkVec3& x, const MinkVec3& e) {
		best = std::max(best, detail::segment_mass(mu, duals, x, e));
	};

	for (std::size_t i = 0; i < mu.size(); ++i) {
		for (double along : {-6.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 6.0}) {
			const MinkVec3 foot = geodesic_point(mu.leaves[i].geodesic, along);
			for (double shift : {-0.45, -0.25, 0.0, 0.25, 0.45}) {
				const MinkVec3 x = foot * std::cosh(shift) + duals[i] * std::sinh(shift);
				const MinkVec3 e = duals[i] * std::cosh(shift) + foot * std::sinh(shift);
				consider(x, e);
			}
		}
	}

	for (std::size_t i = 0; i < mu.size(); ++i) {
		for (std::size_t j = i + 1; j < mu.size(); ++j) {
			MinkVec3 perp = cross(duals[i], duals[j]);
			if (inner(perp, perp) <= 1e-14) continue;  // asymptotic or crossing leaves
			perp = perp * (1.0 / spacelike_norm(perp));
			MinkVec3 f1 = cross(duals[i], perp), f2 = cross(duals[j], perp);
			if (!(inner(f1, f1) < 0.0) || !(inner(f2, f2) < 0.0)) continue;
			f1 = to_hyperboloid(f1.x3 > 0.0 ? f1 : -f1);
			f2 = to_hyperboloid(f2.x3 > 0.0 ? f2 : -f2);
			const MinkVec3 mid = to_hyperboloid(f1 + f2);
			if (hyperbolic_distance(f1, f2) < 1e-12) continue;
			consider(mid, detail::direction_towards(mid, f2));
		}
	}

	const int grid = 15;
	for (int a = 0; a < grid; ++a) {
		for (int b = 0; b < grid; ++b) {
			const DiscPoint z{-0.95 + 1.9 * a / (grid - 1), -0.95 + 1.9 * b / (grid - 1)};
			if (z.norm() >= 0.97) continue;
			const MinkVec3 x = klein_up(z);
			const MinkVec3 e1 = detail::direction_towards(x, klein_up({z.z1 * 0.5 + 0.01, z.z2 * 0.5}));
			const MinkVec3 e2 = cross(x, e1);
			for (int k = 0; k < 8; ++k) {
				const double t = kTwoPi * k / 16;
				consider(x, e1 * std::cos(t) + e2 * std::sin(t));
			}
		}
	}

	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	for (int k = 0; k < trials; ++k) {
		const double r = 0.98 * std::sqrt(unit(rng)), a = kTwoPi * unit(rng), t = kTwoPi * unit(rng);
		const MinkVec3 x = klein_up({r * std::cos(a), r * std::sin(a)});
		const MinkVec3 e1 = detail::direction_towards(x, klein_up({0.5 * r * std::cos(a + 0.3), 0.5 * r * std::sin(a + 0.3)}));
		const MinkVec3 e2 = cross(x, e1);
		consider(x, e1 * std::cos(t) + e2 * std::sin(t));
	}
	return best;
}

// ---------------------------------------------------------------------------
// Infinitesimal earthquakes

/// Infinitesimal earthquake along mu, normalized to fix x0, at the boundary
/// point theta: sum over leaves separating theta from x0 of a_l <eta x sigma_l, v>
/// with eta the null lift and v the counterclockwise unit tangent.
inline double infinitesimal_earthquake(const MeasuredLamination& mu, const MinkVec3& x0, double theta) {
	const MinkVec3 eta = ideal_point(theta);
	const MinkVec3 v = boundary_tangent(theta);
	double total = 0.0;
	for (const Leaf& leaf : mu.leaves) {
		const Geodesic& g = leaf.geodesic;
		if (g.has_endpoint(theta)) throw OnLeafError("earthquake evaluated at a leaf endpoint");
		// Right of theta1 -> theta2 is the counterclockwise arc from theta1 to theta2.
		const MinkVec3 right = geodesic_dual(Geodesic{g.theta1, g.theta2, Side::Right});
		const double base_side = inner(x0, right);
		if (std::abs(base_side) <= 1e-10) throw OnLeafError("base point lies on a weighted leaf");
		const bool eta_right = detail::in_open_arc(theta, g.theta1, g.theta2);
		if (eta_right == (base_side > 0.0)) continue;
		const MinkVec3 sigma = base_side > 0.0 ? -right : right;
		total += leaf.weight * inner(cross(eta, sigma), v);
	}
	return total;
}

// ---------------------------------------------------------------------------
// Zygmund seminorm

struct ZygmundSampling {
	int angles = 4096;
	int steps = 64;  ///< h values, geometrically spaced on [hmin, hmax]
};

/// sup over sampled (theta, h) of |phi(theta + h) + phi(theta - h) - 2 phi(theta)| / h.
template <class Phi>
double zygmund_seminorm(const Phi& phi, double hmin, double hmax, const ZygmundSampling& s = {}) {
	if (!(hmin > 0.0) || !(hmax >= hmin)) throw InvalidArgument("zygmund seminorm needs 0 < hmin <= hmax");
	double best = 0.0;
	for (int j = 0; j < s.steps; ++j) {
		const double h = s.steps == 1 ? hmin : hmin * std::pow(hmax / hmin, static_cast<double>(j) / (s.steps - 1));
		for (int k = 0; k < s.angles; ++k) {
			const double t = kTwoPi * k / s.angles;
			best = std::max(best, std::abs(phi(t + h) + phi(t - h) - 2.0 * phi(t)) / h);
		}
	}
	return best;
}

}  // namespace mink

#endif  // MINK_LAMINATION_HPP_
