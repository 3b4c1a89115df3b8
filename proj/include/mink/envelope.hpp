#ifndef MINK_ENVELOPE_HPP_
#define MINK_ENVELOPE_HPP_

// Boundary data on the unit circle and its convex envelope over the disc.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "mink/errors.hpp"
#include "mink/grid.hpp"
#include "mink/minkowski.hpp"

namespace mink {

/// A point override of the boundary data, for lower semicontinuous traces.
struct BoundaryPoint {
	double theta = 0.0;
	double value = 0.0;
};

/// Support function at infinity, sampled at theta_k = 2 pi k / N.
class BoundaryFn {
public:
	static constexpr int kMinSamples = 16;

	BoundaryFn(std::vector<double> samples, std::vector<BoundaryPoint> exceptional = {})
		: samples_(std::move(samples)), exceptional_(std::move(exceptional)) {
		if (static_cast<int>(samples_.size()) < kMinSamples)
			throw InvalidArgument("boundary function needs at least 16 samples");
		for (double v : samples_)
			if (!std::isfinite(v)) throw InvalidArgument("boundary samples must be finite");
		for (auto& p : exceptional_) {
			if (!std::isfinite(p.theta) || !std::isfinite(p.value))
				throw InvalidArgument("exceptional boundary point must be finite");
			p.theta = canonical_angle(p.theta);
			if (p.value > interpolate_base(p.theta) + 1e-12)
				throw InvalidArgument("exceptional boundary value exceeds the base trace (not lower semicontinuous)");
		}
		std::sort(exceptional_.begin(), exceptional_.end(),
				  [](const BoundaryPoint& a, const BoundaryPoint& b) { return a.theta < b.theta; });
	}

	template <class F>
	static BoundaryFn sample(F&& f, int n, std::vector<BoundaryPoint> exceptional = {}) {
		std::vector<double> v(static_cast<std::size_t>(n));
		for (int k = 0; k < n; ++k) v[k] = f(angle_of(k, n));
		return BoundaryFn(std::move(v), std::move(exceptional));
	}

	static double angle_of(int k, int n) { return kTwoPi * k / n; }

	int size() const { return static_cast<int>(samples_.size()); }
	const std::vector<double>& samples() const { return samples_; }
	const std::vector<BoundaryPoint>& exceptional() const { return exceptional_; }

	/// Periodic linear interpolation of the samples, with exceptional overrides.
	double operator()(double theta) const {
		const double a = canonical_angle(theta);
		for (const auto& p : exceptional_)
			if (angular_separation(p.theta, a) <= 1e-12) return p.value;
		return interpolate_base(a);
	}

	/// Sample points and exceptional points, sorted by angle; an exceptional
	/// point replaces a sample at the same angle.
	std::vector<BoundaryPoint> lifted_points() const {
		std::vector<BoundaryPoint> pts;
		pts.reserve(samples_.size() + exceptional_.size());
		for (int k = 0; k < size(); ++k) {
			const double t = angle_of(k, size());
			bool replaced = false;
			for (const auto& p : exceptional_)
				if (angular_separation(p.theta, t) <= 1e-12) replaced = true;
			if (!replaced) pts.push_back({t, samples_[k]});
		}
		pts.insert(pts.end(), exceptional_.begin(), exceptional_.end());
		std::sort(pts.begin(), pts.end(),
				  [](const BoundaryPoint& a, const BoundaryPoint& b) { return a.theta < b.theta; });
		return pts;
	}

private:
	double interpolate_base(double a) const {
		const int n = size();
		const double f = a / kTwoPi * n;
		const int k = std::min(static_cast<int>(std::floor(f)), n - 1);
		const double t = f - k;
		return (1.0 - t) * samples_[k] + t * samples_[(k + 1) % n];
	}

	std::vector<double> samples_;
	std::vector<BoundaryPoint> exceptional_;
};

/// Affine function a1 z1 + a2 z2 + c.
struct AffinePlane {
	double a1 = 0.0;
	double a2 = 0.0;
	double c = 0.0;

	double operator()(const DiscPoint& z) const { return a1 * z.z1 + a2 * z.z2 + c; }
};

/// Lower convex hull of boundary points lifted to (cos theta, sin theta, value).
///
/// The projected points are in convex position, so the hull is a
/// triangulation of the inscribed polygon. It is built by gift-wrapping from
/// the polygon edge (last, first): across a hull edge (a, b) the adjacent
/// face has apex c minimizing the slope (phi_c - L(c)) / dist(c, ab), where L
/// is the linear interpolant along ab. Evaluation is the max of face planes.
class ConvexEnvelope {
public:
	explicit ConvexEnvelope(const std::vector<BoundaryPoint>& pts) : points_(pts) {
		const int m = static_cast<int>(pts.size());
		if (m < 3) throw InvalidArgument("convex envelope needs at least 3 boundary points");
		std::vector<std::pair<int, int>> stack{{0, m - 1}};
		while (!stack.empty()) {
			const auto [a, b] = stack.back();
			stack.pop_back();
			if (b - a < 2) continue;
			const int c = wrap(a, b);
			add_face(a, c, b);
			stack.emplace_back(a, c);
			stack.emplace_back(c, b);
		}
	}

	explicit ConvexEnvelope(const BoundaryFn& phi) : ConvexEnvelope(phi.lifted_points()) {}

	double operator()(const DiscPoint& z) const {
		double best = -std::numeric_limits<double>::infinity();
		for (const auto& p : planes_) best = std::max(best, p(z));
		return best;
	}

	const std::vector<AffinePlane>& planes() const { return planes_; }
	const std::vector<std::array<int, 3>>& faces() const { return faces_; }
	const std::vector<BoundaryPoint>& points() const { return points_; }

private:
	DiscPoint xy(int k) const { return {std::cos(points_[k].theta), std::sin(points_[k].theta)}; }

	int wrap(int a, int b) const {
		const DiscPoint pa = xy(a), pb = xy(b);
		const double ex = pb.z1 - pa.z1, ey = pb.z2 - pa.z2;
		const double len = std::hypot(ex, ey);
		const double ux = ex / len, uy = ey / len;
		int best = a + 1;
		double best_slope = std::numeric_limits<double>::infinity();
		for (int c = a + 1; c < b; ++c) {
			const DiscPoint pc = xy(c);
			const double along = (pc.z1 - pa.z1) * ux + (pc.z2 - pa.z2) * uy;
			const double dist = std::abs((pc.z1 - pa.z1) * uy - (pc.z2 - pa.z2) * ux);
			const double lin = points_[a].value + along / len * (points_[b].value - points_[a].value);
			const double slope = (points_[c].value - lin) / dist;
			if (slope < best_slope) {
				best_slope = slope;
				best = c;
			}
		}
		return best;
	}

	void add_face(int a, int b, int c) {
		const DiscPoint p = xy(a), q = xy(b), r = xy(c);
		const double fa = points_[a].value, fb = points_[b].value, fc = points_[c].value;
		const double d = (q.z1 - p.z1) * (r.z2 - p.z2) - (r.z1 - p.z1) * (q.z2 - p.z2);
		const double a1 = ((fb - fa) * (r.z2 - p.z2) - (fc - fa) * (q.z2 - p.z2)) / d;
		const double a2 = ((fc - fa) * (q.z1 - p.z1) - (fb - fa) * (r.z1 - p.z1)) / d;
		planes_.push_back({a1, a2, fa - a1 * p.z1 - a2 * p.z2});
		faces_.push_back({a, b, c});
	}

	std::vector<BoundaryPoint> points_;
	std::vector<AffinePlane> planes_;
	std::vector<std::array<int, 3>> faces_;
};

}  // namespace mink

#endif  // MINK_ENVELOPE_HPP_
