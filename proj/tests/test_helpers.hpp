#ifndef MINK_TESTS_TEST_HELPERS_HPP_
#define MINK_TESTS_TEST_HELPERS_HPP_

#include <cmath>
#include <algorithm>
#include <random>
#include <vector>

#include "mink/lamination.hpp"
#include "mink/minkowski.hpp"

namespace mink::testing {

/// Seeded generator for property-style tests.
class RandomGenerator {
public:
	explicit RandomGenerator(std::uint64_t seed) : engine_(seed) {}

	double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
	int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

	MinkVec3 vector(double scale = 2.0) {
		return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
	}

	/// Interior disc point with |z| <= rmax, uniform in area.
	DiscPoint disc(double rmax = 0.95) {
		const double r = rmax * std::sqrt(uniform(0.0, 1.0));
		const double a = uniform(0.0, kTwoPi);
		return {r * std::cos(a), r * std::sin(a)};
	}

	MinkVec3 hyperboloid(double rmax = 0.95) { return klein_up(disc(rmax)); }

	/// Random finite lamination with `leaves` pairwise disjoint leaves: sorted
	/// endpoints paired by a random non-crossing matching.
	MeasuredLamination lamination(int leaves, double wmin = 0.1, double wmax = 2.0) {
		const int m = 2 * leaves;
		std::vector<double> angles(m);
		for (double& a : angles) a = uniform(0.0, kTwoPi);
		std::sort(angles.begin(), angles.end());
		for (int k = 1; k < m; ++k)
			if (angles[k] - angles[k - 1] < 1e-3) angles[k] = angles[k - 1] + 1e-3;
		MeasuredLamination mu;
		std::vector<int> open;
		int opened = 0;
		for (int k = 0; k < m; ++k) {
			const bool can_open = opened < leaves;
			const bool can_close = !open.empty();
			if (can_open && (!can_close || uniform(0.0, 1.0) < 0.5)) {
				open.push_back(k);
				++opened;
			} else {
				const int a = open.back();
				open.pop_back();
				const Side side = uniform(0.0, 1.0) < 0.5 ? Side::Left : Side::Right;
				mu.leaves.push_back({Geodesic{angles[a], angles[k], side}, uniform(wmin, wmax)});
			}
		}
		return mu;
	}

	/// Hyperboloid point off every leaf of mu by a margin in the pairing.
	MinkVec3 off_leaves(const MeasuredLamination& mu, double rmax = 0.95, double margin = 1e-6) {
		for (;;) {
			const MinkVec3 x = hyperboloid(rmax);
			bool ok = true;
			for (const auto& l : mu.leaves) ok = ok && std::abs(inner(x, geodesic_dual(l.geodesic))) > margin;
			if (ok) return x;
		}
	}

	std::mt19937_64& engine() { return engine_; }

private:
	std::mt19937_64 engine_;
};

}  // namespace mink::testing

#endif  // MINK_TESTS_TEST_HELPERS_HPP_
