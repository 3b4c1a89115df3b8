#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mink/barriers.hpp"
#include "mink/envelope.hpp"
#include "mink/support.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace mink;
using mink::testing::RandomGenerator;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double vec_err(const MinkVec3& a, const MinkVec3& b) {
	return std::max({std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3)});
}

/// Standard frame rotated by alpha about the time axis.
NullFrame rotated_frame(double alpha) {
	const double c = std::cos(alpha), s = std::sin(alpha), r = kSqrt2 / 2;
	return {{r * c, r * s, r}, {-r * c, -r * s, r}, {-s, c, 0.0}};
}

/// Envelope of phi = 0 with phi(0) = -m: cone over the point (1, 0, -m).
double cone_envelope(const DiscPoint& z, double m) {
	return -m * (1.0 - z.norm_sq()) / (2.0 * (1.0 - z.z1));
}

}  // namespace

// ---------------------------------------------------------------------------
// g and f

TEST(Barrier, GExamples) {
	const auto flat = make_barrier(-1.0, 0.0);
	for (double s : {-3.0, 0.0, 2.5}) EXPECT_EQ(barrier_g(s, flat), 1.0);
	const auto p = make_barrier(-1.0, 1.0);
	EXPECT_NEAR(barrier_g(0.0, p), kSqrt2, 1e-15);
	for (const auto& q : {p, make_barrier(-2.0, 0.7), make_barrier(-1.0, -0.5)}) {
		for (double s = -3.0; s < std::min(2.0, barrier_s_max(q) - 0.1); s += 0.25) {
			const auto g = [&](double x) { return barrier_g(x, q); };
			EXPECT_NEAR(barrier_dg(s, q), oracle::first_difference(g, s, 1e-5), 1e-8);
			const double gs = barrier_g(s, q);
			EXPECT_NEAR(gs * (gs - barrier_dg(s, q)), 1.0 / -q.K, 1e-12);
		}
	}
}

TEST(Barrier, DomainForNegativeC) {
	const auto p = make_barrier(-1.0, -0.5);
	EXPECT_NEAR(barrier_s_max(p), 0.5 * std::log(2.0), 1e-15);
	EXPECT_THROW(barrier_g(barrier_s_max(p) + 1e-6, p), DomainError);
	EXPECT_THROW(barrier_f(1.0, p), DomainError);
	EXPECT_NO_THROW(barrier_f(barrier_s_max(p), p));
	EXPECT_THROW(make_barrier(1.0, 1.0), InvalidArgument);
}

TEST(Barrier, FExamples) {
	const auto flat = make_barrier(-1.0, 0.0);
	for (double s : {-3.0, 0.0, 2.5}) EXPECT_EQ(barrier_f(s, flat), -1.0);
	BarrierParams p = make_barrier(-1.0, 1.0);
	ASSERT_EQ(p.D, 0.0);
	EXPECT_NEAR(barrier_f(0.0, p), -kSqrt2 / 2 - 0.5 * std::log(1.0 + kSqrt2), 1e-14);
	EXPECT_NEAR(barrier_f(0.0, p), -1.14779, 1e-5);
}

TEST(Barrier, FirstOrderRelation) {
	for (const auto& p : {make_barrier(-1.0, 1.0), make_barrier(-4.0, 1.0), make_barrier(-0.3, 2.0),
						  make_barrier(-1.0, -0.5), make_barrier(-1.0, 0.0)}) {
		const auto f = [&](double x) { return barrier_f(x, p); };
		for (double s = -3.0; s <= std::min(3.0, barrier_s_max(p) - 0.25); s += 0.2) {
			EXPECT_NEAR(barrier_df(s, p), -f(s) - barrier_g(s, p), 1e-12 * std::max(1.0, std::abs(f(s))));
			EXPECT_NEAR(barrier_df(s, p), oracle::first_difference(f, s, 1e-5), 1e-8 * std::max(1.0, std::abs(f(s))));
			EXPECT_NEAR(barrier_d2f(s, p), oracle::second_difference(f, s, 1e-4), 1e-5 * std::max(1.0, std::abs(f(s))));
		}
	}
}

TEST(Barrier, NormalizationMatchesQuadrature) {
	for (double K : {-1.0, -4.0, -0.25})
		for (double C : {1.0, 0.3, 5.0, -0.5, -2.0, 0.0})
			EXPECT_NEAR(barrier_D_quadrature(K, C), barrier_normalized_D(K, C), 1e-10) << K << " " << C;
	// normalized D kills the e^{-s} mode at -inf
	const auto p = make_barrier(-2.0, 3.0);
	EXPECT_NEAR(std::exp(-30.0) * barrier_f(-30.0, p), 0.0, 1e-12);
	BarrierParams q = p;
	q.D += 1.0;
	EXPECT_NEAR(std::exp(-30.0) * barrier_f(-30.0, q), 1.0, 1e-12);
}

TEST(Barrier, OdeResidual) {
	EXPECT_EQ(ode_residual(0.3, make_barrier(-1.0, 0.0)), 0.0);
	const auto p = make_barrier(-1.0, 1.0);
	for (int k = 0; k < 64; ++k) {
		const double s = -3.0 + 6.0 * k / 63;
		EXPECT_LT(std::abs(ode_residual(s, p)), 1e-12) << s;
		EXPECT_LT(std::abs(ode_residual(s, p, ResidualMode::FiniteDifference)), 1e-6) << s;
	}
	const auto n = make_barrier(-1.0, -0.5);
	for (int k = 0; k < 32; ++k) {
		const double s = -3.0 + (barrier_s_max(n) - 0.25 + 3.0) * k / 31;
		EXPECT_LT(std::abs(ode_residual(s, n)), 1e-12) << s;
		EXPECT_LT(std::abs(ode_residual(s, n, ResidualMode::FiniteDifference)), 1e-6) << s;
	}
	// a non-normalized D still solves the ODE
	BarrierParams q = make_barrier(-3.0, 2.0);
	q.D = 0.7;
	for (double s = -2.0; s <= 2.0; s += 0.5) EXPECT_LT(std::abs(ode_residual(s, q)), 1e-11);
}

// ---------------------------------------------------------------------------
// Embedding

TEST(Barrier, HyperboloidCase) {
	const auto p = make_barrier(-1.0, 0.0);
	const NullFrame fr = NullFrame::standard();
	EXPECT_LT(vec_err(barrier_surface_point(0.0, 0.0, p), (fr.v0 + fr.v1) * (kSqrt2 / 2)), 1e-15);
	const auto p4 = make_barrier(-4.0, 0.0);
	for (double t : {-1.0, 0.0, 2.0})
		for (double s : {-1.0, 0.5})
			EXPECT_LT(vec_err(barrier_surface_point(t, s, p4), barrier_normal(t, s, p4) * 0.5), 1e-14);
	EXPECT_NEAR(barrier_support_on_disc({0.0, 0.0}, p), -1.0, 1e-15);
	RandomGenerator rng(1);
	for (int k = 0; k < 50; ++k) {
		const DiscPoint z = rng.disc(0.99);
		EXPECT_NEAR(barrier_support_on_disc(z, p4), -0.5 * std::sqrt(1.0 - z.norm_sq()), 1e-14);
	}
}

TEST(Barrier, NormalIsGaussMap) {
	const auto p = make_barrier(-1.0, 1.0);
	EXPECT_LT(vec_err(barrier_normal(0.0, 0.7, p), {std::sinh(0.7), 0.0, std::cosh(0.7)}), 1e-14);
	for (double t : {-1.5, 0.0, 0.8}) {
		for (double s : {-1.0, 0.0, 1.2}) {
			const MinkVec3 n = barrier_normal(t, s, p);
			EXPECT_NEAR(inner(n, n), -1.0, 1e-12);
			// normal is orthogonal to the surface tangents
			const double h = 1e-6;
			const MinkVec3 xt = (barrier_surface_point(t + h, s, p) - barrier_surface_point(t - h, s, p)) * (0.5 / h);
			const MinkVec3 xs = (barrier_surface_point(t, s + h, p) - barrier_surface_point(t, s - h, p)) * (0.5 / h);
			EXPECT_NEAR(inner(n, xt), 0.0, 1e-7);
			EXPECT_NEAR(inner(n, xs), 0.0, 1e-7);
			// support value
			EXPECT_NEAR(inner(barrier_surface_point(t, s, p), n), barrier_f(s, p), 1e-12);
		}
	}
}

TEST(Barrier, HeightExpansion) {
	for (const auto& p : {make_barrier(-1.0, 1.0), make_barrier(-2.0, 0.5), make_barrier(-1.0, -0.5)}) {
		for (double t = -3.0; t <= 3.0; t += 0.5) {
			for (double s = -2.0; s <= std::min(2.0, barrier_s_max(p) - 0.05); s += 0.25) {
				const double g = barrier_g(s, p), f = barrier_f(s, p);
				const double expect = -(g + 2 * f) * std::exp(s) + g * std::exp(-s) * (t * t / 2 + 1);
				EXPECT_NEAR(2 * barrier_surface_point(t, s, p).x3, expect, 1e-10);
			}
		}
	}
}

TEST(Barrier, ParabolicInvariance) {
	for (const auto& fr : {NullFrame::standard(), rotated_frame(0.7)}) {
		const auto p = make_barrier(-1.0, 1.0, fr);
		for (double tau : {-1.0, 0.3, 2.0}) {
			const Isometry a = parabolic_isometry(tau, fr);
			for (double t : {-1.0, 0.0, 1.5})
				for (double s : {-1.5, 0.0, 1.0})
					EXPECT_LT(vec_err(barrier_surface_point(t + tau, s, p), a(barrier_surface_point(t, s, p))), 1e-12);
		}
	}
}

TEST(Barrier, Properness) {
	for (const auto& p : {make_barrier(-1.0, 1.0), make_barrier(-1.0, 0.0), make_barrier(-3.0, 0.4)}) {
		double prev = -1e300;
		for (double M : {5.0, 10.0, 20.0}) {
			double lo = 1e300;
			for (int k = 0; k < 400; ++k) {
				const double a = kTwoPi * k / 400;
				const double c = std::cos(a), s = std::sin(a);
				const double l = M / (std::abs(c) + std::abs(s));
				lo = std::min(lo, barrier_surface_point(l * c, l * s, p).x3);
			}
			EXPECT_GT(lo, prev) << M;
			prev = lo;
		}
	}
}

TEST(Barrier, ChartRoundTrip) {
	for (const auto& fr : {NullFrame::standard(), rotated_frame(-1.1)}) {
		const auto p = make_barrier(-1.0, 1.0, fr);
		for (double t : {-2.0, 0.0, 0.4})
			for (double s : {-2.0, 0.0, 1.7}) {
				const auto ts = barrier_chart(klein_down(barrier_normal(t, s, p)), p);
				EXPECT_NEAR(ts[0], t, 1e-10);
				EXPECT_NEAR(ts[1], s, 1e-10);
			}
	}
}

TEST(Barrier, ConstantCurvature) {
	RandomGenerator rng(2);
	for (const auto& p : {make_barrier(-1.0, 1.0), make_barrier(-2.0, 0.5), make_barrier(-1.0, -0.5)}) {
		const auto u = [&](const DiscPoint& z) { return barrier_support_on_disc(z, p); };
		int checked = 0;
		while (checked < 30) {
			const DiscPoint z = rng.disc(0.8);
			if (p.C < 0.0 && barrier_chart(z, p)[1] > barrier_s_max(p) - 0.3) continue;
			EXPECT_NEAR(curvature(u, z, 1e-3) / p.K, 1.0, 1e-3);
			++checked;
		}
	}
}

TEST(Barrier, ShapeInverseProductMatchesChart) {
	const auto p = make_barrier(-1.0, 1.0);
	const auto u = [&](const DiscPoint& z) { return barrier_support_on_disc(z, p); };
	for (const DiscPoint z : {DiscPoint{0.1, 0.2}, DiscPoint{-0.4, 0.3}, DiscPoint{0.5, -0.5}}) {
		const Stencil st = make_stencil(u, z, 1e-3);
		const double expect = std::pow(1.0 - z.norm_sq(), 2) * st.hessian_det();
		EXPECT_NEAR(shape_inverse_eigen(u, z).product() / expect, 1.0, 1e-3);
		// principal radii multiply to 1/|K|
		EXPECT_NEAR(shape_inverse_eigen(u, z).product(), 1.0, 1e-3);
	}
}

TEST(Barrier, BoundaryLimits) {
	for (const auto& p : {make_barrier(-1.0, 1.0), make_barrier(-1.0, 4.0)}) {
		const auto u = [&](const DiscPoint& z) { return barrier_support_on_disc(z, p); };
		const RadialSampling rs{0.9, 0.99999, 20};
		EXPECT_NEAR(radial_boundary_value(u, 0.0, rs).limit, -std::sqrt(p.C), 1e-3);
		// convergence is slow near the fixed direction, so sample close to the circle
		for (double th : {0.5, kPi / 2, kPi, 4.0})
			EXPECT_NEAR(radial_boundary_value(u, th, RadialSampling{1.0 - 1e-3, 1.0 - 1e-9, 20}).limit, 0.0, 1e-3) << th;
		// +inf limit of f / cosh s along t = 0
		EXPECT_NEAR(barrier_f(25.0, p) / std::cosh(25.0), -std::sqrt(p.C), 1e-9);
	}
}

TEST(Barrier, SandwichBetweenEnvelopes) {
	const auto p = make_barrier(-1.0, 1.0);
	const BoundaryFn phi = BoundaryFn::sample([](double) { return 0.0; }, 1024, {{0.0, -1.0}});
	const ConvexEnvelope env(phi);
	RandomGenerator rng(3);
	for (int k = 0; k < 300; ++k) {
		const DiscPoint z = rng.disc(0.98);
		const double e = cone_envelope(z, 1.0);
		EXPECT_NEAR(env(z), e, 1e-4);
		const double u = barrier_support_on_disc(z, p);
		EXPECT_LE(u, e + 1e-12);
		EXPECT_GE(u, e - std::sqrt(1.0 - z.norm_sq()) - 1e-12);
	}
}

TEST(Barrier, NegativeCCapAndConePoint) {
	for (const auto& [K, C] : {std::pair{-1.0, -0.5}, std::pair{-2.0, -3.0}}) {
		const auto p = make_barrier(K, C);
		const double cap = barrier_s_max(p);
		EXPECT_NEAR(barrier_f(cap, p), -(kPi / 4) / std::sqrt(-K), 1e-10);
		const double beta = kSqrt2 * (kPi / 4) / (-K * std::sqrt(-C));
		EXPECT_LT(vec_err(barrier_cone_point(p), p.frame.v0 * beta), 1e-10);
		// the surface approaches the cone point at the cap
		EXPECT_LT(vec_err(barrier_surface_point(0.3, cap - 1e-10, p), barrier_cone_point(p)), 1e-4);
		// the continuation beyond the cap is the support of the cone point
		RandomGenerator rng(4);
		int checked = 0;
		while (checked < 20) {
			const DiscPoint z = rng.disc(0.99);
			if (barrier_chart(z, p)[1] <= cap) continue;
			const MinkVec3 x{z.z1, z.z2, 1.0};
			EXPECT_NEAR(barrier_support_on_disc(z, p), inner(x, barrier_cone_point(p)), 1e-12);
			++checked;
		}
		// continuity across the cap
		EXPECT_NEAR(barrier_f_extended(cap + 1e-12, p), barrier_f(cap, p), 1e-10);
	}
}

TEST(Barrier, AsymptoticGraph) {
	const auto p = make_barrier(-1.0, 1.0);
	const auto height = [&](double a, double b) { return barrier_graph_height(a, b, p); };
	for (double th : {kPi / 2, kPi, 4.0}) {
		const auto rep = asymptotic_graph_check(height, 0.0, th, 50.0, 400.0, 1e-3);
		EXPECT_TRUE(rep.pass) << th << " " << rep.graph_limit;
	}
	// graph height really inverts the embedding
	const MinkVec3 x = barrier_surface_point(0.4, -0.3, p);
	EXPECT_NEAR(barrier_graph_height(x.x1, x.x2, p), x.x3, 1e-10);
}

TEST(Barrier, InducedMetric) {
	const auto flat = induced_metric_check(make_barrier(-1.0, 0.0));
	EXPECT_TRUE(flat.pass);
	EXPECT_LT(flat.max_rel_err_E, 1e-4);
	const auto p = induced_metric_check(make_barrier(-1.0, 1.0));
	EXPECT_TRUE(p.pass);
	EXPECT_LT(p.max_F, 1e-8);
	const auto q = induced_metric_check(make_barrier(-4.0, 1.0));
	EXPECT_TRUE(q.pass);
	EXPECT_LT(q.max_rel_err_profile, 1e-4);
	const auto n = induced_metric_check(make_barrier(-1.0, -0.5));
	EXPECT_TRUE(n.pass);
}
