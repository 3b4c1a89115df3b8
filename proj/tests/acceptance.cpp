// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mink/barriers.hpp"
#include "mink/lamination.hpp"
#include "mink/ma_solver.hpp"
#include "mink/support.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace mink;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
	std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
	std::fflush(stdout);
	if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
	char buf[64];
	std::snprintf(buf, sizeof buf, f, a);
	return buf;
}

std::function<double(const DiscPoint&)> hyperboloid(double a) {
	const double c = 1.0 / std::sqrt(a);
	return [c](const DiscPoint& z) { return -c * std::sqrt(std::max(0.0, 1.0 - z.norm_sq())); };
}

SolverConfig config(int n, double R = 0.9) {
	SolverConfig cfg;
	cfg.n = n;
	cfg.R = R;
	cfg.threads = 1;
	return cfg;
}

template <class F>
double max_error(const GridSupportFn& u, const F& exact) {
	double e = 0.0;
	for (std::size_t k : u.grid().interior()) e = std::max(e, std::abs(u[k] - exact(u.grid().point(k))));
	return e;
}

/// Every converged solve, with the boundary data and lower curvature bound it used.
struct Converged {
	std::string label;
	GridSupportFn u;
	BoundaryFn phi;
	double a;
};
std::vector<Converged> solves;
std::vector<std::function<void()>> pending;

BoundaryFn zero_boundary() { return BoundaryFn::sample([](double) { return 0.0; }, 1024); }

// ---------------------------------------------------------------------------

void hyperboloid_oracle() {
	const auto exact = hyperboloid(1.0);
	const auto t0 = std::chrono::steady_clock::now();
	const auto r129 = solve(CurvatureField::constant(1.0), RingData::exact(exact), config(129));
	const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	const auto r257 = solve(CurvatureField::constant(1.0), RingData::exact(exact), config(257));
	const double e129 = max_error(r129.u, exact), e257 = max_error(r257.u, exact);
	const double order = std::log2(e129 / e257);
	solves.push_back({"hyperboloid n=129", r129.u, zero_boundary(), 1.0});
	solves.push_back({"hyperboloid n=257", r257.u, zero_boundary(), 1.0});
	report(1, "hyperboloid oracle", e129 <= 5e-3 && secs <= 60.0 && order >= 1.8,
		   fmt("err129=%.3e", e129) + fmt(" err257=%.3e", e257) + fmt(" order=%.3f", order) + fmt(" time=%.2fs", secs));
}

void rescaled_family() {
	const std::vector<double> Ks{-4.0, -1.0, -0.25};
	const auto ring_for = [](double K) { return RingData::exact(hyperboloid(-K)); };
	const FoliationResult fol = foliation_sweep(zero_boundary(), Ks, config(129), ring_for, 1e-6);
	double worst = 0.0;
	for (std::size_t i = 0; i < Ks.size(); ++i) {
		worst = std::max(worst, max_error(fol.solutions[i].u, hyperboloid(-Ks[i])));
		solves.push_back({"rescaled K=" + fmt("%g", Ks[i]), fol.solutions[i].u, zero_boundary(), -Ks[i]});
	}
	report(2, "rescaled family", worst <= 5e-3 && fol.monotone,
		   fmt("max err=%.3e", worst) + fmt(" worst ordering violation=%.3e", fol.worst_violation));
}

void barrier_ode() {
	double analytic = 0.0, fd = 0.0, ref = 0.0;
	for (double K : {-1.0, -4.0}) {
		for (double C : {1.0, -0.5, 0.0}) {
			const BarrierParams p = make_barrier(K, C);
			const double hi = C < 0.0 ? barrier_s_max(p) - 0.25 : 3.0;
			const auto f = [&p](double s) { return barrier_f(s, p); };
			for (int k = 0; k < 64; ++k) {
				const double s = -3.0 + (hi + 3.0) * k / 63;
				analytic = std::max(analytic, std::abs(ode_residual(s, p)));
				fd = std::max(fd, std::abs(ode_residual(s, p, ResidualMode::FiniteDifference)));
				// central differences at h and h/2 with one Richardson step, independent of the library stencil
				const double h = 2e-3;
				const double f0 = f(s);
				const double d1 = (4.0 * oracle::first_difference(f, s, h / 2) - oracle::first_difference(f, s, h)) / 3.0;
				const double d2 = (4.0 * oracle::second_difference(f, s, h / 2) - oracle::second_difference(f, s, h)) / 3.0;
				ref = std::max(ref, std::abs((d2 - f0) * (-d1 - f0) + 1.0 / K));
			}
		}
	}
	report(3, "barrier ODE", analytic <= 1e-12 && fd <= 1e-6 && ref <= 1e-6,
		   fmt("analytic=%.3e", analytic) + fmt(" fd=%.3e", fd) + fmt(" reference fd=%.3e", ref));
}

void barrier_limits() {
	const BarrierParams p = make_barrier(-1.0, 1.0);
	const auto u = [&p](const DiscPoint& z) { return barrier_support_on_disc(z, p); };
	const DiscPoint d0 = klein_down(p.frame.v0);
	const double th0 = std::atan2(d0.z2, d0.z1);
	const double lim0 = radial_boundary_value(u, th0, RadialSampling{0.9, 0.99999, 20}).limit;
	double other = 0.0;
	for (int k = 1; k <= 8; ++k) {
		const double th = th0 + kTwoPi * k / 9.0;
		other = std::max(other, std::abs(radial_boundary_value(u, th, RadialSampling{1.0 - 1e-3, 1.0 - 1e-9, 20}).limit));
	}
	report(4, "barrier limits", std::abs(lim0 + 1.0) <= 1e-3 && other <= 1e-3,
		   fmt("limit at v0=%.6f", lim0) + fmt(" max |limit| elsewhere=%.3e", other));
}

void barrier_as_oracle() {
	const BarrierParams p = make_barrier(-1.0, 1.0);
	const auto exact = [&p](const DiscPoint& z) { return barrier_support_on_disc(z, p); };
	const auto r = solve(CurvatureField::constant(1.0), RingData::exact(exact), config(129, 0.85));
	const double e = max_error(r.u, exact);
	const DiscPoint d0 = klein_down(p.frame.v0);
	solves.push_back({"barrier ring", r.u,
					  BoundaryFn::sample([](double) { return 0.0; }, 1024, {{std::atan2(d0.z2, d0.z1), -1.0}}), 1.0});
	report(5, "barrier as MA oracle", e <= 1e-2, fmt("max err=%.3e", e));
}

void earthquake_identity() {
	testing::RandomGenerator rng(20261019);
	double worst = 0.0, cross_worst = 0.0;
	int evaluated = 0;
	for (int trial = 0; trial < 100; ++trial) {
		const MeasuredLamination mu = rng.lamination(rng.integer(1, 20));
		const MinkVec3 x0 = rng.off_leaves(mu);
		const DomainOfDependence d(mu, x0);
		for (int k = 0; k < 64; ++k) {
			const double t = BoundaryFn::angle_of(k, 64);
			bool endpoint = false;
			for (const Leaf& l : mu.leaves) endpoint = endpoint || l.geodesic.has_endpoint(t, 1e-9);
			if (endpoint) continue;
			worst = std::max(worst, std::abs(infinitesimal_earthquake(mu, x0, t) - mess_boundary_trace(d, t)));
			++evaluated;
			const MinkVec3 eta = ideal_point(t), v = boundary_tangent(t);
			for (const Leaf& l : mu.leaves) {
				const MinkVec3 sigma = geodesic_dual(l.geodesic);
				cross_worst = std::max(cross_worst, std::abs(inner(eta, sigma) - inner(cross(eta, sigma), v)));
			}
		}
	}
	report(6, "earthquake identity", worst <= 1e-10 && cross_worst <= 1e-12,
		   fmt("max diff=%.3e", worst) + fmt(" cross identity=%.3e", cross_worst) + fmt(" evaluations=%.0f", evaluated));
}

void weight_distance() {
	testing::RandomGenerator rng(77);
	int ok = 0;
	double slack = -1e300;
	for (int trial = 0; trial < 100; ++trial) {
		const MeasuredLamination mu = rng.lamination(rng.integer(1, 20));
		const DomainOfDependence d(mu, rng.off_leaves(mu), rng.vector(1.0));
		const auto rep = weight_distance_check(d, rng.off_leaves(mu), rng.off_leaves(mu), 1e-10);
		ok += rep.pass;
		slack = std::max(slack, rep.crossed_weight - rep.distance);
	}
	report(7, "weight-distance inequality", ok == 100,
		   fmt("passed=%.0f/100", ok) + fmt(" max(weight - distance)=%.3e", slack));
}

void lamination_solves() {
	// boundary data from laminations, midpoint rings; only feed the sandwich criterion
	testing::RandomGenerator rng(5);
	const MeasuredLamination single{{{Geodesic{0.2, 2.9, Side::Left}, 1.0}}};
	for (int k = 0; k < 3; ++k) {
		const MeasuredLamination mu = k == 0 ? single : rng.lamination(3 + 4 * k);
		const DomainOfDependence d(mu, rng.off_leaves(mu, 0.3));
		const BoundaryFn phi = mess_boundary_fn(d, 1024);
		for (double a : {1.0, 2.0}) {
			const auto r = solve(CurvatureField::constant(a), RingData::envelope_midpoint(phi, a), config(129));
			solves.push_back({"lamination " + fmt("%.0f", k) + fmt(" psi=%g", a), r.u, phi, a});
		}
	}
}

void comparison() {
	const BoundaryFn phi = BoundaryFn::sample([](double t) { return std::max(0.0, std::sin(t)); }, 1024);
	const RingData ring = RingData::envelope_midpoint(phi, 1.0);
	const CurvatureField lo = CurvatureField::constant(1.0);
	const CurvatureField hi = CurvatureField::constant(2.0);
	const CurvatureField ramp([](const DiscPoint& z) { return 1.5 + 0.4 * z.z1; }, 1.1, 1.9);
	const auto u_lo = solve(lo, ring, config(129));
	const auto u_hi = solve(hi, ring, config(129));
	const auto u_ramp = solve(ramp, ring, config(129));
	solves.push_back({"comparison psi=1", u_lo.u, phi, 1.0});
	solves.push_back({"comparison psi=2", u_hi.u, phi, 1.0});
	solves.push_back({"comparison ramp", u_ramp.u, phi, 1.0});
	// larger psi is less convex, so it lies above
	const ComparisonReport a = comparison_check(u_hi.u, u_lo.u, 1e-8);
	const ComparisonReport b = comparison_check(u_hi.u, u_ramp.u, 1e-8);
	const ComparisonReport c = comparison_check(u_ramp.u, u_lo.u, 1e-8);
	const double margin = std::min({a.interior_min - a.boundary_min, b.interior_min - b.boundary_min,
									c.interior_min - c.boundary_min});
	// reported after the sandwich line, which also covers these solves
	pending.push_back([=] {
		report(9, "comparison principle", a.pass && b.pass && c.pass, fmt("min(interior min - boundary min)=%.3e", margin));
	});
}

void sandwich() {
	bool all = true;
	double worst_ratio = -1e300;
	std::string worst_label;
	double worst_tol = 0.0;
	for (const Converged& s : solves) {
		const SandwichReport rep = sandwich_check(s.u, s.phi, s.a);
		all = all && rep.pass;
		const double ratio = std::max(rep.upper_violation, rep.lower_violation) / rep.tol;
		if (ratio > worst_ratio) {
			worst_ratio = ratio;
			worst_label = s.label;
			worst_tol = rep.tol;
		}
	}
	report(8, "sandwich", all,
		   fmt("solves=%.0f", static_cast<double>(solves.size())) + " tightest=" + worst_label +
			   fmt(" violation/tol=%.3f", worst_ratio) + fmt(" tol=%.3e", worst_tol));
}

void induced_metric() {
	const MetricReport m = induced_metric_check(make_barrier(-1.0, 1.0), MetricSampling{}, 1e-4);
	report(10, "induced metric", m.pass,
		   fmt("E=%.3e", m.max_rel_err_E) + fmt(" G=%.3e", m.max_rel_err_G) + fmt(" F=%.3e", m.max_F) +
			   fmt(" profile=%.3e", m.max_rel_err_profile));
}

template <class F>
void guarded(int id, const char* name, F&& f) {
	try {
		f();
	} catch (const std::exception& e) {
		report(id, name, false, std::string("exception: ") + e.what());
	}
}

}  // namespace

int main() {
	guarded(1, "hyperboloid oracle", hyperboloid_oracle);
	guarded(2, "rescaled family", rescaled_family);
	guarded(3, "barrier ODE", barrier_ode);
	guarded(4, "barrier limits", barrier_limits);
	guarded(5, "barrier as MA oracle", barrier_as_oracle);
	guarded(6, "earthquake identity", earthquake_identity);
	guarded(7, "weight-distance inequality", weight_distance);
	guarded(8, "sandwich", lamination_solves);
	guarded(9, "comparison principle", comparison);
	guarded(8, "sandwich", sandwich);
	for (const auto& p : pending) p();
	guarded(10, "induced metric", induced_metric);
	std::printf("%d criteria failed\n", failures);
	return failures == 0 ? 0 : 1;
}
