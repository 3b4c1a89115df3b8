#ifndef MINK_BARRIERS_HPP_
#define MINK_BARRIERS_HPP_

// Parabolic-invariant surfaces of constant curvature K < 0, parametrized by
// (t, s) through the Gauss map sigma(t, s) = A_t(gamma0(s)). The support
// function is H(sigma(t, s)) = f(s) with f solving
//   (f'' - f)(-f' - f) = 1/|K|,  g = -f' - f = sqrt(1/|K| + C e^{2s}).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mink/errors.hpp"
#include "mink/minkowski.hpp"

namespace mink {

struct BarrierParams {
	double K = -1.0;
	double C = 1.0;
	double D = 0.0;
	NullFrame frame = NullFrame::standard();
};

namespace detail {

inline double abs_k(const BarrierParams& p) { return -p.K; }

}  // namespace detail

/// D making e^s f(s) -> 0 as s -> -inf.
inline double barrier_normalized_D(double K, double C) {
	if (!(K < 0.0)) throw InvalidArgument("barrier needs K < 0");
	if (C > 0.0) return std::log(C / -K) / (4.0 * -K * std::sqrt(C));
	return 0.0;
}

inline BarrierParams make_barrier(double K, double C, const NullFrame& frame = NullFrame::standard()) {
	if (!(K < 0.0)) throw InvalidArgument("barrier needs K < 0");
	if (!std::isfinite(C)) throw InvalidArgument("barrier needs finite C");
	if (!frame.is_valid()) throw InvalidArgument("barrier frame is not a null frame");
	return {K, C, barrier_normalized_D(K, C), frame};
}

/// Upper end of the s-domain: +inf for C >= 0, (1/2) log(1/|CK|) for C < 0.
inline double barrier_s_max(const BarrierParams& p) {
	if (p.C >= 0.0) return std::numeric_limits<double>::infinity();
	return 0.5 * std::log(1.0 / (std::abs(p.C) * detail::abs_k(p)));
}

namespace detail {

inline void require_domain(double s, const BarrierParams& p) {
	if (!(p.K < 0.0)) throw InvalidArgument("barrier needs K < 0");
	if (!std::isfinite(s) || s > barrier_s_max(p)) throw DomainError("s outside the barrier domain");
}

inline double barrier_g_unchecked(double s, const BarrierParams& p) {
	const double a = 1.0 / abs_k(p);
	// C < 0: a + C e^{2s} = a (1 - e^{2(s - s_max)}), exact zero at the cap
	if (p.C < 0.0) return std::sqrt(std::max(0.0, -a * std::expm1(2.0 * (s - barrier_s_max(p)))));
	return std::sqrt(a + p.C * std::exp(2.0 * s));
}

/// A(s) with A' = kappa e^s / g and A(-inf) = 0.
inline double barrier_angle(double s, const BarrierParams& p) {
	if (p.C > 0.0) return std::asinh(std::sqrt(p.C * abs_k(p)) * std::exp(s));
	return std::atan2(std::exp(s - barrier_s_max(p)), std::sqrt(abs_k(p)) * barrier_g_unchecked(s, p));
}

}  // namespace detail

inline double barrier_g(double s, const BarrierParams& p) {
	detail::require_domain(s, p);
	return detail::barrier_g_unchecked(s, p);
}

inline double barrier_dg(double s, const BarrierParams& p) {
	const double g = barrier_g(s, p);
	return p.C == 0.0 ? 0.0 : p.C * std::exp(2.0 * s) / g;
}

inline double barrier_f(double s, const BarrierParams& p) {
	const double g = barrier_g(s, p);
	const double dd = p.D - barrier_normalized_D(p.K, p.C);
	if (p.C == 0.0) return -g + std::exp(-s) * dd;
	const double gamma = 1.0 / (2.0 * detail::abs_k(p) * std::sqrt(std::abs(p.C)));
	return -0.5 * g - gamma * std::exp(-s) * detail::barrier_angle(s, p) + std::exp(-s) * dd;
}

inline double barrier_df(double s, const BarrierParams& p) {
	const double g = barrier_g(s, p);
	const double dd = p.D - barrier_normalized_D(p.K, p.C);
	if (p.C == 0.0) return -std::exp(-s) * dd;
	const double kappa = std::sqrt(std::abs(p.C));
	const double gamma = 1.0 / (2.0 * detail::abs_k(p) * kappa);
	const double e2 = std::exp(2.0 * s);
	return -p.C * e2 / (2.0 * g) + gamma * std::exp(-s) * detail::barrier_angle(s, p) - gamma * kappa / g -
		   std::exp(-s) * dd;
}

inline double barrier_d2f(double s, const BarrierParams& p) {
	const double g = barrier_g(s, p);
	const double dd = p.D - barrier_normalized_D(p.K, p.C);
	if (p.C == 0.0) return std::exp(-s) * dd;
	const double kappa = std::sqrt(std::abs(p.C));
	const double gamma = 1.0 / (2.0 * detail::abs_k(p) * kappa);
	const double e2 = std::exp(2.0 * s);
	const double g3 = g * g * g;
	return -p.C * e2 / g + p.C * p.C * e2 * e2 / (2.0 * g3) - gamma * std::exp(-s) * detail::barrier_angle(s, p) +
		   gamma * kappa / g + gamma * kappa * p.C * e2 / g3 + std::exp(-s) * dd;
}

/// g + 2f without the cancellation between g and f at large s.
inline double barrier_g_plus_2f(double s, const BarrierParams& p) {
	const double g = barrier_g(s, p);
	const double dd = p.D - barrier_normalized_D(p.K, p.C);
	if (p.C == 0.0) return -g + 2.0 * std::exp(-s) * dd;
	const double gamma = 1.0 / (2.0 * detail::abs_k(p) * std::sqrt(std::abs(p.C)));
	return 2.0 * std::exp(-s) * (dd - gamma * detail::barrier_angle(s, p));
}

/// f continued past the cap (C < 0) by the solution of f'' = f through the cap value.
inline double barrier_f_extended(double s, const BarrierParams& p) {
	if (p.C >= 0.0 || s <= barrier_s_max(p)) return barrier_f(s, p);
	const double cap = barrier_s_max(p);
	return barrier_f(cap, p) * std::exp(cap - s);
}

/// Point beta v0 where the C < 0 surface meets the light cone.
inline MinkVec3 barrier_cone_point(const BarrierParams& p) {
	if (p.C >= 0.0) throw InvalidArgument("cone point exists only for C < 0");
	const double cap = barrier_s_max(p);
	const double beta = -std::numbers::sqrt2 * barrier_f(cap, p) * std::exp(cap);
	return p.frame.v0 * beta;
}

/// D recomputed from e^s f(s) = -int_{-inf}^s e^x g(x) dx at a reference s.
inline double barrier_D_quadrature(double K, double C) {
	const BarrierParams p{K, C, 0.0, NullFrame::standard()};
	const double sref = C < 0.0 ? std::min(0.0, barrier_s_max(p) - 1.0) : 0.0;
	const double a = 1.0 / -K;
	const auto integrand = [&](double x) { return std::exp(x) * std::sqrt(std::max(0.0, a + C * std::exp(2.0 * x))); };
	const double integral =
		boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -std::numeric_limits<double>::infinity(), sref, 15, 1e-14);
	const double es = std::exp(sref);
	const double g = std::sqrt(a + C * es * es);
	if (C == 0.0) return -integral + es * g;
	const double kappa = std::sqrt(std::abs(C));
	const double gamma = 1.0 / (2.0 * -K * kappa);
	const double lambda = C > 0.0 ? std::log(kappa * g + C * es) : std::atan(kappa * es / g);
	return -integral + 0.5 * es * g + gamma * lambda;
}

// ---------------------------------------------------------------------------
// ODE residual

enum class ResidualMode { Analytic, FiniteDifference };

/// (f'' - f)(-f' - f) - 1/|K|.
inline double ode_residual(double s, const BarrierParams& p, ResidualMode mode = ResidualMode::Analytic) {
	double df, d2f;
	const double f = barrier_f(s, p);
	if (mode == ResidualMode::Analytic) {
		df = barrier_df(s, p);
		d2f = barrier_d2f(s, p);
	} else {
		const double h = 1e-3;
		const auto F = [&](double x) { return barrier_f(x, p); };
		const double fm2 = F(s - 2 * h), fm1 = F(s - h), fp1 = F(s + h), fp2 = F(s + 2 * h);
		df = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
		d2f = (-fm2 + 16 * fm1 - 30 * f + 16 * fp1 - fp2) / (12 * h * h);
	}
	return (d2f - f) * (-df - f) - 1.0 / detail::abs_k(p);
}

// ---------------------------------------------------------------------------
// Embedding

/// Gauss map sigma(t, s) = A_t((sqrt2/2)(e^s v0 + e^{-s} v1)).
inline MinkVec3 barrier_normal(double t, double s, const BarrierParams& p) {
	const NullFrame& fr = p.frame;
	const double r = std::numbers::sqrt2 / 2.0;
	const double es = std::exp(s), ems = std::exp(-s);
	return (fr.v0 * (es + 0.5 * ems * t * t) + fr.v1 * ems + fr.v2 * (t * ems)) * r;
}

/// G^{-1}(sigma(t, s)) = (sqrt2/2)(-(g + 2f) e^s v0 + g e^{-s} A_t(v1)).
inline MinkVec3 barrier_surface_point(double t, double s, const BarrierParams& p) {
	const double g = barrier_g(s, p);
	const NullFrame& fr = p.frame;
	const double r = std::numbers::sqrt2 / 2.0;
	const double es = std::exp(s), ems = std::exp(-s);
	const MinkVec3 at_v1 = fr.v0 * (0.5 * t * t) + fr.v1 + fr.v2 * t;
	return (fr.v0 * (-barrier_g_plus_2f(s, p) * es) + at_v1 * (g * ems)) * r;
}

/// (t, s) with sigma(t, s) = klein_up(z).
inline std::array<double, 2> barrier_chart(const DiscPoint& z, const BarrierParams& p) {
	const MinkVec3 x = klein_up(z);
	const double q = -std::numbers::sqrt2 * inner(x, p.frame.v0);  // e^{-s}
	if (!(q > 0.0)) throw DomainError("chart inversion failed at the fixed null direction");
	const double s = -std::log(q);
	const double t = std::numbers::sqrt2 * inner(x, p.frame.v2) / q;
	return {t, s};
}

/// Support function in the disc chart, u(z) = f(s) sqrt(1 - |z|^2). For C < 0
/// the region beyond the cap carries the support of the cone point.
inline double barrier_support_on_disc(const DiscPoint& z, const BarrierParams& p) {
	const double s = barrier_chart(z, p)[1];
	return barrier_f_extended(s, p) * std::sqrt(1.0 - z.norm_sq());
}

/// Height of the surface over the horizontal point (p1, p2), by damped Newton in (t, s).
inline double barrier_graph_height(double p1, double p2, const BarrierParams& p) {
	if (p.C < 0.0) throw InvalidArgument("graph height is only provided for C >= 0");
	const double rr = std::sqrt(1.0 + p1 * p1 + p2 * p2);
	auto [t, s] = barrier_chart({p1 / rr, p2 / rr}, p);
	const auto residual = [&](double tt, double ss) {
		const MinkVec3 x = barrier_surface_point(tt, ss, p);
		return std::array<double, 2>{x.x1 - p1, x.x2 - p2};
	};
	auto r = residual(t, s);
	const double scale = std::max(1.0, std::hypot(p1, p2));
	for (int it = 0; it < 100 && std::hypot(r[0], r[1]) > 1e-13 * scale; ++it) {
		const double h = 1e-6;
		const auto rt = residual(t + h, s), rtm = residual(t - h, s);
		const auto rs = residual(t, s + h), rsm = residual(t, s - h);
		const double j00 = (rt[0] - rtm[0]) / (2 * h), j10 = (rt[1] - rtm[1]) / (2 * h);
		const double j01 = (rs[0] - rsm[0]) / (2 * h), j11 = (rs[1] - rsm[1]) / (2 * h);
		const double det = j00 * j11 - j01 * j10;
		if (std::abs(det) < 1e-300) throw DomainError("graph height: singular Jacobian");
		const double dt = -(j11 * r[0] - j01 * r[1]) / det;
		const double ds = -(-j10 * r[0] + j00 * r[1]) / det;
		double lam = 1.0;
		for (;;) {
			const auto trial = residual(t + lam * dt, s + lam * ds);
			if (std::hypot(trial[0], trial[1]) < std::hypot(r[0], r[1]) || lam < 1e-6) {
				t += lam * dt;
				s += lam * ds;
				r = trial;
				break;
			}
			lam *= 0.5;
		}
	}
	if (std::hypot(r[0], r[1]) > 1e-9 * scale) throw DomainError("graph height: Newton did not converge");
	return barrier_surface_point(t, s, p).x3;
}

// ---------------------------------------------------------------------------
// Induced metric

struct MetricSampling {
	double t_min = -2.0, t_max = 2.0;
	double s_min = -2.0, s_max = 2.0;  ///< clipped below the cap for C < 0
	int nt = 9, ns = 9;
	double step = 1e-5;
};

struct MetricReport {
	double max_rel_err_E = 0.0;  ///< against (f'' - f)^2
	double max_rel_err_G = 0.0;  ///< against e^{-2s} g^2 / 2
	double max_F = 0.0;          ///< |F| / sqrt(E G)
	double max_rel_err_profile = 0.0;  ///< G against (|C|/2) cosh^2 or sinh^2 of r sqrt|K|, and dr/ds against sqrt E
	bool pass = false;
};

/// Geodesic coordinate r(s) along the s-curves for C != 0.
inline double barrier_profile_r(double s, const BarrierParams& p) {
	const double k = detail::abs_k(p);
	if (p.C > 0.0) return std::atanh(1.0 / std::sqrt(1.0 + k * p.C * std::exp(2.0 * s))) / std::sqrt(k);
	if (p.C < 0.0) return std::atanh(std::sqrt(1.0 + k * p.C * std::exp(2.0 * s))) / std::sqrt(k);
	throw InvalidArgument("profile coordinate needs C != 0");
}

inline MetricReport induced_metric_check(const BarrierParams& p, const MetricSampling& m = {}, double tol = 1e-4) {
	MetricReport rep;
	const double smax = p.C < 0.0 ? std::min(m.s_max, barrier_s_max(p) - 0.25) : m.s_max;
	const double smin = std::min(m.s_min, smax - 1.0);
	const double k = detail::abs_k(p);
	const double h = m.step;
	for (int i = 0; i < m.nt; ++i) {
		const double t = m.t_min + (m.t_max - m.t_min) * i / std::max(1, m.nt - 1);
		for (int j = 0; j < m.ns; ++j) {
			const double s = smin + (smax - smin) * j / std::max(1, m.ns - 1);
			const MinkVec3 xt = (barrier_surface_point(t + h, s, p) - barrier_surface_point(t - h, s, p)) * (0.5 / h);
			const MinkVec3 xs = (barrier_surface_point(t, s + h, p) - barrier_surface_point(t, s - h, p)) * (0.5 / h);
			const double E = inner(xs, xs), F = inner(xs, xt), G = inner(xt, xt);
			const double f = barrier_f(s, p), d2f = barrier_d2f(s, p), g = barrier_g(s, p);
			const double Ee = (d2f - f) * (d2f - f);
			const double Ge = 0.5 * std::exp(-2.0 * s) * g * g;
			rep.max_rel_err_E = std::max(rep.max_rel_err_E, std::abs(E - Ee) / Ee);
			rep.max_rel_err_G = std::max(rep.max_rel_err_G, std::abs(G - Ge) / Ge);
			rep.max_F = std::max(rep.max_F, std::abs(F) / std::sqrt(std::abs(E * G)));
			if (p.C != 0.0) {
				const double r = barrier_profile_r(s, p);
				const double c = std::sqrt(k) * r;
				const double prof = 0.5 * std::abs(p.C) * (p.C > 0.0 ? std::cosh(c) * std::cosh(c) : std::sinh(c) * std::sinh(c));
				const double drds = (barrier_profile_r(s + h, p) - barrier_profile_r(s - h, p)) / (2 * h);
				rep.max_rel_err_profile = std::max(rep.max_rel_err_profile, std::abs(G - prof) / prof);
				rep.max_rel_err_profile =
					std::max(rep.max_rel_err_profile, std::abs(std::abs(drds) - std::sqrt(E)) / std::sqrt(E));
			}
		}
	}
	rep.pass = rep.max_rel_err_E < tol && rep.max_rel_err_G < tol && rep.max_F < tol && rep.max_rel_err_profile < tol;
	return rep;
}

}  // namespace mink

#endif  // MINK_BARRIERS_HPP_
