#ifndef MINK_MA_SOLVER_HPP_
#define MINK_MA_SOLVER_HPP_

// Finite-difference Newton solver for
//   det D^2 u = (1/psi(z)) (1 - |z|^2)^{-2}   on |z| <= R,  u = ring data outside,
// with a monotone wide-stencil fallback, and the checks built on it.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mink/envelope.hpp"
#include "mink/errors.hpp"
#include "mink/grid.hpp"
#include "mink/minkowski.hpp"
#include "mink/support.hpp"

namespace mink {

/// RingExtension: the ring function itself, evaluated inside (convex for the
/// provided ring rules). EnvelopeMinusCT: h - (1/sqrt a) sqrt(1 - |z|^2); its
/// jump against the ring usually sends the first phase to the wide stencil.
enum class InitMode { RingExtension, EnvelopeMinusCT };

struct SolverConfig {
	double R = 0.9;
	int n = 257;
	int directions = 8;  ///< wide-stencil direction count: 4, 8 or 16
	double newton_tol = 1e-9;
	int max_iters = 60;
	double damping = 1.0;  ///< initial step length of the line search
	InitMode init = InitMode::RingExtension;
	int threads = 0;              ///< 0: MINK_THREADS or 1
	bool fallback_first = false;  ///< run the wide-stencil phase before the standard one

	void validate() const {
		if (!(R > 0.0 && R < 1.0)) throw InvalidArgument("solver radius must lie in (0, 1)");
		if (n < 33 || n % 2 == 0) throw InvalidArgument("solver needs an odd n >= 33");
		if (directions != 4 && directions != 8 && directions != 16)
			throw InvalidArgument("directions must be 4, 8 or 16");
		if (!(newton_tol > 0.0)) throw InvalidArgument("newton tolerance must be positive");
		if (max_iters < 1) throw InvalidArgument("max_iters must be positive");
		if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
	}

	int reach() const { return directions == 4 ? 1 : (directions == 8 ? 2 : 3); }
	GridSpec grid_spec() const { return {R, n, reach()}; }
};

/// psi with bounds 0 < a <= psi <= b.
class CurvatureField {
public:
	CurvatureField(std::function<double(const DiscPoint&)> psi, double a, double b)
		: psi_(std::move(psi)), a_(a), b_(b) {
		if (!psi_) throw InvalidArgument("curvature field needs a function");
		if (!(a > 0.0) || !(b >= a) || !std::isfinite(b)) throw InvalidArgument("curvature bounds need 0 < a <= b < inf");
	}

	static CurvatureField constant(double value) {
		return CurvatureField([value](const DiscPoint&) { return value; }, value, value);
	}

	double operator()(const DiscPoint& z) const { return psi_(z); }
	double a() const { return a_; }
	double b() const { return b_; }

private:
	std::function<double(const DiscPoint&)> psi_;
	double a_;
	double b_;
};

/// Dirichlet data, evaluated at the actual ring nodes.
struct RingData {
	std::function<double(const DiscPoint&)> value;
	std::function<double(const DiscPoint&)> envelope;  ///< optional, used by InitMode::EnvelopeMinusCT

	static RingData exact(std::function<double(const DiscPoint&)> f) { return {std::move(f), {}}; }

	/// h - (c / sqrt a) sqrt(1 - |z|^2) with h the convex envelope of phi.
	static RingData envelope_offset(const BoundaryFn& phi, double a, double c) {
		if (!(a > 0.0)) throw InvalidArgument("ring needs a > 0");
		auto env = std::make_shared<const ConvexEnvelope>(phi);
		const double k = c / std::sqrt(a);
		return {[env, k](const DiscPoint& z) { return (*env)(z) - k * std::sqrt(std::max(0.0, 1.0 - z.norm_sq())); },
				[env](const DiscPoint& z) { return (*env)(z); }};
	}
	static RingData envelope_midpoint(const BoundaryFn& phi, double a) { return envelope_offset(phi, a, 0.5); }
	static RingData envelope_lower(const BoundaryFn& phi, double a) { return envelope_offset(phi, a, 1.0); }

	/// Values at angles 2 pi k / N, interpolated along the arc and constant in the radius.
	static RingData from_angular_samples(std::vector<double> samples) {
		if (samples.size() < 3) throw InvalidArgument("angular ring data needs at least 3 samples");
		auto v = std::make_shared<const std::vector<double>>(std::move(samples));
		return exact([v](const DiscPoint& z) {
			const int n = static_cast<int>(v->size());
			const double f = canonical_angle(std::atan2(z.z2, z.z1)) / kTwoPi * n;
			const int k = std::min(static_cast<int>(std::floor(f)), n - 1);
			const double t = f - k;
			return (1.0 - t) * (*v)[k] + t * (*v)[(k + 1) % n];
		});
	}
};

struct IterationRecord {
	std::string phase;  ///< "standard" or "wide"
	int iteration = 0;
	double residual = 0.0;  ///< max-norm after the step
	double damping = 0.0;   ///< accepted step length (0 for the initial state)
};

struct SolveResult {
	GridSupportFn u;
	std::vector<IterationRecord> log;
	double residual = 0.0;
	int iterations = 0;
	bool used_fallback = false;
};

namespace detail {

inline int solver_threads(const SolverConfig& cfg) {
	if (cfg.threads > 0) return cfg.threads;
	if (const char* env = std::getenv("MINK_THREADS")) {
		const int t = std::atoi(env);
		if (t > 0) return t;
	}
	return 1;
}

/// Runs body(begin, end) over [0, count) split in contiguous blocks.
template <class Body>
void parallel_blocks(std::size_t count, int threads, const Body& body) {
	if (threads <= 1 || count < 1024) {
		body(std::size_t{0}, count);
		return;
	}
	std::vector<std::thread> pool;
	const std::size_t chunk = (count + threads - 1) / threads;
	for (int t = 0; t < threads; ++t) {
		const std::size_t b = std::min(count, t * chunk), e = std::min(count, b + chunk);
		if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
	}
	for (auto& th : pool) th.join();
}

struct Direction {
	int di, dj;
};

/// Orthogonal direction pairs of the wide stencil.
inline std::vector<std::pair<Direction, Direction>> direction_pairs(int directions) {
	std::vector<std::pair<Direction, Direction>> p{{{1, 0}, {0, 1}}, {{1, 1}, {-1, 1}}};
	if (directions >= 8) {
		p.push_back({{2, 1}, {-1, 2}});
		p.push_back({{1, 2}, {-2, 1}});
	}
	if (directions >= 16) {
		p.push_back({{3, 1}, {-1, 3}});
		p.push_back({{1, 3}, {-3, 1}});
		p.push_back({{3, 2}, {-2, 3}});
		p.push_back({{2, 3}, {-3, 2}});
	}
	return p;
}

/// Discrete operator on the interior unknowns.
class MongeAmpereSystem {
public:
	MongeAmpereSystem(std::shared_ptr<const Grid> grid, const CurvatureField& psi, int directions, int threads)
		: grid_(std::move(grid)), threads_(threads), pairs_(direction_pairs(directions)) {
		const Grid& g = *grid_;
		slot_.assign(g.node_count(), -1);
		for (std::size_t m = 0; m < g.interior().size(); ++m) slot_[g.interior()[m]] = static_cast<long>(m);
		rhs_.resize(g.interior().size());
		for (std::size_t m = 0; m < rhs_.size(); ++m) {
			const DiscPoint z = g.point(g.interior()[m]);
			const double p = psi(z);
			if (!(p >= psi.a() * (1.0 - 1e-12) && p <= psi.b() * (1.0 + 1e-12)))
				throw InvalidArgument("psi leaves its declared bounds [a, b]");
			const double w = 1.0 - z.norm_sq();
			rhs_[m] = 1.0 / (p * w * w);
		}
	}

	std::size_t unknowns() const { return rhs_.size(); }
	const Grid& grid() const { return *grid_; }
	double rhs(std::size_t m) const { return rhs_[m]; }

	struct Second {
		double xx, yy, xy;
		double det() const { return xx * yy - xy * xy; }
	};

	Second second(const std::vector<double>& u, std::size_t k) const {
		const Grid& g = *grid_;
		const int i = g.col(k), j = g.row(k);
		const double h2 = g.h() * g.h();
		const double c = u[k];
		const auto at = [&](int di, int dj) { return u[g.index(i + di, j + dj)]; };
		return {(at(1, 0) + at(-1, 0) - 2.0 * c) / h2, (at(0, 1) + at(0, -1) - 2.0 * c) / h2,
				(at(1, 1) + at(-1, -1) - at(-1, 1) - at(1, -1)) / (4.0 * h2)};
	}

	/// Directional second difference along (di, dj), per unit length squared.
	double directional(const std::vector<double>& u, std::size_t k, const Direction& d) const {
		const Grid& g = *grid_;
		const int i = g.col(k), j = g.row(k);
		const double len2 = (d.di * d.di + d.dj * d.dj) * g.h() * g.h();
		return (u[g.index(i + d.di, j + d.dj)] + u[g.index(i - d.di, j - d.dj)] - 2.0 * u[k]) / len2;
	}

	/// Active pair and its product for the wide operator; ties go to the lowest index.
	std::pair<std::size_t, double> wide_active(const std::vector<double>& u, std::size_t k) const {
		std::size_t best = 0;
		double val = std::numeric_limits<double>::infinity();
		for (std::size_t p = 0; p < pairs_.size(); ++p) {
			const double a = std::max(0.0, directional(u, k, pairs_[p].first));
			const double b = std::max(0.0, directional(u, k, pairs_[p].second));
			if (a * b < val) {
				val = a * b;
				best = p;
			}
		}
		return {best, val};
	}

	std::vector<double> residual(const std::vector<double>& u, bool wide) const {
		const auto& inner_nodes = grid_->interior();
		std::vector<double> F(inner_nodes.size());
		parallel_blocks(F.size(), threads_, [&](std::size_t b, std::size_t e) {
			for (std::size_t m = b; m < e; ++m) {
				const std::size_t k = inner_nodes[m];
				const double lhs = wide ? wide_active(u, k).second : second(u, k).det();
				F[m] = lhs - rhs_[m];
			}
		});
		return F;
	}

	bool convex(const std::vector<double>& u) const {
		for (std::size_t k : grid_->interior()) {
			const Second s = second(u, k);
			if (!(s.xx > 0.0 && s.yy > 0.0 && s.det() > 0.0)) return false;
		}
		return true;
	}

	Eigen::SparseMatrix<double> jacobian(const std::vector<double>& u, bool wide) const {
		const Grid& g = *grid_;
		const auto& inner_nodes = g.interior();
		const double h2 = g.h() * g.h();
		std::vector<Eigen::Triplet<double>> trip;
		trip.reserve(inner_nodes.size() * 9);
		const auto add = [&](std::size_t m, int i, int j, double w) {
			const long col = slot_[g.index(i, j)];
			if (col >= 0 && w != 0.0) trip.emplace_back(static_cast<int>(m), static_cast<int>(col), w);
		};
		for (std::size_t m = 0; m < inner_nodes.size(); ++m) {
			const std::size_t k = inner_nodes[m];
			const int i = g.col(k), j = g.row(k);
			if (!wide) {
				const Second s = second(u, k);
				// d det = uyy d uxx + uxx d uyy - 2 uxy d uxy
				add(m, i + 1, j, s.yy / h2);
				add(m, i - 1, j, s.yy / h2);
				add(m, i, j + 1, s.xx / h2);
				add(m, i, j - 1, s.xx / h2);
				add(m, i, j, -2.0 * (s.xx + s.yy) / h2);
				const double c = -2.0 * s.xy / (4.0 * h2);
				add(m, i + 1, j + 1, c);
				add(m, i - 1, j - 1, c);
				add(m, i - 1, j + 1, -c);
				add(m, i + 1, j - 1, -c);
			} else {
				const auto [p, val] = wide_active(u, k);
				(void)val;
				const Direction& e1 = pairs_[p].first;
				const Direction& e2 = pairs_[p].second;
				const double a = directional(u, k, e1), b = directional(u, k, e2);
				const double l1 = (e1.di * e1.di + e1.dj * e1.dj) * h2;
				const double l2 = (e2.di * e2.di + e2.dj * e2.dj) * h2;
				// one-sided derivative of max(., 0) taken from the positive side
				const double wa = std::max(b, 0.0) / l1, wb = std::max(a, 0.0) / l2;
				add(m, i + e1.di, j + e1.dj, wa);
				add(m, i - e1.di, j - e1.dj, wa);
				add(m, i + e2.di, j + e2.dj, wb);
				add(m, i - e2.di, j - e2.dj, wb);
				add(m, i, j, -2.0 * (wa + wb));
			}
		}
		Eigen::SparseMatrix<double> J(static_cast<int>(inner_nodes.size()), static_cast<int>(inner_nodes.size()));
		J.setFromTriplets(trip.begin(), trip.end());
		return J;
	}

private:
	std::shared_ptr<const Grid> grid_;
	int threads_;
	std::vector<std::pair<Direction, Direction>> pairs_;
	std::vector<long> slot_;
	std::vector<double> rhs_;
};

inline double max_abs(const std::vector<double>& v) {
	double m = 0.0;
	for (double x : v) m = std::max(m, std::abs(x));
	return m;
}

inline double norm2(const std::vector<double>& v) {
	double s = 0.0;
	for (double x : v) s += x * x;
	return std::sqrt(s);
}

/// Damped Newton on one discretization; returns true when the max residual reaches tol.
inline bool newton_phase(const MongeAmpereSystem& sys, std::vector<double>& u, bool wide, double tol,
						 const SolverConfig& cfg, std::vector<IterationRecord>& log, int& iterations) {
	const auto& nodes = sys.grid().interior();
	const char* phase = wide ? "wide" : "standard";
	std::vector<double> F = sys.residual(u, wide);
	double res = max_abs(F);
	log.push_back({phase, 0, res, 0.0});
	if (res <= tol) return true;
	Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
	bool analyzed = false;
	for (int it = 1; it <= cfg.max_iters; ++it) {
		const Eigen::SparseMatrix<double> J = sys.jacobian(u, wide);
		if (!analyzed) {
			lu.analyzePattern(J);
			analyzed = true;
		}
		lu.factorize(J);
		if (lu.info() != Eigen::Success) return false;
		Eigen::VectorXd rhs(static_cast<int>(F.size()));
		for (std::size_t m = 0; m < F.size(); ++m) rhs(static_cast<int>(m)) = -F[m];
		const Eigen::VectorXd step = lu.solve(rhs);
		if (lu.info() != Eigen::Success || !step.allFinite()) return false;

		const bool keep_convex = !wide && sys.convex(u);
		const double base = norm2(F);
		double lam = cfg.damping;
		std::vector<double> trial = u;
		bool accepted = false;
		while (lam >= 1e-4) {
			for (std::size_t m = 0; m < nodes.size(); ++m) trial[nodes[m]] = u[nodes[m]] + lam * step(static_cast<int>(m));
			if (!keep_convex || sys.convex(trial)) {
				std::vector<double> Ft = sys.residual(trial, wide);
				if (norm2(Ft) < (1.0 - 1e-4 * lam) * base) {
					u.swap(trial);
					F.swap(Ft);
					accepted = true;
					break;
				}
			}
			lam *= 0.5;
		}
		if (!accepted) return false;
		++iterations;
		res = max_abs(F);
		log.push_back({phase, it, res, lam});
		if (res <= tol) return true;
	}
	return false;
}

}  // namespace detail

/// Solves the Dirichlet problem; throws ConvergenceError with the iteration trace on failure.
inline SolveResult solve(const CurvatureField& psi, const RingData& ring, const SolverConfig& cfg) {
	cfg.validate();
	if (!ring.value) throw InvalidArgument("ring data needs a value function");
	const auto grid = std::make_shared<const Grid>(cfg.grid_spec());
	const detail::MongeAmpereSystem sys(grid, psi, cfg.directions, detail::solver_threads(cfg));

	std::vector<double> u(grid->node_count(), std::numeric_limits<double>::quiet_NaN());
	for (std::size_t k : grid->ring()) u[k] = ring.value(grid->point(k));
	const double inv = 1.0 / std::sqrt(psi.a());
	if (cfg.init == InitMode::RingExtension) {
		for (std::size_t k : grid->interior()) u[k] = ring.value(grid->point(k));
	} else {
		if (!ring.envelope) throw InvalidArgument("envelope initialization needs ring data with an envelope");
		for (std::size_t k : grid->interior()) {
			const DiscPoint z = grid->point(k);
			u[k] = ring.envelope(z) - inv * std::sqrt(1.0 - z.norm_sq());
		}
	}
	for (std::size_t k : grid->ring())
		if (!std::isfinite(u[k])) throw InvalidArgument("ring data is not finite");
	for (std::size_t k : grid->interior())
		if (!std::isfinite(u[k])) throw InvalidArgument("initial guess is not finite");

	SolveResult res;
	bool done = false;
	if (!cfg.fallback_first && sys.convex(u)) done = detail::newton_phase(sys, u, false, cfg.newton_tol, cfg, res.log, res.iterations);
	if (!done) {
		res.used_fallback = true;
		detail::newton_phase(sys, u, true, cfg.newton_tol, cfg, res.log, res.iterations);
		done = detail::newton_phase(sys, u, false, cfg.newton_tol, cfg, res.log, res.iterations);
	}
	res.residual = res.log.empty() ? 0.0 : res.log.back().residual;
	if (!done) {
		std::ostringstream msg;
		msg << "Monge-Ampere solve did not converge (tol " << cfg.newton_tol << ")";
		for (const auto& r : res.log) msg << "\n  " << r.phase << " " << r.iteration << " " << r.residual << " " << r.damping;
		throw ConvergenceError(msg.str());
	}
	res.u = GridSupportFn(grid, std::move(u));
	return res;
}

// ---------------------------------------------------------------------------
// Diagnostics

/// det D^2 u - (1/psi)(1 - |z|^2)^{-2} at interior nodes, NaN elsewhere.
inline GridFunction residual(const GridSupportFn& u, const CurvatureField& psi) {
	const Grid& g = u.grid();
	std::vector<double> r(g.node_count(), std::numeric_limits<double>::quiet_NaN());
	for (std::size_t k : g.interior()) {
		const DiscPoint z = g.point(k);
		const double w = 1.0 - z.norm_sq();
		r[k] = make_stencil(u, z).hessian_det() - 1.0 / (psi(z) * w * w);
	}
	return GridFunction(u.grid_ptr(), std::move(r));
}

inline double max_abs_interior(const GridFunction& f) {
	double m = 0.0;
	for (std::size_t k : f.grid().interior()) m = std::max(m, std::abs(f[k]));
	return m;
}

/// psi_est = 1 / ((1 - |z|^2)^2 det D^2 u) at interior nodes.
inline GridFunction curvature_recovery(const GridSupportFn& u) {
	const Grid& g = u.grid();
	std::vector<double> r(g.node_count(), std::numeric_limits<double>::quiet_NaN());
	for (std::size_t k : g.interior()) r[k] = -curvature(make_stencil(u, g.point(k)));
	return GridFunction(u.grid_ptr(), std::move(r));
}

struct SandwichReport {
	double tol = 0.0;
	double upper_violation = 0.0;  ///< max(u - h)
	double lower_violation = 0.0;  ///< max(h - c sqrt(1-|z|^2) - u)
	std::size_t worst_node = 0;
	bool pass = false;
};

/// Checks h - (1/sqrt a) sqrt(1 - |z|^2) - tol <= u <= h + tol on all defined nodes.
/// tol < 0 selects 10 h^2 max(1, max |ring|).
inline SandwichReport sandwich_check(const GridSupportFn& u, const BoundaryFn& phi, double a, double tol = -1.0) {
	if (!(a > 0.0)) throw InvalidArgument("sandwich check needs a > 0");
	const Grid& g = u.grid();
	const ConvexEnvelope env(phi);
	SandwichReport rep;
	if (tol < 0.0) {
		double ring_max = 1.0;
		for (std::size_t k : g.ring()) ring_max = std::max(ring_max, std::abs(u[k]));
		tol = 10.0 * g.h() * g.h() * ring_max;
	}
	rep.tol = tol;
	rep.upper_violation = rep.lower_violation = -std::numeric_limits<double>::infinity();
	double worst = -std::numeric_limits<double>::infinity();
	const double c = 1.0 / std::sqrt(a);
	for (std::size_t k = 0; k < g.node_count(); ++k) {
		if (g.kind(k) == NodeKind::Outside) continue;
		const DiscPoint z = g.point(k);
		const double h = env(z);
		const double up = u[k] - h;
		const double lo = h - c * std::sqrt(1.0 - z.norm_sq()) - u[k];
		rep.upper_violation = std::max(rep.upper_violation, up);
		rep.lower_violation = std::max(rep.lower_violation, lo);
		if (std::max(up, lo) > worst) {
			worst = std::max(up, lo);
			rep.worst_node = k;
		}
	}
	rep.pass = rep.upper_violation <= tol && rep.lower_violation <= tol;
	return rep;
}

struct ComparisonReport {
	double interior_min = 0.0;
	double boundary_min = 0.0;
	bool pass = false;
};

/// Interior minimum of u1 - u2 against its minimum over the ring.
inline ComparisonReport comparison_check(const GridSupportFn& u1, const GridSupportFn& u2, double tol = 1e-9) {
	if (u1.grid_ptr() != u2.grid_ptr() && u1.grid().spec().n != u2.grid().spec().n)
		throw InvalidArgument("comparison needs functions on the same grid");
	const Grid& g = u1.grid();
	ComparisonReport rep;
	rep.interior_min = rep.boundary_min = std::numeric_limits<double>::infinity();
	for (std::size_t k : g.interior()) rep.interior_min = std::min(rep.interior_min, u1[k] - u2[k]);
	for (std::size_t k : g.ring()) rep.boundary_min = std::min(rep.boundary_min, u1[k] - u2[k]);
	rep.pass = rep.interior_min >= rep.boundary_min - tol;
	return rep;
}

// ---------------------------------------------------------------------------
// Foliation and continuation

struct FoliationResult {
	std::vector<double> Ks;
	std::vector<SolveResult> solutions;
	double worst_violation = 0.0;  ///< max over pairs K1 < K2 of u_{K2} - u_{K1}
	std::size_t worst_node = 0;
	std::pair<std::size_t, std::size_t> worst_pair{0, 0};
	bool monotone = true;
};

/// Solves psi = |K| for each K (strictly increasing, all negative) and checks
/// u_{K2} <= u_{K1} + tol. The ring defaults to the envelope midpoint.
inline FoliationResult foliation_sweep(const BoundaryFn& phi, const std::vector<double>& Ks, const SolverConfig& cfg,
									   const std::function<RingData(double)>& ring_for = {}, double tol = 1e-9) {
	for (std::size_t i = 0; i < Ks.size(); ++i) {
		if (!(Ks[i] < 0.0)) throw InvalidArgument("foliation needs K < 0");
		if (i > 0 && !(Ks[i] > Ks[i - 1])) throw InvalidArgument("foliation needs strictly increasing K");
	}
	FoliationResult out;
	out.Ks = Ks;
	for (double K : Ks) {
		const RingData ring = ring_for ? ring_for(K) : RingData::envelope_midpoint(phi, -K);
		out.solutions.push_back(solve(CurvatureField::constant(-K), ring, cfg));
	}
	out.worst_violation = -std::numeric_limits<double>::infinity();
	for (std::size_t a = 0; a < Ks.size(); ++a) {
		for (std::size_t b = a + 1; b < Ks.size(); ++b) {
			const GridSupportFn& u1 = out.solutions[a].u;
			const GridSupportFn& u2 = out.solutions[b].u;
			for (std::size_t k = 0; k < u1.grid().node_count(); ++k) {
				if (u1.grid().kind(k) == NodeKind::Outside) continue;
				const double d = u2[k] - u1[k];
				if (d > out.worst_violation) {
					out.worst_violation = d;
					out.worst_node = k;
					out.worst_pair = {a, b};
				}
			}
		}
	}
	if (Ks.size() < 2) out.worst_violation = 0.0;
	out.monotone = out.worst_violation <= tol;
	return out;
}

struct ContinuationResult {
	std::vector<double> radii;
	std::vector<SolveResult> solutions;
	std::vector<double> discrepancy;  ///< max |u_{R_i} - u_{R_{i+1}}| on the interior of R_i
};

/// Solves on a sequence of radii and reports how much consecutive solutions disagree.
inline ContinuationResult solve_continuation(const CurvatureField& psi, const RingData& ring, SolverConfig cfg,
											 const std::vector<double>& radii = {0.8, 0.9, 0.95}) {
	ContinuationResult out;
	out.radii = radii;
	for (double R : radii) {
		cfg.R = R;
		out.solutions.push_back(solve(psi, ring, cfg));
	}
	for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
		const GridSupportFn& a = out.solutions[i].u;
		const GridSupportFn& b = out.solutions[i + 1].u;
		double d = 0.0;
		for (std::size_t k : a.grid().interior()) {
			const DiscPoint z = a.grid().point(k);
			if (z.norm() > radii[i + 1]) continue;
			d = std::max(d, std::abs(a[k] - b.interpolate(z)));
		}
		out.discrepancy.push_back(d);
	}
	return out;
}

}  // namespace mink

#endif  // MINK_MA_SOLVER_HPP_
