#ifndef MINKCTL_APP_HPP_
#define MINKCTL_APP_HPP_

// minkctl: subcommands over the mink library. run() is the whole program;
// main() only forwards argv so tests can drive it in-process.
//
// Exit codes: 0 ok, 1 a check failed, 2 non-convergence or monotonicity
// failure, 3 invalid input.

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include <boost/version.hpp>
#include <Eigen/Core>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mink/barriers.hpp"
#include "mink/io.hpp"
#include "mink/lamination.hpp"
#include "mink/ma_solver.hpp"
#include "mink/support.hpp"

namespace minkctl {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kCheckFailed = 1, kSolveFailed = 2, kInvalidInput = 3 };

using json = nlohmann::json;
namespace fs = std::filesystem;

inline std::string sha256_file(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw mink::InvalidArgument("cannot open " + path);
	EVP_MD_CTX* ctx = EVP_MD_CTX_new();
	EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
	char buf[1 << 14];
	while (in) {
		in.read(buf, sizeof buf);
		EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
	}
	unsigned char md[EVP_MAX_MD_SIZE];
	unsigned int len = 0;
	EVP_DigestFinal_ex(ctx, md, &len);
	EVP_MD_CTX_free(ctx);
	std::ostringstream hex;
	for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
	return hex.str();
}

inline json versions() {
	return {{"minkctl", kVersion},
			{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
						  std::to_string(EIGEN_MINOR_VERSION)},
			{"boost", BOOST_LIB_VERSION},
			{"openssl", OPENSSL_VERSION_TEXT},
			{"compiler", __VERSION__}};
}

/// Manifest record of one run, filled in by the command.
struct Run {
	std::ostream& out;
	std::ostream& err;
	json inputs = json::array();
	json outputs = json::array();
	json convergence = json::object();
	fs::path out_dir = ".";

	void input(const std::string& role, const std::string& path) {
		inputs.push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
	}
	std::string output_path(const std::string& name) {
		fs::create_directories(out_dir);
		const std::string p = (out_dir / name).string();
		outputs.push_back(p);
		return p;
	}
	std::ofstream open(const std::string& name) {
		std::ofstream f(output_path(name));
		if (!f) throw mink::InvalidArgument("cannot write " + (out_dir / name).string());
		return f;
	}
};

inline const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

inline std::string num(double v) { return mink::io::format_double(v); }

// ---------------------------------------------------------------------------
// Shared input handling

struct PsiSpec {
	mink::CurvatureField field;
	std::optional<double> constant;
};

/// `const:V` or `ramp:c0:c1:c2` for c0 + c1 z1 + c2 z2.
inline PsiSpec parse_psi(const std::string& text) {
	const auto parts = mink::io::detail::split(text, ":");
	std::vector<double> v;
	for (std::size_t i = 1; i < parts.size(); ++i) {
		double x;
		if (!mink::io::detail::parse_number(parts[i], x)) throw mink::InvalidArgument("bad --psi value: " + text);
		v.push_back(x);
	}
	if (!parts.empty() && parts[0] == "const" && v.size() == 1) {
		if (!(v[0] > 0.0)) throw mink::InvalidArgument("--psi const needs a positive value");
		return {mink::CurvatureField::constant(v[0]), v[0]};
	}
	if (!parts.empty() && parts[0] == "ramp" && v.size() == 3) {
		const double slope = std::hypot(v[1], v[2]);
		const double c0 = v[0], c1 = v[1], c2 = v[2];
		return {mink::CurvatureField([c0, c1, c2](const mink::DiscPoint& z) { return c0 + c1 * z.z1 + c2 * z.z2; },
									 c0 - slope, c0 + slope),
				std::nullopt};
	}
	throw mink::InvalidArgument("--psi must be const:V or ramp:c0:c1:c2, got " + text);
}

struct BoundaryOptions {
	std::string boundary;
	std::string lamination;
	std::vector<double> x0{0.0, 0.0};
	int samples = 1024;

	void add(CLI::App* app) {
		auto* b = app->add_option("--boundary", boundary, "`zero` or a theta,phi CSV file");
		auto* l = app->add_option("--lamination", lamination, ".lam file; phi is the Mess boundary trace")
					  ->check(CLI::ExistingFile);
		b->excludes(l);
		app->add_option("--x0", x0, "base point z1,z2 in the Klein disc")->delimiter(',')->expected(2)
			->capture_default_str();
		app->add_option("--samples", samples, "boundary samples")->capture_default_str();
	}
};

struct BoundaryInput {
	mink::BoundaryFn phi;
	bool zero = false;
};

inline mink::MinkVec3 base_point(const std::vector<double>& x0) {
	const mink::DiscPoint z{x0.at(0), x0.at(1)};
	if (!(z.norm() < 1.0)) throw mink::InvalidArgument("--x0 must lie inside the unit disc");
	return mink::klein_up(z);
}

inline mink::MeasuredLamination checked_lamination(const std::string& path) {
	mink::MeasuredLamination mu = mink::io::load_lamination(path);
	const auto rep = mink::validate(mu);
	if (!rep.crossings.empty())
		throw mink::InvalidArgument("leaves " + std::to_string(rep.crossings[0].first + 1) + " and " +
									std::to_string(rep.crossings[0].second + 1) + " cross");
	return mu;
}

inline BoundaryInput load_boundary(const BoundaryOptions& o, Run& run) {
	if (o.boundary.empty() && o.lamination.empty())
		throw mink::InvalidArgument("one of --boundary or --lamination is required");
	if (!o.lamination.empty()) {
		run.input("lamination", o.lamination);
		const mink::DomainOfDependence d(checked_lamination(o.lamination), base_point(o.x0));
		return {mink::mess_boundary_fn(d, o.samples), false};
	}
	if (o.boundary == "zero") return {mink::BoundaryFn::sample([](double) { return 0.0; }, o.samples), true};
	run.input("boundary", o.boundary);
	return {mink::io::load_boundary_csv(o.boundary, o.samples), false};
}

struct SolverOptions {
	double R = 0.9;
	int n = 257;
	int directions = 8;
	double tol = 1e-9;
	int max_iters = 60;
	double damping = 1.0;
	std::string init = "ring";
	std::string ring = "auto";

	void add(CLI::App* app) {
		app->add_option("--R", R, "solve radius")->capture_default_str();
		app->add_option("--n", n, "grid points per side (odd)")->capture_default_str();
		app->add_option("--directions", directions, "wide-stencil directions: 4, 8 or 16")->capture_default_str();
		app->add_option("--newton-tol", tol, "residual tolerance")->capture_default_str();
		app->add_option("--max-iters", max_iters)->capture_default_str();
		app->add_option("--damping", damping, "initial step length")->capture_default_str();
		app->add_option("--init", init)->check(CLI::IsMember({"ring", "envelope"}))->capture_default_str();
		app->add_option("--ring", ring, "auto: exact for zero boundary and constant psi, else midpoint")
			->check(CLI::IsMember({"auto", "exact", "midpoint", "lower"}))
			->capture_default_str();
	}

	mink::SolverConfig config() const {
		mink::SolverConfig c;
		c.R = R;
		c.n = n;
		c.directions = directions;
		c.newton_tol = tol;
		c.max_iters = max_iters;
		c.damping = damping;
		c.init = init == "ring" ? mink::InitMode::RingExtension : mink::InitMode::EnvelopeMinusCT;
		c.validate();
		return c;
	}
};

/// Exact hyperboloid of curvature -a, the solution for zero boundary data.
inline std::function<double(const mink::DiscPoint&)> hyperboloid(double a) {
	const double c = 1.0 / std::sqrt(a);
	return [c](const mink::DiscPoint& z) { return -c * std::sqrt(std::max(0.0, 1.0 - z.norm_sq())); };
}

inline mink::RingData make_ring(const std::string& rule, const BoundaryInput& b, double a, bool constant_psi) {
	std::string r = rule;
	if (r == "auto") r = b.zero && constant_psi ? "exact" : "midpoint";
	if (r == "exact") {
		if (!b.zero || !constant_psi) throw mink::InvalidArgument("--ring exact needs --boundary zero and a constant psi");
		mink::RingData ring = mink::RingData::exact(hyperboloid(a));
		ring.envelope = [](const mink::DiscPoint&) { return 0.0; };
		return ring;
	}
	return r == "lower" ? mink::RingData::envelope_lower(b.phi, a) : mink::RingData::envelope_midpoint(b.phi, a);
}

inline json convergence_json(const mink::SolveResult& r) {
	return {{"iterations", r.iterations}, {"residual", r.residual}, {"used_fallback", r.used_fallback}};
}

// ---------------------------------------------------------------------------
// solve

struct SolveCmd {
	std::string psi = "const:1";
	BoundaryOptions boundary;
	SolverOptions solver;
	double exact_tol = 5e-3;

	void add(CLI::App* app) {
		app->add_option("--psi", psi, "const:V or ramp:c0:c1:c2")->capture_default_str();
		boundary.add(app);
		solver.add(app);
		app->add_option("--exact-tol", exact_tol, "max error against the hyperboloid for exact rings")
			->capture_default_str();
	}

	int run(Run& run) const {
		const PsiSpec ps = parse_psi(psi);
		const BoundaryInput b = load_boundary(boundary, run);
		const mink::SolverConfig cfg = solver.config();
		const mink::RingData ring = make_ring(solver.ring, b, ps.field.a(), ps.constant.has_value());
		const mink::SolveResult res = mink::solve(ps.field, ring, cfg);
		run.convergence = convergence_json(res);

		const auto& u = res.u;
		const auto& g = u.grid();
		std::vector<double> det(g.node_count(), std::numeric_limits<double>::quiet_NaN());
		for (std::size_t k : g.interior()) det[k] = mink::make_stencil(u, g.point(k)).hessian_det();
		const mink::GridFunction det_fn(u.grid_ptr(), std::move(det));
		const mink::GridFunction psi_est = mink::curvature_recovery(u);
		double psi_err = 0.0;
		for (std::size_t k : g.interior()) psi_err = std::max(psi_err, std::abs(psi_est[k] / ps.field(g.point(k)) - 1.0));

		{
			auto f = run.open("solution.csv");
			mink::io::write_solution_csv(f, u, det_fn, psi_est);
		}
		{
			auto f = run.open("convergence.csv");
			f << "phase,iteration,residual,damping\n";
			for (const auto& r : res.log) f << r.phase << ',' << r.iteration << ',' << num(r.residual) << ',' << num(r.damping) << '\n';
		}

		const mink::SandwichReport sw = mink::sandwich_check(u, b.phi, ps.field.a());
		run.out << "solve: n=" << cfg.n << " R=" << num(cfg.R) << " iterations=" << res.iterations
				<< " residual=" << num(res.residual) << " fallback=" << (res.used_fallback ? "yes" : "no") << '\n';
		run.out << "psi recovery: max relative error " << num(psi_err) << '\n';
		run.out << "sandwich: upper " << num(sw.upper_violation) << " lower " << num(sw.lower_violation) << " tol "
				<< num(sw.tol) << ' ' << verdict(sw.pass) << '\n';
		run.convergence["sandwich"] = {{"tol", sw.tol}, {"pass", sw.pass}};
		bool ok = sw.pass;
		if (b.zero && ps.constant && (solver.ring == "auto" || solver.ring == "exact")) {
			const auto exact = hyperboloid(*ps.constant);
			double e = 0.0;
			for (std::size_t k : g.interior()) e = std::max(e, std::abs(u[k] - exact(g.point(k))));
			const bool pass = e <= exact_tol;
			run.out << "hyperboloid: max error " << num(e) << " tol " << num(exact_tol) << ' ' << verdict(pass) << '\n';
			run.convergence["hyperboloid_error"] = e;
			ok = ok && pass;
		}
		return ok ? kOk : kCheckFailed;
	}
};

// ---------------------------------------------------------------------------
// foliate

struct FoliateCmd {
	std::vector<double> Ks{-4.0, -1.0, -0.25};
	BoundaryOptions boundary;
	SolverOptions solver;
	double tol = 1e-6;

	void add(CLI::App* app) {
		app->add_option("--K", Ks, "curvatures, strictly increasing and negative (use --K=-4,-1)")
			->delimiter(',')
			->capture_default_str();
		boundary.add(app);
		solver.add(app);
		app->add_option("--tol", tol, "monotonicity tolerance")->capture_default_str();
	}

	int run(Run& run) const {
		const BoundaryInput b = load_boundary(boundary, run);
		const mink::SolverConfig cfg = solver.config();
		const std::string rule = solver.ring;
		const auto ring_for = [&](double K) { return make_ring(rule, b, -K, true); };
		const mink::FoliationResult fol = mink::foliation_sweep(b.phi, Ks, cfg, ring_for, tol);

		json conv = json::array();
		for (std::size_t i = 0; i < fol.Ks.size(); ++i) {
			auto f = run.open("foliation_" + std::to_string(i) + ".csv");
			mink::io::write_grid_csv(f, fol.solutions[i].u);
			json c = convergence_json(fol.solutions[i]);
			c["K"] = fol.Ks[i];
			conv.push_back(c);
			run.out << "K=" << num(fol.Ks[i]) << " iterations=" << fol.solutions[i].iterations
					<< " residual=" << num(fol.solutions[i].residual) << '\n';
		}
		{
			auto f = run.open("monotonicity.csv");
			f << "K1,K2,max_violation\n";
			for (std::size_t a = 0; a < fol.Ks.size(); ++a) {
				for (std::size_t c = a + 1; c < fol.Ks.size(); ++c) {
					const auto& u1 = fol.solutions[a].u;
					const auto& u2 = fol.solutions[c].u;
					double worst = -std::numeric_limits<double>::infinity();
					for (std::size_t k = 0; k < u1.grid().node_count(); ++k)
						if (u1.grid().kind(k) != mink::NodeKind::Outside) worst = std::max(worst, u2[k] - u1[k]);
					f << num(fol.Ks[a]) << ',' << num(fol.Ks[c]) << ',' << num(worst) << '\n';
				}
			}
		}
		run.convergence = {{"solves", conv}, {"monotone", fol.monotone}, {"worst_violation", fol.worst_violation}};
		run.out << "monotonicity: worst violation " << num(fol.worst_violation) << " tol " << num(tol) << ' '
				<< verdict(fol.monotone) << '\n';
		return fol.monotone ? kOk : kSolveFailed;
	}
};

// ---------------------------------------------------------------------------
// barrier

struct BarrierCmd {
	double K = -1.0;
	double C = 1.0;
	std::string emit = "obj";
	int nt = 41, ns = 41;
	std::vector<double> t_range{-2.0, 2.0};
	std::vector<double> s_range{-2.0, 2.0};

	void add(CLI::App* app) {
		app->add_option("--K", K, "curvature, negative")->capture_default_str();
		app->add_option("--C", C)->capture_default_str();
		app->add_option("--emit", emit)->check(CLI::IsMember({"obj", "csv", "none"}))->capture_default_str();
		app->add_option("--nt", nt)->check(CLI::Range(2, 100000))->capture_default_str();
		app->add_option("--ns", ns)->check(CLI::Range(2, 100000))->capture_default_str();
		app->add_option("--t-range", t_range)->delimiter(',')->expected(2)->capture_default_str();
		app->add_option("--s-range", s_range)->delimiter(',')->expected(2)->capture_default_str();
	}

	int run(Run& run) const {
		const mink::BarrierParams p = mink::make_barrier(K, C);
		const double s_hi = std::min(s_range[1], mink::barrier_s_max(p));
		if (!(t_range[1] > t_range[0]) || !(s_hi > s_range[0])) throw mink::InvalidArgument("empty parameter range");

		if (emit != "none") {
			std::vector<mink::MinkVec3> verts;
			std::vector<std::array<double, 2>> params;
			for (int j = 0; j < ns; ++j) {
				const double s = s_range[0] + (s_hi - s_range[0]) * j / (ns - 1);
				for (int i = 0; i < nt; ++i) {
					const double t = t_range[0] + (t_range[1] - t_range[0]) * i / (nt - 1);
					verts.push_back(mink::barrier_surface_point(t, s, p));
					params.push_back({t, s});
				}
			}
			if (emit == "obj") {
				auto f = run.open("barrier.obj");
				f << "# barrier K=" << num(K) << " C=" << num(C) << '\n';
				mink::io::write_obj(f, verts, nt, ns);
			} else {
				auto f = run.open("barrier.csv");
				f << "t,s,x1,x2,x3\n";
				for (std::size_t k = 0; k < verts.size(); ++k)
					f << num(params[k][0]) << ',' << num(params[k][1]) << ',' << num(verts[k].x1) << ','
					  << num(verts[k].x2) << ',' << num(verts[k].x3) << '\n';
			}
		}

		const double ode_hi = std::min(2.0, mink::barrier_s_max(p) - 0.05);
		double ode = 0.0;
		for (int k = 0; k < 64; ++k) ode = std::max(ode, std::abs(mink::ode_residual(-2.0 + (ode_hi + 2.0) * k / 63.0, p)));
		const bool ode_pass = ode <= 1e-12 * std::max(1.0, -K);
		run.out << "ode residual: max " << num(ode) << ' ' << verdict(ode_pass) << '\n';
		run.convergence = {{"ode_residual", ode}};
		bool ok = ode_pass;

		if (C > 0.0) {
			const auto u = [&p](const mink::DiscPoint& z) { return mink::barrier_support_on_disc(z, p); };
			const mink::DiscPoint d0 = mink::klein_down(p.frame.v0);
			const double th0 = std::atan2(d0.z2, d0.z1);
			const double lim0 = mink::radial_boundary_value(u, th0, mink::RadialSampling{0.9, 0.99999, 20}).limit;
			const bool pass0 = std::abs(lim0 + std::sqrt(C)) <= 1e-3;
			run.out << "limit at v0: " << num(lim0) << " expected " << num(-std::sqrt(C)) << ' ' << verdict(pass0) << '\n';
			double worst = 0.0;
			for (int k = 1; k <= 8; ++k) {
				const double th = th0 + mink::kTwoPi * k / 9.0;
				const double lim = mink::radial_boundary_value(u, th, mink::RadialSampling{1.0 - 1e-3, 1.0 - 1e-9, 20}).limit;
				worst = std::max(worst, std::abs(lim));
			}
			const bool pass8 = worst <= 1e-3;
			run.out << "limit elsewhere: max |limit| over 8 directions " << num(worst) << ' ' << verdict(pass8) << '\n';
			run.convergence["limit_v0"] = lim0;
			run.convergence["limit_other_max"] = worst;
			ok = ok && pass0 && pass8;
		} else {
			run.out << "limits: skipped for C <= 0\n";
		}
		if (C != 0.0) {
			const mink::MetricReport m = mink::induced_metric_check(p);
			run.out << "induced metric: E " << num(m.max_rel_err_E) << " G " << num(m.max_rel_err_G) << " F "
					<< num(m.max_F) << " profile " << num(m.max_rel_err_profile) << ' ' << verdict(m.pass) << '\n';
		}
		return ok ? kOk : kCheckFailed;
	}
};

// ---------------------------------------------------------------------------
// lamination

struct LaminationCmd {
	std::string file;
	int trials = 200;
	std::uint64_t seed = 1;
	int angles = 1024;
	std::vector<double> x0{0.0, 0.0};

	CLI::App* check = nullptr;
	CLI::App* thurston = nullptr;
	CLI::App* trace = nullptr;

	void add(CLI::App* app) {
		app->require_subcommand(1);
		check = app->add_subcommand("check", "report crossing, degenerate and non-positive leaves");
		thurston = app->add_subcommand("thurston", "lower bound for the Thurston norm");
		trace = app->add_subcommand("trace", "Mess boundary trace as theta,phi CSV");
		for (CLI::App* sub : {check, thurston, trace})
			sub->add_option("file", file, ".lam file")->required()->check(CLI::ExistingFile);
		thurston->add_option("--trials", trials)->capture_default_str();
		thurston->add_option("--seed", seed)->capture_default_str();
		trace->add_option("--angles", angles)->check(CLI::Range(16, 1 << 24))->capture_default_str();
		trace->add_option("--x0", x0)->delimiter(',')->expected(2)->capture_default_str();
	}

	int run(Run& run) const {
		run.input("lamination", file);
		if (check->parsed()) {
			const mink::MeasuredLamination mu = mink::io::load_lamination(file);
			const mink::LaminationReport rep = mink::validate(mu);
			run.out << "leaves: " << mu.size() << " total weight " << num(mu.total_weight()) << '\n';
			for (const auto& [i, j] : rep.crossings) run.out << "crossing: leaves " << i + 1 << " and " << j + 1 << '\n';
			run.out << "disjoint: " << verdict(rep.pass()) << '\n';
			run.convergence = {{"crossings", rep.crossings.size()}};
			return rep.pass() ? kOk : kCheckFailed;
		}
		const mink::MeasuredLamination mu = checked_lamination(file);
		if (thurston->parsed()) {
			const double t = mink::thurston_norm_lower(mu, trials, seed);
			run.out << "thurston norm lower bound: " << num(t) << '\n';
			run.convergence = {{"thurston_lower", t}};
			return kOk;
		}
		const mink::DomainOfDependence d(mu, base_point(x0));
		auto f = run.open("trace.csv");
		std::vector<mink::io::BoundarySample> pts;
		for (int k = 0; k < angles; ++k) {
			const double t = mink::BoundaryFn::angle_of(k, angles);
			pts.push_back({t, mink::mess_boundary_trace(d, t)});
		}
		mink::io::write_boundary_csv(f, pts);
		run.out << "trace: " << angles << " angles\n";
		return kOk;
	}
};

// ---------------------------------------------------------------------------
// earthquake

struct EarthquakeCmd {
	std::string lamination;
	int angles = 64;
	std::vector<double> x0{0.0, 0.0};
	double tol = 1e-10;

	void add(CLI::App* app) {
		app->add_option("--lamination", lamination, ".lam file")->required()->check(CLI::ExistingFile);
		app->add_option("--angles", angles, "samples at 2 pi (k + 1/2) / N")->check(CLI::Range(1, 1 << 24))
			->capture_default_str();
		app->add_option("--x0", x0, "fixed point z1,z2")->delimiter(',')->expected(2)->capture_default_str();
		app->add_option("--tol", tol, "tolerance against the Mess boundary trace")->capture_default_str();
	}

	int run(Run& run) const {
		run.input("lamination", lamination);
		const mink::MeasuredLamination mu = checked_lamination(lamination);
		const mink::MinkVec3 x = base_point(x0);
		const mink::DomainOfDependence d(mu, x);
		auto f = run.open("earthquake.csv");
		f << "theta,earthquake,mess_trace,difference\n";
		double worst = 0.0;
		for (int k = 0; k < angles; ++k) {
			const double t = mink::kTwoPi * (k + 0.5) / angles;
			const double e = mink::infinitesimal_earthquake(mu, x, t);
			const double m = mink::mess_boundary_trace(d, t);
			worst = std::max(worst, std::abs(e - m));
			f << num(t) << ',' << num(e) << ',' << num(m) << ',' << num(e - m) << '\n';
		}
		const bool pass = worst <= tol;
		run.out << "earthquake vs mess trace: max difference " << num(worst) << " tol " << num(tol) << ' '
				<< verdict(pass) << '\n';
		run.convergence = {{"max_difference", worst}};
		return pass ? kOk : kCheckFailed;
	}
};

// ---------------------------------------------------------------------------
// report

struct ReportCmd {
	std::string manifest;

	void add(CLI::App* app) {
		app->add_option("file", manifest, "manifest.jsonl to summarize")->required()->check(CLI::ExistingFile);
	}

	int run(Run& run) const {
		run.input("manifest", manifest);
		std::ifstream in(manifest);
		std::string line;
		int lineno = 0;
		std::map<std::string, std::map<int, int>> by_command;
		int entries = 0;
		while (std::getline(in, line)) {
			++lineno;
			if (line.empty()) continue;
			const json j = json::parse(line, nullptr, false);
			if (j.is_discarded() || !j.is_object() || !j.contains("command") || !j.contains("exit_code"))
				throw mink::ParseError("line " + std::to_string(lineno) + ": not a manifest record", lineno);
			++by_command[j["command"].get<std::string>()][j["exit_code"].get<int>()];
			++entries;
		}
		run.out << "manifest entries: " << entries << '\n';
		for (const auto& [cmd, codes] : by_command) {
			run.out << cmd << ':';
			for (const auto& [code, count] : codes) run.out << " exit" << code << '=' << count;
			run.out << '\n';
		}
		run.convergence = {{"entries", entries}};
		return kOk;
	}
};

// ---------------------------------------------------------------------------
// Driver

namespace detail {

/// Flat `key = value` config for CLI11; flags given on the command line win.
/// Keys go to the innermost selected subcommand that has the option.
class FlatConfig : public CLI::Config {
public:
	explicit FlatConfig(const CLI::App* root) : root_(root) {}

	std::string to_config(const CLI::App* app, bool, bool, std::string) const override {
		std::string outs;
		for (const CLI::Option* o : app->get_options())
			if (o->count() > 0 && o->get_configurable()) outs += o->get_name() + " = " + CLI::detail::join(o->results(), ",") + "\n";
		return outs;
	}

	std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
		std::vector<CLI::ConfigItem> items;
		for (auto& [k, v] : mink::io::parse_key_value(in)) {
			if (k == "config") throw mink::InvalidArgument("config files cannot include other configs");
			std::vector<std::string> chain;
			std::vector<std::string> parents;
			for (const CLI::App* a = root_; !a->get_subcommands().empty();) {
				a = a->get_subcommands().front();
				chain.push_back(a->get_name());
				if (a->get_option_no_throw("--" + k) != nullptr) parents = chain;
			}
			if (parents.empty()) throw mink::InvalidArgument("config key `" + k + "` is not an option of this command");
			items.push_back({parents, k, {v}});
		}
		return items;
	}

private:
	const CLI::App* root_;
};

inline json option_echo(const CLI::App* app) {
	json cfg = json::object();
	for (const CLI::Option* o : app->get_options()) {
		if (o->get_name() == "--help" || o->get_name() == "-h") continue;
		std::string name = o->get_name();
		while (!name.empty() && name.front() == '-') name.erase(0, 1);
		if (o->count() > 0) {
			const auto& r = o->results();
			cfg[name] = o->get_items_expected_max() == 1 ? r.back() : CLI::detail::join(r, ",");
		} else {
			cfg[name] = o->get_default_str();
		}
	}
	for (const CLI::App* sub : app->get_subcommands()) cfg[sub->get_name()] = option_echo(sub);
	return cfg;
}

}  // namespace detail

inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
	CLI::App app{"minkctl: spacelike constant-curvature surfaces in Minkowski 3-space", "minkctl"};
	app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
	app.require_subcommand(1);
	app.set_version_flag("--version", kVersion);
	app.fallthrough();
	app.config_formatter(std::make_shared<detail::FlatConfig>(&app));
	app.allow_config_extras(CLI::config_extras_mode::error);
	CLI::Option* config = app.set_config("--config", "", "key=value file; command-line flags override it");

	std::string out_dir = ".";
	std::string manifest_path;
	const auto common = [&](CLI::App* sub) {
		sub->add_option("--out-dir", out_dir, "directory for outputs")->capture_default_str();
		sub->add_option("--manifest", manifest_path, "JSON-lines manifest (default OUT_DIR/manifest.jsonl)");
	};

	SolveCmd solve;
	FoliateCmd foliate;
	BarrierCmd barrier;
	LaminationCmd lamination;
	EarthquakeCmd earthquake;
	ReportCmd report;
	CLI::App* s_solve = app.add_subcommand("solve", "Dirichlet Monge-Ampere solve for a support function");
	CLI::App* s_fol = app.add_subcommand("foliate", "solves for several K and checks their ordering");
	CLI::App* s_bar = app.add_subcommand("barrier", "barrier surface mesh, ODE residual and boundary limits");
	CLI::App* s_lam = app.add_subcommand("lamination", "lamination utilities");
	CLI::App* s_eq = app.add_subcommand("earthquake", "infinitesimal earthquake against the Mess boundary trace");
	CLI::App* s_rep = app.add_subcommand("report", "summarizes a manifest");
	solve.add(s_solve);
	foliate.add(s_fol);
	barrier.add(s_bar);
	lamination.add(s_lam);
	earthquake.add(s_eq);
	report.add(s_rep);
	for (CLI::App* sub : {s_solve, s_fol, s_bar, s_lam, s_eq, s_rep}) common(sub);

	try {
		std::vector<std::string> rev(argv.rbegin(), argv.rend());
		app.parse(rev);
	} catch (const CLI::CallForHelp&) {
		out << app.help();
		return kOk;
	} catch (const CLI::CallForAllHelp&) {
		out << app.help("", CLI::AppFormatMode::All);
		return kOk;
	} catch (const CLI::CallForVersion&) {
		out << kVersion << '\n';
		return kOk;
	} catch (const CLI::ParseError& e) {
		err << "minkctl: " << e.what() << '\n';
		return kInvalidInput;
	} catch (const mink::Error& e) {
		err << "minkctl: config: " << e.what() << '\n';
		return kInvalidInput;
	}

	CLI::App* sub = app.get_subcommands().front();
	Run run{out, err};
	run.out_dir = out_dir;
	const auto start = std::chrono::steady_clock::now();
	int code = kOk;
	std::string error;
	try {
		if (config->count() > 0) run.input("config", config->results().back());
		if (sub == s_solve) code = solve.run(run);
		else if (sub == s_fol) code = foliate.run(run);
		else if (sub == s_bar) code = barrier.run(run);
		else if (sub == s_lam) code = lamination.run(run);
		else if (sub == s_eq) code = earthquake.run(run);
		else code = report.run(run);
	} catch (const mink::ConvergenceError& e) {
		error = e.what();
		code = kSolveFailed;
	} catch (const mink::Error& e) {
		error = e.what();
		code = kInvalidInput;
	} catch (const fs::filesystem_error& e) {
		error = e.what();
		code = kInvalidInput;
	}
	if (!error.empty()) err << "minkctl: " << error << '\n';
	const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

	std::string command = sub->get_name();
	for (const CLI::App* s : sub->get_subcommands()) command += " " + s->get_name();
	json echo = detail::option_echo(sub);
	echo["config"] = config->count() > 0 ? config->results().back() : "";
	json rec = {{"command", command},
				{"config", echo},
				{"inputs", run.inputs},
				{"versions", versions()},
				{"wall_time_s", wall},
				{"convergence", run.convergence},
				{"outputs", run.outputs},
				{"exit_code", code}};
	if (!error.empty()) rec["error"] = error;
	try {
		const fs::path mp = manifest_path.empty() ? fs::path(out_dir) / "manifest.jsonl" : fs::path(manifest_path);
		if (mp.has_parent_path()) fs::create_directories(mp.parent_path());
		std::ofstream mf(mp, std::ios::app);
		if (!mf) throw mink::InvalidArgument("cannot append to manifest " + mp.string());
		mf << rec.dump() << '\n';
	} catch (const std::exception& e) {
		err << "minkctl: " << e.what() << '\n';
		return kInvalidInput;
	}
	return code;
}

}  // namespace minkctl

#endif  // MINKCTL_APP_HPP_
