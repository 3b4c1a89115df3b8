#ifndef MINK_IO_HPP_
#define MINK_IO_HPP_

// Text formats: `.lam` laminations, `theta,phi` boundary CSV, grid and
// solution CSV, OBJ meshes. Numbers are written in shortest round-trip form.

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "mink/envelope.hpp"
#include "mink/errors.hpp"
#include "mink/grid.hpp"
#include "mink/lamination.hpp"
#include "mink/minkowski.hpp"

namespace mink::io {

inline std::string format_double(double v) {
	if (std::isnan(v)) return "nan";
	if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
	std::array<char, 32> buf{};
	const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
	return std::string(buf.data(), res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
	const auto b = s.find_first_not_of(" \t\r");
	if (b == std::string_view::npos) return {};
	const auto e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

/// Strict parse of a whole token as a finite double.
inline bool parse_number(std::string_view tok, double& out) {
	if (tok.empty()) return false;
	if (tok.front() == '+') tok.remove_prefix(1);
	const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
	return res.ec == std::errc() && res.ptr == tok.data() + tok.size() && std::isfinite(out);
}

inline std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
	std::vector<std::string_view> out;
	std::size_t i = 0;
	while (i < s.size()) {
		const auto b = s.find_first_not_of(seps, i);
		if (b == std::string_view::npos) break;
		auto e = s.find_first_of(seps, b);
		if (e == std::string_view::npos) e = s.size();
		out.push_back(s.substr(b, e - b));
		i = e;
	}
	return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Laminations

/// One leaf per line: `theta1 theta2 weight`. `#` starts a comment.
inline MeasuredLamination parse_lamination(std::istream& in) {
	MeasuredLamination mu;
	std::string line;
	int lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		std::string_view body(line);
		if (const auto c = body.find('#'); c != std::string_view::npos) body = body.substr(0, c);
		body = detail::trim(body);
		if (body.empty()) continue;
		const auto tok = detail::split(body, " \t,");
		if (tok.size() != 3)
			throw ParseError("line " + std::to_string(lineno) + ": expected `theta1 theta2 weight`", lineno);
		double v[3];
		for (int k = 0; k < 3; ++k)
			if (!detail::parse_number(tok[k], v[k]))
				throw ParseError("line " + std::to_string(lineno) + ": not a finite number: " + std::string(tok[k]), lineno);
		if (!(v[2] > 0.0)) throw ParseError("line " + std::to_string(lineno) + ": weight must be positive", lineno);
		const Geodesic g{canonical_angle(v[0]), canonical_angle(v[1]), Side::Left};
		if (!g.is_valid()) throw ParseError("line " + std::to_string(lineno) + ": endpoints coincide", lineno);
		mu.leaves.push_back({g, v[2]});
	}
	return mu;
}

inline MeasuredLamination load_lamination(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw InvalidArgument("cannot open lamination file: " + path);
	return parse_lamination(in);
}

inline void write_lamination(std::ostream& out, const MeasuredLamination& mu) {
	out << "# theta1 theta2 weight\n";
	for (const auto& l : mu.leaves)
		out << format_double(l.geodesic.theta1) << ' ' << format_double(l.geodesic.theta2) << ' '
			<< format_double(l.weight) << '\n';
}

// ---------------------------------------------------------------------------
// Boundary functions

struct BoundarySample {
	double theta;
	double phi;
};

/// CSV with header `theta,phi`; angles in radians, any order, distinct mod 2 pi.
inline std::vector<BoundarySample> parse_boundary_csv(std::istream& in) {
	std::string line;
	int lineno = 0;
	bool header = false;
	std::vector<BoundarySample> out;
	while (std::getline(in, line)) {
		++lineno;
		const std::string_view body = detail::trim(line);
		if (body.empty() || body.front() == '#') continue;
		if (!header) {
			if (body != "theta,phi") throw ParseError("line " + std::to_string(lineno) + ": expected header `theta,phi`", lineno);
			header = true;
			continue;
		}
		const auto tok = detail::split(body, ",");
		double t, p;
		if (tok.size() != 2 || !detail::parse_number(detail::trim(tok[0]), t) || !detail::parse_number(detail::trim(tok[1]), p))
			throw ParseError("line " + std::to_string(lineno) + ": expected `theta,phi`", lineno);
		out.push_back({canonical_angle(t), p});
	}
	if (!header) throw ParseError("missing header `theta,phi`", lineno);
	if (out.size() < 3) throw ParseError("boundary CSV needs at least 3 rows", lineno);
	std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });
	for (std::size_t k = 1; k < out.size(); ++k)
		if (out[k].theta - out[k - 1].theta < 1e-12) throw ParseError("duplicate boundary angle", lineno);
	return out;
}

/// Periodic linear interpolation of scattered samples onto n uniform angles.
inline BoundaryFn resample_boundary(const std::vector<BoundarySample>& pts, int n) {
	return BoundaryFn::sample(
		[&pts](double t) {
			const auto it = std::upper_bound(pts.begin(), pts.end(), t,
											 [](double v, const BoundarySample& s) { return v < s.theta; });
			const BoundarySample& b = it == pts.end() ? pts.front() : *it;
			const BoundarySample& a = it == pts.begin() ? pts.back() : *(it - 1);
			const double span = canonical_angle(b.theta - a.theta);
			const double off = canonical_angle(t - a.theta);
			const double w = span > 0.0 ? off / span : 0.0;
			return (1.0 - w) * a.phi + w * b.phi;
		},
		n);
}

inline BoundaryFn load_boundary_csv(const std::string& path, int n) {
	std::ifstream in(path);
	if (!in) throw InvalidArgument("cannot open boundary file: " + path);
	return resample_boundary(parse_boundary_csv(in), n);
}

inline void write_boundary_csv(std::ostream& out, const std::vector<BoundarySample>& pts) {
	out << "theta,phi\n";
	for (const auto& p : pts) out << format_double(p.theta) << ',' << format_double(p.phi) << '\n';
}

// ---------------------------------------------------------------------------
// Grids

/// `z1,z2,u` over defined nodes, row-major.
inline void write_grid_csv(std::ostream& out, const GridFunction& u) {
	const Grid& g = u.grid();
	out << "z1,z2,u\n";
	for (std::size_t k = 0; k < g.node_count(); ++k) {
		if (g.kind(k) == NodeKind::Outside) continue;
		const DiscPoint z = g.point(k);
		out << format_double(z.z1) << ',' << format_double(z.z2) << ',' << format_double(u[k]) << '\n';
	}
}

/// `z1,z2,u,det,psi_est` over defined nodes; det and psi_est are nan on the ring.
inline void write_solution_csv(std::ostream& out, const GridFunction& u, const GridFunction& det,
							   const GridFunction& psi_est) {
	const Grid& g = u.grid();
	out << "z1,z2,u,det,psi_est\n";
	for (std::size_t k = 0; k < g.node_count(); ++k) {
		if (g.kind(k) == NodeKind::Outside) continue;
		const DiscPoint z = g.point(k);
		out << format_double(z.z1) << ',' << format_double(z.z2) << ',' << format_double(u[k]) << ','
			<< format_double(det[k]) << ',' << format_double(psi_est[k]) << '\n';
	}
}

// ---------------------------------------------------------------------------
// OBJ

/// Vertices of an nu x nv parameter grid (u fastest) and its quad faces.
inline void write_obj(std::ostream& out, const std::vector<MinkVec3>& vertices, int nu, int nv) {
	if (nu < 2 || nv < 2 || vertices.size() != static_cast<std::size_t>(nu) * nv)
		throw InvalidArgument("OBJ mesh needs an nu x nv vertex grid");
	for (const auto& v : vertices)
		out << "v " << format_double(v.x1) << ' ' << format_double(v.x2) << ' ' << format_double(v.x3) << '\n';
	for (int j = 0; j + 1 < nv; ++j) {
		for (int i = 0; i + 1 < nu; ++i) {
			const int a = j * nu + i + 1;
			out << "f " << a << ' ' << a + 1 << ' ' << a + 1 + nu << ' ' << a + nu << '\n';
		}
	}
}

// ---------------------------------------------------------------------------
// Flat configuration

/// `key = value` per line, `#` comments. Keys are [A-Za-z0-9_-]+; order is kept.
inline std::vector<std::pair<std::string, std::string>> parse_key_value(std::istream& in) {
	std::vector<std::pair<std::string, std::string>> out;
	std::string line;
	int lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		std::string_view body(line);
		if (const auto c = body.find('#'); c != std::string_view::npos) body = body.substr(0, c);
		body = detail::trim(body);
		if (body.empty()) continue;
		const auto eq = body.find('=');
		if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(lineno) + ": expected `key = value`", lineno);
		const std::string_view key = detail::trim(body.substr(0, eq));
		const std::string_view value = detail::trim(body.substr(eq + 1));
		const bool key_ok = !key.empty() && std::all_of(key.begin(), key.end(), [](char ch) {
			return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
		});
		if (!key_ok) throw ParseError("line " + std::to_string(lineno) + ": bad key", lineno);
		if (value.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty value for " + std::string(key), lineno);
		out.emplace_back(std::string(key), std::string(value));
	}
	return out;
}

}  // namespace mink::io

#endif  // MINK_IO_HPP_
