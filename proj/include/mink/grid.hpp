#ifndef MINK_GRID_HPP_
#define MINK_GRID_HPP_

// Square grids masked to a sub-disc |z| <= R, with a Dirichlet ring of
// non-interior nodes reachable by the finite-difference stencils.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mink/errors.hpp"
#include "mink/minkowski.hpp"

namespace mink {

struct GridSpec {
	double R = 0.9;  ///< sub-disc radius
	int n = 129;     ///< nodes per axis across [-R, R]
	int reach = 1;   ///< stencil reach in nodes; the ring is this many layers deep
};

enum class NodeKind : std::uint8_t { Outside, Interior, Ring };

class Grid {
public:
	explicit Grid(const GridSpec& spec) : spec_(spec) {
		if (!(spec.R > 0.0 && spec.R < 1.0)) throw InvalidArgument("grid radius must lie in (0, 1)");
		if (spec.n < 3 || spec.n % 2 == 0) throw InvalidArgument("grid needs an odd node count >= 3");
		if (spec.reach < 1 || spec.reach > 3) throw InvalidArgument("grid stencil reach must be 1, 2 or 3");
		h_ = 2.0 * spec.R / (spec.n - 1);
		pad_ = spec.reach;
		size_ = spec.n + 2 * pad_;
		kind_.assign(static_cast<std::size_t>(size_) * size_, NodeKind::Outside);

		const double r2 = spec.R * spec.R * (1.0 + 1e-12);
		for (int j = 0; j < size_; ++j)
			for (int i = 0; i < size_; ++i)
				if (point(i, j).norm_sq() <= r2) kind_[index(i, j)] = NodeKind::Interior;
		for (int j = 0; j < size_; ++j) {
			for (int i = 0; i < size_; ++i) {
				if (kind(i, j) != NodeKind::Outside) continue;
				if (near_interior(i, j)) kind_[index(i, j)] = NodeKind::Ring;
			}
		}
		for (int j = 0; j < size_; ++j) {
			for (int i = 0; i < size_; ++i) {
				const std::size_t k = index(i, j);
				if (kind_[k] == NodeKind::Interior) interior_.push_back(k);
				if (kind_[k] == NodeKind::Ring) {
					ring_.push_back(k);
					max_ring_radius_ = std::max(max_ring_radius_, point(i, j).norm());
				}
			}
		}
		if (max_ring_radius_ >= 1.0)
			throw InvalidArgument("grid ring reaches the unit circle; increase n or decrease R");
	}

	const GridSpec& spec() const { return spec_; }
	double R() const { return spec_.R; }
	double h() const { return h_; }
	int size() const { return size_; }
	int pad() const { return pad_; }
	std::size_t node_count() const { return kind_.size(); }
	double max_ring_radius() const { return max_ring_radius_; }

	std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * size_ + i; }
	int col(std::size_t k) const { return static_cast<int>(k % size_); }
	int row(std::size_t k) const { return static_cast<int>(k / size_); }
	bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < size_ && j < size_; }

	NodeKind kind(int i, int j) const { return in_range(i, j) ? kind_[index(i, j)] : NodeKind::Outside; }
	NodeKind kind(std::size_t k) const { return kind_[k]; }
	bool defined(int i, int j) const { return kind(i, j) != NodeKind::Outside; }

	DiscPoint point(int i, int j) const {
		return {-spec_.R + (i - pad_) * h_, -spec_.R + (j - pad_) * h_};
	}
	DiscPoint point(std::size_t k) const { return point(col(k), row(k)); }

	/// Interior and ring node indices in row-major order.
	const std::vector<std::size_t>& interior() const { return interior_; }
	const std::vector<std::size_t>& ring() const { return ring_; }

	/// Grid node coinciding with z up to 1e-6 h, if any.
	std::optional<std::pair<int, int>> node_at(const DiscPoint& z) const {
		const double fi = (z.z1 + spec_.R) / h_ + pad_;
		const double fj = (z.z2 + spec_.R) / h_ + pad_;
		const int i = static_cast<int>(std::lround(fi));
		const int j = static_cast<int>(std::lround(fj));
		if (!in_range(i, j) || std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6) return std::nullopt;
		return std::make_pair(i, j);
	}

private:
	bool near_interior(int i, int j) const {
		for (int dj = -spec_.reach; dj <= spec_.reach; ++dj)
			for (int di = -spec_.reach; di <= spec_.reach; ++di)
				if (kind(i + di, j + dj) == NodeKind::Interior) return true;
		return false;
	}

	GridSpec spec_;
	double h_ = 0.0;
	int pad_ = 1;
	int size_ = 0;
	double max_ring_radius_ = 0.0;
	std::vector<NodeKind> kind_;
	std::vector<std::size_t> interior_;
	std::vector<std::size_t> ring_;
};

/// Values on a shared grid; NaN at Outside nodes.
class GridFunction {
public:
	GridFunction() = default;
	GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values)
		: grid_(std::move(grid)), values_(std::move(values)) {
		if (!grid_ || values_.size() != grid_->node_count())
			throw InvalidArgument("grid function size does not match its grid");
	}

	template <class F>
	static GridFunction sample(std::shared_ptr<const Grid> grid, F&& f) {
		std::vector<double> v(grid->node_count(), std::numeric_limits<double>::quiet_NaN());
		for (std::size_t k = 0; k < v.size(); ++k)
			if (grid->kind(k) != NodeKind::Outside) v[k] = f(grid->point(k));
		return GridFunction(grid, std::move(v));
	}

	const Grid& grid() const { return *grid_; }
	const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
	const std::vector<double>& values() const { return values_; }
	double operator[](std::size_t k) const { return values_[k]; }
	double at(int i, int j) const { return values_[grid_->index(i, j)]; }

	/// Bilinear interpolation; throws if a corner node is undefined.
	double interpolate(const DiscPoint& z) const {
		const Grid& g = *grid_;
		const double fi = (z.z1 + g.R()) / g.h() + g.pad();
		const double fj = (z.z2 + g.R()) / g.h() + g.pad();
		const int i0 = static_cast<int>(std::floor(fi));
		const int j0 = static_cast<int>(std::floor(fj));
		const double ti = fi - i0, tj = fj - j0;
		double acc = 0.0;
		for (int dj = 0; dj <= 1; ++dj) {
			for (int di = 0; di <= 1; ++di) {
				const double w = (di ? ti : 1.0 - ti) * (dj ? tj : 1.0 - tj);
				if (w == 0.0) continue;
				if (!g.defined(i0 + di, j0 + dj))
					throw InvalidArgument("interpolation point outside the defined grid");
				acc += w * at(i0 + di, j0 + dj);
			}
		}
		return acc;
	}

private:
	std::shared_ptr<const Grid> grid_;
	std::vector<double> values_;
};

}  // namespace mink

#endif  // MINK_GRID_HPP_
