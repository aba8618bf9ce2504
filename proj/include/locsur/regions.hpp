#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace locsur {

// Equispaced closed grid: `points_per_axis` coordinates from lo to hi inclusive.
struct GridSpec {
  int points_per_axis = 2;
  double lo = 0.0;
  double hi = 1.0;

  // lo + step*idx with step rounded once, the same arithmetic the samplers
  // use, so node coordinates compare equal to sampled points exactly.
  double coord(int idx) const {
    if (idx < 0 || idx >= points_per_axis)
      throw std::out_of_range("GridSpec::coord: index outside grid");
    const double step = (hi - lo) / static_cast<double>(points_per_axis - 1);
    return lo + step * static_cast<double>(idx);
  }
};

// Half-open window [start, start + width).
struct Interval1D {
  double start = 0.0;
  double width = 1.0;
};

// Square block of grid nodes, inclusive on indices counting from 0:
// rows anchor_row .. anchor_row+edge-1, same for columns.
struct GridSquare {
  int anchor_row = 0;
  int anchor_col = 0;
  int edge = 2;  // nodes per side
  GridSpec parent;
};

// Open Euclidean ball ||x - center||_2 < radius.
struct Ball {
  Eigen::VectorXd center;
  double radius = 1.0;
};

// Open axis-aligned cube centered at the origin: |x_i| < half_width for all i.
struct HyperCube {
  double half_width = 1.0;
  int dim = 1;
};

using Region = std::variant<Interval1D, GridSquare, Ball, HyperCube>;

inline int region_dim(const Region& region) {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval1D>) return 1;
        if constexpr (std::is_same_v<T, GridSquare>) return 2;
        if constexpr (std::is_same_v<T, Ball>)
          return static_cast<int>(r.center.size());
        if constexpr (std::is_same_v<T, HyperCube>) return r.dim;
      },
      region);
}

inline void validate_region(const Region& region) {
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval1D>) {
          if (!(r.width > 0.0)) throw std::invalid_argument("Interval1D: width must be positive");
        } else if constexpr (std::is_same_v<T, GridSquare>) {
          if (r.edge < 2) throw std::invalid_argument("GridSquare: edge must be at least 2 nodes");
          if (r.anchor_row < 0 || r.anchor_col < 0 ||
              r.anchor_row + r.edge > r.parent.points_per_axis ||
              r.anchor_col + r.edge > r.parent.points_per_axis)
            throw std::invalid_argument("GridSquare: block exceeds its parent grid");
        } else if constexpr (std::is_same_v<T, Ball>) {
          if (!(r.radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
          if (r.center.size() == 0) throw std::invalid_argument("Ball: empty center");
        } else if constexpr (std::is_same_v<T, HyperCube>) {
          if (!(r.half_width > 0.0))
            throw std::invalid_argument("HyperCube: half_width must be positive");
          if (r.dim < 1) throw std::invalid_argument("HyperCube: dim must be at least 1");
        }
      },
      region);
}

// Membership. Boundary conventions are the ones under which the experiment
// point counts come out right: Interval1D half-open, Ball and HyperCube
// strictly open, GridSquare inclusive on its node coordinates.
inline bool contains(const Region& region, const Eigen::VectorXd& x) {
  if (x.size() != region_dim(region))
    throw std::invalid_argument("contains: dimension mismatch");
  return std::visit(
      [&x](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval1D>) {
          return x[0] >= r.start && x[0] < r.start + r.width;
        } else if constexpr (std::is_same_v<T, GridSquare>) {
          const double r_lo = r.parent.coord(r.anchor_row);
          const double r_hi = r.parent.coord(r.anchor_row + r.edge - 1);
          const double c_lo = r.parent.coord(r.anchor_col);
          const double c_hi = r.parent.coord(r.anchor_col + r.edge - 1);
          return x[0] >= r_lo && x[0] <= r_hi && x[1] >= c_lo && x[1] <= c_hi;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - r.center).norm() < r.radius;
        } else if constexpr (std::is_same_v<T, HyperCube>) {
          return (x.array().abs() < r.half_width).all();
        }
      },
      region);
}

// Row indices of X inside the region, ascending.
inline std::vector<Eigen::Index> select(const Eigen::MatrixXd& X, const Region& region) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    if (contains(region, X.row(i).transpose())) idx.push_back(i);
  return idx;
}

// Closed bounding box used for surrogate-node placement. A Ball yields its
// inscribed axis-aligned box (half-width r/sqrt(d)) so every node is interior.
struct BoundingBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

inline BoundingBox region_box(const Region& region) {
  validate_region(region);
  return std::visit(
      [](const auto& r) -> BoundingBox {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval1D>) {
          Eigen::VectorXd lo(1), hi(1);
          lo[0] = r.start;
          hi[0] = r.start + r.width;
          return {lo, hi};
        } else if constexpr (std::is_same_v<T, GridSquare>) {
          Eigen::VectorXd lo(2), hi(2);
          lo[0] = r.parent.coord(r.anchor_row);
          hi[0] = r.parent.coord(r.anchor_row + r.edge - 1);
          lo[1] = r.parent.coord(r.anchor_col);
          hi[1] = r.parent.coord(r.anchor_col + r.edge - 1);
          return {lo, hi};
        } else if constexpr (std::is_same_v<T, Ball>) {
          const double h = r.radius / std::sqrt(static_cast<double>(r.center.size()));
          return {r.center.array() - h, r.center.array() + h};
        } else if constexpr (std::is_same_v<T, HyperCube>) {
          Eigen::VectorXd lo = Eigen::VectorXd::Constant(r.dim, -r.half_width);
          Eigen::VectorXd hi = Eigen::VectorXd::Constant(r.dim, r.half_width);
          return {lo, hi};
        }
      },
      region);
}

// Growing half-open windows anchored at the domain's left edge. Widths are
// start_width + k*increment; the progression is capped by one final window
// clamped to the full domain span.
inline std::vector<Interval1D> sweep_intervals(double start_width, double increment,
                                               double domain_lo, double domain_hi) {
  if (!(start_width > 0.0) || !(increment > 0.0) || !(domain_hi > domain_lo))
    throw std::invalid_argument("sweep_intervals: invalid progression");
  const double span = domain_hi - domain_lo;
  std::vector<Interval1D> out;
  for (int k = 0;; ++k) {
    const double w = start_width + increment * static_cast<double>(k);
    if (w >= span) break;
    out.push_back({domain_lo, w});
  }
  out.push_back({domain_lo, span});
  return out;
}

// Anchored squares with edge running edge_start..edge_end nodes.
inline std::vector<GridSquare> sweep_grid_squares(int anchor_row, int anchor_col,
                                                  int edge_start, int edge_end,
                                                  const GridSpec& parent) {
  if (edge_start < 2 || edge_end < edge_start)
    throw std::invalid_argument("sweep_grid_squares: invalid edge range");
  std::vector<GridSquare> out;
  for (int e = edge_start; e <= edge_end; ++e) {
    GridSquare g{anchor_row, anchor_col, e, parent};
    validate_region(Region{g});
    out.push_back(g);
  }
  return out;
}

// Concentric balls with radii start, start+step, ..., end (end included;
// count computed by rounding so accumulated float error cannot drop it).
inline std::vector<Ball> sweep_balls(const Eigen::VectorXd& center, double r_start,
                                     double r_step, double r_end) {
  if (!(r_start > 0.0) || !(r_step > 0.0) || !(r_end >= r_start))
    throw std::invalid_argument("sweep_balls: invalid progression");
  const int count = static_cast<int>(std::lround((r_end - r_start) / r_step)) + 1;
  std::vector<Ball> out;
  for (int k = 0; k < count; ++k)
    out.push_back({center, r_start + r_step * static_cast<double>(k)});
  return out;
}

inline std::vector<HyperCube> sweep_hypercubes(double r_start, double r_step,
                                               double r_end, int dim) {
  if (!(r_start > 0.0) || !(r_step > 0.0) || !(r_end >= r_start) || dim < 1)
    throw std::invalid_argument("sweep_hypercubes: invalid progression");
  const int count = static_cast<int>(std::lround((r_end - r_start) / r_step)) + 1;
  std::vector<HyperCube> out;
  for (int k = 0; k < count; ++k)
    out.push_back({r_start + r_step * static_cast<double>(k), dim});
  return out;
}

}  // namespace locsur
