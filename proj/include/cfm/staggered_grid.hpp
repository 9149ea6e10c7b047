#pragma once

#include <vector>

#include "cfm/geometry.hpp"
#include "cfm/types.hpp"

namespace cfm {

/// Uniform periodic grid on [x_left, x_right] x [y_bottom, y_top] with nx x ny cells.
struct GridSpec {
  double x_left = 0.0;
  double x_right = 1.0;
  double y_bottom = 0.0;
  double y_top = 1.0;
  int nx = 20;
  int ny = 20;

  double dx() const { return (x_right - x_left) / nx; }
  double dy() const { return (y_top - y_bottom) / ny; }
  double h() const { return std::max(dx(), dy()); }

  static GridSpec unit_square(int n) { return GridSpec{0.0, 1.0, 0.0, 1.0, n, n}; }
};

/// Node identity with the staggered (paper-style) index ranges:
/// Hx i in 1..nx, j in 0..ny-1; Hy i in 0..nx-1, j in 1..ny; Ez i in 1..nx, j in 1..ny.
struct NodeId {
  Family family;
  int i;
  int j;

  bool operator==(const NodeId&) const = default;
};

/// Position in units of half a cell from (x_left, y_bottom). Hx sits at (2i-1, 2j),
/// Hy at (2i, 2j-1), Ez at (2i-1, 2j-1) and corner (i+1/2, j+1/2) at (2i, 2j).
struct HalfIndex {
  int x;
  int y;
};

HalfIndex half_index(Family f, int i, int j);
HalfIndex corner_half_index(int i, int j);

/// Zero-based storage index (0..nx-1, 0..ny-1) of any node or corner, after periodic wrap.
inline int wrap_half(int v, int n2) {
  const int m = v % n2;
  return m < 0 ? m + n2 : m;
}

Point2 node_coords(const GridSpec& spec, Family family, int i, int j);
Point2 node_coords(const GridSpec& spec, const NodeId& node);
/// Corner (x_{i+1/2}, y_{j+1/2}) for i in 0..nx-1, j in 0..ny-1.
Point2 corner_coords(const GridSpec& spec, int i, int j);

/// Periodic wrap into the family's index range.
NodeId wrap(const GridSpec& spec, Family family, int i, int j);

/// Storage (row-major in i) of node (i, j) of a family; indices must be in range.
int storage_index(const GridSpec& spec, Family family, int i, int j);
NodeId node_from_storage(const GridSpec& spec, Family family, int storage);

/// Three arrays of shape nx x ny plus a time stamp. Storage (a, b) holds the family's
/// node with zero-based offsets a = i - i0, b = j - j0.
struct FieldSet {
  GridSpec spec;
  Eigen::ArrayXXd hx;
  Eigen::ArrayXXd hy;
  Eigen::ArrayXXd ez;
  double t = 0.0;

  FieldSet() = default;
  explicit FieldSet(const GridSpec& s, double time = 0.0)
      : spec(s),
        hx(Eigen::ArrayXXd::Zero(s.nx, s.ny)),
        hy(Eigen::ArrayXXd::Zero(s.nx, s.ny)),
        ez(Eigen::ArrayXXd::Zero(s.nx, s.ny)),
        t(time) {}

  Eigen::ArrayXXd& array(Family f) { return f == Family::Hx ? hx : (f == Family::Hy ? hy : ez); }
  const Eigen::ArrayXXd& array(Family f) const { return f == Family::Hx ? hx : (f == Family::Hy ? hy : ez); }

  /// Periodic access by staggered indices.
  double& at(Family f, int i, int j);
  double at(Family f, int i, int j) const;
};

/// Per-node sides for the three families and the cell corners, plus the nodes that some
/// stencil samples from across the interface.
struct SideMasks {
  GridSpec spec;
  std::array<std::vector<Side>, 3> sides;  // indexed by Family, storage order
  std::vector<Side> corner_sides;          // storage (i, j) for corner (i+1/2, j+1/2)
  std::vector<NodeId> corrected;
  std::array<std::vector<int>, 3> corrected_index;  // storage -> position in `corrected`, -1 if none

  Side side(Family f, int storage) const { return sides[static_cast<int>(f)][storage]; }
  int correction_slot(Family f, int storage) const { return corrected_index[static_cast<int>(f)][storage]; }
};

struct ClassifyOptions {
  /// Also flag H nodes that the corner divergence stencil samples across the interface.
  bool include_divergence = false;
};

SideMasks classify_nodes(const GridSpec& spec, const LevelSet& ls, int scheme_order, ClassifyOptions options = {});

/// Stencil offsets in half-cell units and matching weights (divide by the spacing).
struct Stencil {
  std::array<int, 4> offsets;
  std::array<double, 4> weights;
  int size;
};

/// Order 2: (A_{+1/2} - A_{-1/2}); order 4: (A_{-3/2} - 27 A_{-1/2} + 27 A_{+1/2} - A_{+3/2}) / 24.
const Stencil& staggered_stencil(int order);

}  // namespace cfm
