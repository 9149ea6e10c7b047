#include "cfm/staggered_grid.hpp"

#include <string>

namespace cfm {

namespace {

struct Offsets {
  int i0;
  int j0;
};

// Lowest staggered index of each family.
constexpr Offsets offsets(Family f) {
  switch (f) {
    case Family::Hx: return {1, 0};
    case Family::Hy: return {0, 1};
    case Family::Ez: return {1, 1};
  }
  return {0, 0};
}

void check_range(const GridSpec& spec, Family f, int i, int j) {
  const Offsets o = offsets(f);
  if (i < o.i0 || i >= o.i0 + spec.nx || j < o.j0 || j >= o.j0 + spec.ny)
    throw Error(ErrorCode::IndexOutOfRange, std::string("node index out of range for ") + family_name(f) + " (" +
                                                std::to_string(i) + ", " + std::to_string(j) + ")");
}

int wrap_index(int v, int lo, int n) {
  const int m = (v - lo) % n;
  return (m < 0 ? m + n : m) + lo;
}

}  // namespace

HalfIndex half_index(Family f, int i, int j) {
  switch (f) {
    case Family::Hx: return {2 * i - 1, 2 * j};
    case Family::Hy: return {2 * i, 2 * j - 1};
    case Family::Ez: return {2 * i - 1, 2 * j - 1};
  }
  return {0, 0};
}

HalfIndex corner_half_index(int i, int j) { return {2 * i, 2 * j}; }

Point2 node_coords(const GridSpec& spec, Family family, int i, int j) {
  check_range(spec, family, i, j);
  const HalfIndex hi = half_index(family, i, j);
  return {spec.x_left + 0.5 * hi.x * spec.dx(), spec.y_bottom + 0.5 * hi.y * spec.dy()};
}

Point2 node_coords(const GridSpec& spec, const NodeId& node) { return node_coords(spec, node.family, node.i, node.j); }

Point2 corner_coords(const GridSpec& spec, int i, int j) {
  if (i < 0 || i >= spec.nx || j < 0 || j >= spec.ny)
    throw Error(ErrorCode::IndexOutOfRange, "corner index out of range");
  return {spec.x_left + i * spec.dx(), spec.y_bottom + j * spec.dy()};
}

NodeId wrap(const GridSpec& spec, Family family, int i, int j) {
  const Offsets o = offsets(family);
  return {family, wrap_index(i, o.i0, spec.nx), wrap_index(j, o.j0, spec.ny)};
}

int storage_index(const GridSpec& spec, Family family, int i, int j) {
  check_range(spec, family, i, j);
  const Offsets o = offsets(family);
  return (i - o.i0) + spec.nx * (j - o.j0);
}

NodeId node_from_storage(const GridSpec& spec, Family family, int storage) {
  const Offsets o = offsets(family);
  return {family, storage % spec.nx + o.i0, storage / spec.nx + o.j0};
}

double& FieldSet::at(Family f, int i, int j) {
  const NodeId n = wrap(spec, f, i, j);
  const Offsets o = offsets(f);
  return array(f)(n.i - o.i0, n.j - o.j0);
}

double FieldSet::at(Family f, int i, int j) const {
  const NodeId n = wrap(spec, f, i, j);
  const Offsets o = offsets(f);
  return array(f)(n.i - o.i0, n.j - o.j0);
}

const Stencil& staggered_stencil(int order) {
  static const Stencil second{{-1, 1, 0, 0}, {-1.0, 1.0, 0.0, 0.0}, 2};
  static const Stencil fourth{{-3, -1, 1, 3}, {1.0 / 24.0, -27.0 / 24.0, 27.0 / 24.0, -1.0 / 24.0}, 4};
  if (order == 2) return second;
  if (order == 4) return fourth;
  throw Error(ErrorCode::Config, "scheme order must be 2 or 4");
}

SideMasks classify_nodes(const GridSpec& spec, const LevelSet& ls, int scheme_order, ClassifyOptions options) {
  const Stencil& stencil = staggered_stencil(scheme_order);
  const int n = spec.nx * spec.ny;
  SideMasks masks;
  masks.spec = spec;
  for (Family f : {Family::Hx, Family::Hy, Family::Ez}) {
    auto& s = masks.sides[static_cast<int>(f)];
    s.resize(n);
    for (int k = 0; k < n; ++k) s[k] = side_of(ls, node_coords(spec, node_from_storage(spec, f, k)));
    masks.corrected_index[static_cast<int>(f)].assign(n, -1);
  }
  masks.corner_sides.resize(n);
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) masks.corner_sides[i + spec.nx * j] = side_of(ls, corner_coords(spec, i, j));

  std::array<std::vector<char>, 3> flagged;
  for (auto& f : flagged) f.assign(n, 0);

  // Sample `sampled` along `axis` from a centre at half-index c with side `centre_side`.
  auto scan = [&](HalfIndex c, Side centre_side, Family sampled, Axis axis) {
    for (int k = 0; k < stencil.size; ++k) {
      const int hx = wrap_half(c.x + (axis == Axis::X ? stencil.offsets[k] : 0), 2 * spec.nx);
      const int hy = wrap_half(c.y + (axis == Axis::Y ? stencil.offsets[k] : 0), 2 * spec.ny);
      const int storage = hx / 2 + spec.nx * (hy / 2);
      if (masks.side(sampled, storage) != centre_side) flagged[static_cast<int>(sampled)][storage] = 1;
    }
  };

  for (int k = 0; k < n; ++k) {
    const NodeId hxn = node_from_storage(spec, Family::Hx, k);
    scan(half_index(Family::Hx, hxn.i, hxn.j), masks.side(Family::Hx, k), Family::Ez, Axis::Y);
    const NodeId hyn = node_from_storage(spec, Family::Hy, k);
    scan(half_index(Family::Hy, hyn.i, hyn.j), masks.side(Family::Hy, k), Family::Ez, Axis::X);
    const NodeId ezn = node_from_storage(spec, Family::Ez, k);
    const HalfIndex ez_half = half_index(Family::Ez, ezn.i, ezn.j);
    scan(ez_half, masks.side(Family::Ez, k), Family::Hy, Axis::X);
    scan(ez_half, masks.side(Family::Ez, k), Family::Hx, Axis::Y);
  }
  if (options.include_divergence) {
    for (int j = 0; j < spec.ny; ++j) {
      for (int i = 0; i < spec.nx; ++i) {
        const Side cs = masks.corner_sides[i + spec.nx * j];
        scan(corner_half_index(i, j), cs, Family::Hx, Axis::X);
        scan(corner_half_index(i, j), cs, Family::Hy, Axis::Y);
      }
    }
  }

  for (Family f : {Family::Hx, Family::Hy, Family::Ez}) {
    for (int k = 0; k < n; ++k) {
      if (!flagged[static_cast<int>(f)][k]) continue;
      masks.corrected_index[static_cast<int>(f)][k] = static_cast<int>(masks.corrected.size());
      masks.corrected.push_back(node_from_storage(spec, f, k));
    }
  }
  return masks;
}

}  // namespace cfm
