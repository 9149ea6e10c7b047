#include "cfm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "cfm/quadrature.hpp"

namespace cfm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Outward signed distance to the triangle of circle centres, positive outside.
struct TriangleClamp {
  double value;
  Point2 grad;
};

TriangleClamp triangle_clamp(const LevelSet::TriCircle& tc, const Point2& p) {
  const Point2 centroid = (tc.centers[0] + tc.centers[1] + tc.centers[2]) / 3.0;
  TriangleClamp best{-std::numeric_limits<double>::infinity(), Point2::Zero()};
  for (int e = 0; e < 3; ++e) {
    const Point2& a = tc.centers[e];
    const Point2& b = tc.centers[(e + 1) % 3];
    const Point2 dir = (b - a).normalized();
    Point2 n(dir.y(), -dir.x());
    if (n.dot(centroid - a) > 0.0) n = -n;
    const double d = n.dot(p - a);
    if (d > best.value) best = {d, n};
  }
  return best;
}

// Index of the active piece of the tri-circle level set: 0..2 circles, 3 the clamp.
// Ties resolve to the lowest index.
int tri_active(const LevelSet::TriCircle& tc, const Point2& p, double* value) {
  int active = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < 3; ++c) {
    const double g = tc.radius * tc.radius - (p - tc.centers[c]).squaredNorm();
    if (g > best) {
      best = g;
      active = c;
    }
  }
  const TriangleClamp clamp = triangle_clamp(tc, p);
  if (clamp.value > best) {
    best = clamp.value;
    active = 3;
  }
  if (value) *value = best;
  return active;
}

}  // namespace

LevelSet LevelSet::tri_circle(const Point2& top_cusp, double radius) {
  const double s3 = std::sqrt(3.0);
  TriCircle tc;
  tc.radius = radius;
  tc.centers[0] = top_cusp + Point2(radius, 0.0);
  tc.centers[1] = top_cusp - Point2(radius, 0.0);
  tc.centers[2] = top_cusp - Point2(0.0, s3 * radius);
  return LevelSet(tc);
}

double LevelSet::star_radius(const Star& s, double theta) { return s.r0 + s.amplitude * std::sin(s.omega * theta); }

double LevelSet::eval(const Point2& p) const {
  return std::visit(
      Overloaded{
          [&](const Circle& c) { return (p - c.center).squaredNorm() - c.radius * c.radius; },
          [&](const Star& s) {
            const Point2 d = p - s.center;
            const double r = star_radius(s, std::atan2(d.y(), d.x()));
            return d.squaredNorm() - r * r;
          },
          [&](const TriCircle& tc) {
            double v = 0.0;
            tri_active(tc, p, &v);
            return v;
          },
          [&](const HalfPlane& h) { return h.normal.dot(p - h.origin); },
      },
      shape_);
}

Point2 LevelSet::grad(const Point2& p) const {
  return std::visit(
      Overloaded{
          [&](const Circle& c) -> Point2 { return 2.0 * (p - c.center); },
          [&](const Star& s) -> Point2 {
            const Point2 d = p - s.center;
            const double rho2 = d.squaredNorm();
            if (rho2 == 0.0) return Point2::Zero();
            const double theta = std::atan2(d.y(), d.x());
            const double r = star_radius(s, theta);
            const double dr = s.amplitude * s.omega * std::cos(s.omega * theta);
            const Point2 dtheta(-d.y() / rho2, d.x() / rho2);
            return 2.0 * d - 2.0 * r * dr * dtheta;
          },
          [&](const TriCircle& tc) -> Point2 {
            const int a = tri_active(tc, p, nullptr);
            if (a == 3) return triangle_clamp(tc, p).grad;
            return -2.0 * (p - tc.centers[a]);
          },
          [&](const HalfPlane& h) -> Point2 { return h.normal; },
      },
      shape_);
}

Eigen::Matrix2d LevelSet::hessian(const Point2& p) const {
  constexpr double step = 1e-6;
  Eigen::Matrix2d h;
  for (int k = 0; k < 2; ++k) {
    Point2 e = Point2::Zero();
    e[k] = step;
    h.col(k) = (grad(p + e) - grad(p - e)) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

double level_set_eval(const LevelSet& ls, const Point2& p) { return ls.eval(p); }

Side side_of(const LevelSet& ls, const Point2& p) { return ls.eval(p) >= 0.0 ? Side::Plus : Side::Minus; }

Point2 unit_normal(const LevelSet& ls, const Point2& q) {
  const Point2 g = ls.grad(q);
  const double n = g.norm();
  if (n < 1e-14) throw Error(ErrorCode::DegenerateGradient, "unit_normal: vanishing level-set gradient");
  return g / n;
}

namespace {

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Damped Newton on (phi(q) = 0, (p - q) x grad phi(q) = 0) from the seed q.
std::optional<Point2> newton_projection(const LevelSet& ls, const Point2& p, Point2 q) {
  constexpr int kMaxIterations = 50;
  auto residual = [&](const Point2& x, Point2& grad_out) {
    grad_out = ls.grad(x);
    return Eigen::Vector2d(ls.eval(x), cross(p - x, grad_out));
  };

  Point2 gq;
  Eigen::Vector2d f = residual(q, gq);
  for (int it = 0; it < kMaxIterations; ++it) {
    const double gnorm = gq.norm();
    if (gnorm < 1e-14) return std::nullopt;
    const double dist = (p - q).norm();
    const bool on_curve = std::abs(f[0]) <= 1e-14 * std::max(1.0, gnorm);
    const bool aligned = dist <= 1e-14 || std::abs(f[1]) <= 1e-12 * dist * gnorm;
    if (on_curve && aligned) return q;

    const Eigen::Matrix2d h = ls.hessian(q);
    const Point2 r = p - q;
    Eigen::Matrix2d jac;
    jac(0, 0) = gq.x();
    jac(0, 1) = gq.y();
    jac(1, 0) = -gq.y() + r.x() * h(1, 0) - r.y() * h(0, 0);
    jac(1, 1) = gq.x() + r.x() * h(1, 1) - r.y() * h(0, 1);
    const double det = jac.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return std::nullopt;
    const Eigen::Vector2d step = -jac.inverse() * f;

    double alpha = 1.0;
    Point2 g_trial;
    Eigen::Vector2d f_trial;
    Point2 q_trial;
    bool accepted = false;
    for (int ls_it = 0; ls_it < 30; ++ls_it) {
      q_trial = q + alpha * step;
      f_trial = residual(q_trial, g_trial);
      if (f_trial.squaredNorm() < f.squaredNorm() || f_trial.squaredNorm() == 0.0) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Stagnation at round-off level still counts as converged.
      if (std::abs(f[0]) <= 1e-12 && std::abs(f[1]) <= 1e-10 * std::max(dist, 1e-300) * gnorm) return q;
      return std::nullopt;
    }
    q = q_trial;
    gq = g_trial;
    f = f_trial;
  }
  return std::nullopt;
}

std::optional<Point2> newton_projection(const LevelSet& ls, const Point2& p) {
  const Point2 g = ls.grad(p);
  const double gn2 = g.squaredNorm();
  if (gn2 < 1e-28) return std::nullopt;
  return newton_projection(ls, p, p - ls.eval(p) * g / gn2);
}

constexpr int kRingSamples = 512;

Point2 on_ring(const Point2& p, double radius, double angle) {
  return p + radius * Point2(std::cos(angle), std::sin(angle));
}

// First sign change of phi around the circle of the given radius, refined by bisection.
std::optional<Point2> ring_root(const LevelSet& ls, const Point2& p, double radius) {
  const double two_pi = 2.0 * std::numbers::pi;
  double prev_angle = 0.0;
  double prev = ls.eval(on_ring(p, radius, prev_angle));
  for (int s = 1; s <= kRingSamples; ++s) {
    const double angle = two_pi * s / kRingSamples;
    const double cur = ls.eval(on_ring(p, radius, angle));
    if ((prev >= 0.0) != (cur >= 0.0)) {
      double lo = prev_angle;
      double hi = angle;
      const bool lo_plus = prev >= 0.0;
      for (int b = 0; b < 80; ++b) {
        const double mid = 0.5 * (lo + hi);
        if ((ls.eval(on_ring(p, radius, mid)) >= 0.0) == lo_plus)
          lo = mid;
        else
          hi = mid;
      }
      const Point2 a = on_ring(p, radius, lo);
      const Point2 b = on_ring(p, radius, hi);
      return std::abs(ls.eval(a)) <= std::abs(ls.eval(b)) ? a : b;
    }
    prev = cur;
    prev_angle = angle;
  }
  return std::nullopt;
}

// Expanding-ring search for the nearest crossing; used where Newton stalls or lands on a
// farther branch (cusps, deep star lobes).
std::optional<Point2> ring_projection(const LevelSet& ls, const Point2& p) {
  const double phi = ls.eval(p);
  if (phi == 0.0) return p;
  const Point2 g = ls.grad(p);
  double inner = 0.0;
  double outer = std::max(1e-9, 0.5 * std::abs(phi) / std::max(g.norm(), 1e-12));
  std::optional<Point2> found;
  while (outer < 4.0) {
    found = ring_root(ls, p, outer);
    if (found) break;
    inner = outer;
    outer *= 1.5;
  }
  if (!found) return std::nullopt;
  for (int b = 0; b < 40; ++b) {
    const double mid = 0.5 * (inner + outer);
    if (auto q = ring_root(ls, p, mid)) {
      outer = mid;
      found = q;
    } else {
      inner = mid;
    }
  }
  return found;
}

}  // namespace

Point2 closest_point(const LevelSet& ls, const Point2& p) {
  if (auto q = newton_projection(ls, p)) {
    const double d = (p - *q).norm();
    if (d <= 1e-14 || !ring_root(ls, p, (1.0 - 1e-6) * d)) return *q;
  }
  const auto r = ring_projection(ls, p);
  if (!r) throw Error(ErrorCode::NonConvergence, "closest_point: projection did not converge");
  // Polish the ring point; keep it when Newton walks away (cusps).
  if (auto q = newton_projection(ls, p, *r)) {
    if ((p - *q).norm() <= (p - *r).norm() + 1e-12) return *q;
  }
  return *r;
}

namespace {

constexpr int kSubGrid = 32;

struct EdgeCrossing {
  Point2 point;
  bool on_boundary;
  Point2 a;  // edge endpoints, used to refine boundary crossings
  Point2 b;
};

Point2 refine_on_edge(const LevelSet& ls, Point2 a, Point2 b) {
  const bool a_plus = ls.eval(a) >= 0.0;
  for (int it = 0; it < 100; ++it) {
    const Point2 m = 0.5 * (a + b);
    if (m == a || m == b) break;
    if ((ls.eval(m) >= 0.0) == a_plus)
      a = m;
    else
      b = m;
  }
  return std::abs(ls.eval(a)) <= std::abs(ls.eval(b)) ? a : b;
}

// Polylines through the sub-grid crossings, ordered along the curve.
std::vector<std::vector<Point2>> extract_chains(const LevelSet& ls, const Square& square) {
  const int n = kSubGrid;
  const double h = square.side / n;
  const Point2 origin = square.center - Point2(square.half(), square.half());
  auto vertex = [&](int i, int j) { return Point2(origin + Point2(i * h, j * h)); };

  std::vector<double> phi((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) phi[j * (n + 1) + i] = ls.eval(vertex(i, j));
  auto value = [&](int i, int j) { return phi[j * (n + 1) + i]; };
  auto plus = [&](int i, int j) { return value(i, j) >= 0.0; };

  // Edge keys: horizontal (i,j)-(i+1,j) -> 2*(j*(n+1)+i); vertical (i,j)-(i,j+1) -> +1.
  auto h_key = [&](int i, int j) { return 2 * (j * (n + 1) + i); };
  auto v_key = [&](int i, int j) { return 2 * (j * (n + 1) + i) + 1; };

  std::map<int, EdgeCrossing> crossings;
  auto crossing = [&](int key, Point2 a, Point2 b, double fa, double fb, bool boundary) {
    if (crossings.count(key)) return;
    const double t = fa / (fa - fb);
    crossings[key] = {a + t * (b - a), boundary, a, b};
  };

  std::map<int, std::vector<int>> links;
  auto link = [&](int k1, int k2) {
    links[k1].push_back(k2);
    links[k2].push_back(k1);
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const bool s00 = plus(i, j), s10 = plus(i + 1, j), s11 = plus(i + 1, j + 1), s01 = plus(i, j + 1);
      // edges in counter-clockwise order: bottom, right, top, left
      std::array<int, 4> keys{h_key(i, j), v_key(i + 1, j), h_key(i, j + 1), v_key(i, j)};
      std::array<std::pair<int, int>, 4> ea{{{i, j}, {i + 1, j}, {i, j + 1}, {i, j}}};
      std::array<std::pair<int, int>, 4> eb{{{i + 1, j}, {i + 1, j + 1}, {i + 1, j + 1}, {i, j + 1}}};
      std::array<bool, 4> boundary{j == 0, i + 1 == n, j + 1 == n, i == 0};
      std::array<bool, 4> cut{s00 != s10, s10 != s11, s01 != s11, s00 != s01};
      std::vector<int> active;
      for (int e = 0; e < 4; ++e) {
        if (!cut[e]) continue;
        const auto [ai, aj] = ea[e];
        const auto [bi, bj] = eb[e];
        crossing(keys[e], vertex(ai, aj), vertex(bi, bj), value(ai, aj), value(bi, bj), boundary[e]);
        active.push_back(e);
      }
      if (active.size() == 2) {
        link(keys[active[0]], keys[active[1]]);
      } else if (active.size() == 4) {
        // saddle: decide with the cell-centre sign
        const bool centre_plus = ls.eval(vertex(i, j) + Point2(0.5 * h, 0.5 * h)) >= 0.0;
        if (centre_plus == s00) {
          link(keys[0], keys[1]);
          link(keys[2], keys[3]);
        } else {
          link(keys[0], keys[3]);
          link(keys[1], keys[2]);
        }
      }
    }
  }

  std::vector<std::vector<Point2>> chains;
  std::map<int, bool> used;
  auto walk = [&](int start) {
    std::vector<Point2> chain;
    int prev = -1;
    int cur = start;
    while (true) {
      used[cur] = true;
      chain.push_back(crossings[cur].point);
      int next = -1;
      for (int nb : links[cur]) {
        if (nb != prev && !used[nb]) {
          next = nb;
          break;
        }
      }
      if (next < 0) {
        // close a loop
        for (int nb : links[cur])
          if (nb == start && nb != prev && chain.size() > 2) chain.push_back(crossings[start].point);
        break;
      }
      prev = cur;
      cur = next;
    }
    return chain;
  };

  for (auto& [key, c] : crossings) {
    if (c.on_boundary) c.point = refine_on_edge(ls, c.a, c.b);
  }
  for (const auto& [key, c] : crossings) {
    if (c.on_boundary && !used[key]) chains.push_back(walk(key));
  }
  for (const auto& [key, c] : crossings) {
    if (!used[key]) chains.push_back(walk(key));
  }
  return chains;
}

// Projection of points already next to the curve (chord points); stays on the local branch.
Point2 local_projection(const LevelSet& ls, const Point2& p) {
  if (auto q = newton_projection(ls, p)) return *q;
  return closest_point(ls, p);
}

bool is_straight(const std::vector<Point2>& chain, double scale) {
  const Point2 chord = chain.back() - chain.front();
  const double len = chord.norm();
  if (len <= 0.0) return false;
  for (const Point2& v : chain)
    if (std::abs(cross(chord, v - chain.front())) / len > 1e-10 * scale) return false;
  return true;
}

}  // namespace

std::vector<InterfaceSegment> interface_segments(const LevelSet& ls, const Square& square, int n_q) {
  const auto chains = extract_chains(ls, square);
  const QuadratureRule gauss = gauss_legendre(n_q, 0.0, 1.0);
  std::vector<InterfaceSegment> segments;

  for (const auto& chain : chains) {
    if (chain.size() < 2) continue;
    std::vector<double> cumulative(chain.size(), 0.0);
    for (std::size_t v = 1; v < chain.size(); ++v)
      cumulative[v] = cumulative[v - 1] + (chain[v] - chain[v - 1]).norm();
    const double length = cumulative.back();
    if (length <= 1e-12 * square.side) continue;
    const bool closed = (chain.front() - chain.back()).norm() <= 1e-14 * square.side;

    // One Gauss group integrates a straight piece exactly; curved chains are split.
    const int pieces =
        !closed && is_straight(chain, square.side) ? 1 : std::max(2, static_cast<int>(std::ceil(4.0 * length / square.side)));
    std::vector<Point2> knots(pieces + 1);
    std::size_t v = 1;
    for (int k = 0; k <= pieces; ++k) {
      if (k == 0) {
        knots[k] = closed ? local_projection(ls, chain.front()) : chain.front();
        continue;
      }
      if (k == pieces) {
        knots[k] = closed ? knots[0] : chain.back();
        continue;
      }
      const double s = length * k / pieces;
      while (v + 1 < chain.size() && cumulative[v] < s) ++v;
      const double span = cumulative[v] - cumulative[v - 1];
      const double t = span > 0.0 ? (s - cumulative[v - 1]) / span : 0.0;
      knots[k] = local_projection(ls, chain[v - 1] + t * (chain[v] - chain[v - 1]));
    }

    for (int k = 0; k < pieces; ++k) {
      InterfaceSegment seg;
      seg.start = knots[k];
      seg.end = knots[k + 1];
      const Point2 chord = seg.end - seg.start;
      const double chord_len = chord.norm();
      if (chord_len <= 1e-15) continue;
      constexpr double delta = 1e-4;
      for (std::size_t g = 0; g < gauss.size(); ++g) {
        const double s = gauss.nodes[g];
        const Point2 q = local_projection(ls, seg.start + s * chord);
        const Point2 qp = local_projection(ls, seg.start + (s + delta) * chord);
        const Point2 qm = local_projection(ls, seg.start + (s - delta) * chord);
        const double speed = std::min((qp - qm).norm() / (2.0 * delta), 3.0 * chord_len);
        seg.points.push_back({q, gauss.weights[g] * speed, unit_normal(ls, q)});
      }
      segments.push_back(std::move(seg));
    }
  }

  if (segments.empty())
    throw Error(ErrorCode::EmptyIntersection, "interface_segments: no interface crossing inside the patch");
  return segments;
}

}  // namespace cfm
