#include "tracenorm/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "tracenorm/error.hpp"

namespace tracenorm {

namespace {

double seg_length(const SimplicialMesh& m, Index c) {
  const auto vs = m.cell(c);
  const Point& a = m.vertex(vs[0]);
  const Point& b = m.vertex(vs[1]);
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

std::vector<int> vertex_degree(const SimplicialMesh& m) {
  std::vector<int> deg(static_cast<std::size_t>(m.num_vertices()), 0);
  for (Index c = 0; c < m.num_cells(); ++c)
    for (Index v : m.cell(c)) ++deg[v];
  return deg;
}

std::string format_point(const Point& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", p[0], p[1], p[2]);
  return buf;
}

using GridPoint = std::array<int, 3>;

// Polylines given as grid-index points (scaled by 2 so half-cells stay integral).
struct MatchedBuilder {
  const SimplicialMesh& host;
  int n;
  std::map<Index, Index> curve_of_host;
  std::vector<Index> host_of_curve;
  std::vector<Point> points;
  std::vector<Index> cells;

  Point coords(const GridPoint& g) const {
    return {g[0] / (2.0 * n), g[1] / (2.0 * n), g[2] / (2.0 * n)};
  }

  Index add_vertex(const GridPoint& g) {
    for (int r = 0; r < 3; ++r)
      if (g[r] % 2 != 0) return -1;
    const Index hv = grid_vertex(n, 3, g[0] / 2, g[1] / 2, g[2] / 2);
    auto [it, inserted] = curve_of_host.try_emplace(hv, static_cast<Index>(host_of_curve.size()));
    if (inserted) {
      host_of_curve.push_back(hv);
      points.push_back(host.vertex(hv));
    }
    return it->second;
  }

  void add_polyline(GridPoint from, GridPoint step, int count) {
    for (int s = 0; s < count; ++s) {
      GridPoint to{from[0] + step[0], from[1] + step[1], from[2] + step[2]};
      const Index a = add_vertex(from);
      const Index b = add_vertex(to);
      if (a < 0 || b < 0)
        throw Error("matched_curve: segment " + format_point(coords(from)) + " - " + format_point(coords(to)) +
                    " is not an edge of the mesh");
      cells.push_back(a);
      cells.push_back(b);
      from = to;
    }
  }
};

void check_segments_are_edges(const SimplicialMesh& host, const SimplicialMesh& curve,
                              const std::vector<Index>& host_vertex) {
  for (Index c = 0; c < curve.num_cells(); ++c) {
    const auto vs = curve.cell(c);
    const Index a = host_vertex[vs[0]], b = host_vertex[vs[1]];
    const Point& pa = host.vertex(a);
    const Point& pb = host.vertex(b);
    const Point mid{0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]), 0.5 * (pa[2] + pb[2])};
    const auto loc = locate_point(host, mid);
    const auto cell = host.cell(loc.cell);
    const bool has_a = std::find(cell.begin(), cell.end(), a) != cell.end();
    const bool has_b = std::find(cell.begin(), cell.end(), b) != cell.end();
    if (!has_a || !has_b)
      throw Error("matched_curve: segment " + format_point(pa) + " - " + format_point(pb) +
                  " is not an edge of the mesh");
  }
}

bool inside_box(const Point& p, int gdim) {
  for (int r = 0; r < gdim; ++r)
    if (p[r] < -1e-12 || p[r] > 1.0 + 1e-12) return false;
  return true;
}

}  // namespace

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Gamma1: return "gamma1";
    case CurveKind::Gamma2: return "gamma2";
    case CurveKind::Circle: return "circle";
    case CurveKind::SquareLoop: return "square-loop";
    case CurveKind::Spiral: return "spiral";
    case CurveKind::Tree: return "tree";
  }
  return "unknown";
}

CurveKind curve_kind_from_string(std::string_view name) {
  for (CurveKind k : {CurveKind::Gamma1, CurveKind::Gamma2, CurveKind::Circle, CurveKind::SquareLoop,
                      CurveKind::Spiral, CurveKind::Tree})
    if (to_string(k) == name) return k;
  throw Error("unknown curve kind '" + std::string(name) + "'");
}

bool EmbeddedCurve::closed() const {
  if (mesh->num_cells() == 0) return false;
  for (int d : vertex_degree(*mesh))
    if (d != 2) return false;
  return true;
}

double EmbeddedCurve::length() const {
  double s = 0.0;
  for (Index c = 0; c < mesh->num_cells(); ++c) s += seg_length(*mesh, c);
  return s;
}

double EmbeddedCurve::max_segment() const {
  double s = 0.0;
  for (Index c = 0; c < mesh->num_cells(); ++c) s = std::max(s, seg_length(*mesh, c));
  return s;
}

double EmbeddedCurve::min_segment() const {
  double s = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < mesh->num_cells(); ++c) s = std::min(s, seg_length(*mesh, c));
  return s;
}

std::vector<Index> EmbeddedCurve::endpoints() const {
  std::vector<Index> out;
  const auto deg = vertex_degree(*mesh);
  for (Index v = 0; v < mesh->num_vertices(); ++v)
    if (deg[v] == 1) out.push_back(v);
  return out;
}

EmbeddedCurve matched_curve(const SimplicialMesh& mesh, CurveKind kind) {
  if (mesh.tdim() != 3 || !mesh.grid()) throw Error("matched_curve: host must be a structured cube mesh");
  const int n = mesh.grid()->cells_per_axis;
  MatchedBuilder b{mesh, n, {}, {}, {}, {}};
  // Coordinates below are in units of half a grid cell.
  switch (kind) {
    case CurveKind::Gamma1:
      b.add_polyline({0, n, n}, {2, 0, 0}, n);
      break;
    case CurveKind::Gamma2:
      b.add_polyline({0, 0, 0}, {2, 2, 2}, n);
      break;
    case CurveKind::Tree: {
      if (n % 4 != 0)
        throw Error("matched_curve: tree needs cells per axis divisible by 4, got " + std::to_string(n));
      const int q = n / 4;
      b.add_polyline({0, n, n}, {2, 0, 0}, 2 * q);
      for (int sy : {-1, 1}) {
        b.add_polyline({n, n, n}, {0, 2 * sy, 0}, q);
        const GridPoint tip{n, n + sy * n / 2, n};
        for (int sz : {-1, 1}) b.add_polyline(tip, {0, 0, 2 * sz}, q);
      }
      break;
    }
    default:
      throw Error("matched_curve: curve kind '" + std::string(to_string(kind)) + "' cannot be matched");
  }
  auto cm = std::make_shared<const SimplicialMesh>(1, 3, std::move(b.points), std::move(b.cells));
  check_segments_are_edges(mesh, *cm, b.host_of_curve);
  return EmbeddedCurve{kind, std::move(cm), std::move(b.host_of_curve)};
}

EmbeddedCurve independent_curve(CurveKind kind, int segments, const CurveGeometry& g) {
  if (segments < 4) throw Error("independent_curve: need at least 4 segments");
  std::vector<Point> pts;
  bool closed = false;
  int gdim = 3;
  const double pi = std::numbers::pi;
  switch (kind) {
    case CurveKind::Circle:
      gdim = 2;
      closed = true;
      for (int k = 0; k < segments; ++k) {
        const double t = 2.0 * pi * k / segments;
        pts.push_back({0.5 + g.circle_radius * std::cos(t), 0.5 + g.circle_radius * std::sin(t), 0.0});
      }
      break;
    case CurveKind::SquareLoop: {
      if (segments % 4 != 0) throw Error("independent_curve: square loop needs a multiple of 4 segments");
      closed = true;
      const int per_side = segments / 4;
      const double lo = 0.5 - 0.5 * g.square_side, hi = 0.5 + 0.5 * g.square_side;
      const Point corners[4] = {{lo, lo, g.square_height}, {hi, lo, g.square_height}, {hi, hi, g.square_height},
                                {lo, hi, g.square_height}};
      for (int side = 0; side < 4; ++side) {
        const Point& a = corners[side];
        const Point& c = corners[(side + 1) % 4];
        for (int k = 0; k < per_side; ++k) {
          const double t = static_cast<double>(k) / per_side;
          pts.push_back({a[0] + t * (c[0] - a[0]), a[1] + t * (c[1] - a[1]), a[2] + t * (c[2] - a[2])});
        }
      }
      break;
    }
    case CurveKind::Spiral: {
      const double phi_end = 2.0 * pi * g.spiral_turns;
      for (int k = 0; k <= segments; ++k) {
        const double phi = phi_end * k / segments;
        pts.push_back({0.5 + g.spiral_radius * std::cos(phi), 0.5 + g.spiral_radius * std::sin(phi),
                       g.spiral_z0 + (g.spiral_z1 - g.spiral_z0) * phi / phi_end});
      }
      break;
    }
    case CurveKind::Gamma1:
      for (int k = 0; k <= segments; ++k) pts.push_back({static_cast<double>(k) / segments, 0.5, 0.5});
      break;
    case CurveKind::Gamma2:
      for (int k = 0; k <= segments; ++k) {
        const double t = static_cast<double>(k) / segments;
        pts.push_back({t, t, t});
      }
      break;
    case CurveKind::Tree:
      throw Error("independent_curve: tree is only available as a matched curve");
  }
  for (const Point& p : pts)
    if (!inside_box(p, gdim)) throw Error("independent_curve: curve leaves the domain at " + format_point(p));
  std::vector<Index> cells;
  const Index nv = static_cast<Index>(pts.size());
  for (Index k = 0; k < segments; ++k) {
    cells.push_back(k);
    cells.push_back(closed ? (k + 1) % nv : k + 1);
  }
  auto cm = std::make_shared<const SimplicialMesh>(1, gdim, std::move(pts), std::move(cells));
  return EmbeddedCurve{kind, std::move(cm), {}};
}

double check_infsup_ratio(const SimplicialMesh& host, const EmbeddedCurve& curve) {
  const SimplicialMesh& cm = *curve.mesh;
  if (cm.gdim() != host.gdim()) throw DimensionError("check_infsup_ratio: curve and host dimensions differ");
  constexpr int samples = 16;
  std::set<Index> hit;
  for (Index c = 0; c < cm.num_cells(); ++c) {
    const auto vs = cm.cell(c);
    const Point& a = cm.vertex(vs[0]);
    const Point& b = cm.vertex(vs[1]);
    for (int k = 0; k <= samples; ++k) {
      const double t = static_cast<double>(k) / samples;
      hit.insert(locate_point(host, {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])})
                     .cell);
    }
  }
  double h = 0.0;
  for (Index c : hit) h = std::max(h, host.cell_diameter(c));
  return h / curve.min_segment();
}

}  // namespace tracenorm
