#include "tracenorm/mesh.hpp"

#include "tracenorm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace tracenorm {

namespace {

constexpr double kInsideTol = 1e-12;
constexpr double kOutsideTol = 1e-10;

double distance(const Point& a, const Point& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

SimplicialMesh::SimplicialMesh(int tdim, int gdim, std::vector<Point> vertices, std::vector<Index> cells,
                               std::optional<GridInfo> grid)
    : tdim_(tdim), gdim_(gdim), vertices_(std::move(vertices)), cells_(std::move(cells)), grid_(grid) {
  if (tdim < 1 || tdim > 3 || gdim < tdim || gdim > 3) throw DimensionError("SimplicialMesh: invalid dimensions");
  if (cells_.size() % (tdim + 1) != 0) throw DimensionError("SimplicialMesh: cell list length not a multiple of tdim+1");
  for (Index v : cells_)
    if (v < 0 || v >= num_vertices()) throw DimensionError("SimplicialMesh: cell references unknown vertex");
}

double SimplicialMesh::cell_measure(Index c) const {
  const auto vs = cell(c);
  const Point& p0 = vertices_[vs[0]];
  double j[3][3] = {};
  for (int k = 0; k < tdim_; ++k)
    for (int r = 0; r < 3; ++r) j[r][k] = vertices_[vs[k + 1]][r] - p0[r];
  double g[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int a = 0; a < tdim_; ++a)
    for (int b = 0; b < tdim_; ++b) {
      double s = 0.0;
      for (int r = 0; r < 3; ++r) s += j[r][a] * j[r][b];
      g[a][b] = s;
    }
  const double factorial[] = {1.0, 1.0, 2.0, 6.0};
  return std::sqrt(std::max(0.0, det3(g))) / factorial[tdim_];
}

Point SimplicialMesh::cell_midpoint(Index c) const {
  Point m{0.0, 0.0, 0.0};
  const auto vs = cell(c);
  for (Index v : vs)
    for (int r = 0; r < 3; ++r) m[r] += vertices_[v][r];
  for (double& x : m) x /= static_cast<double>(vs.size());
  return m;
}

double SimplicialMesh::cell_diameter(Index c) const {
  const auto vs = cell(c);
  double d = 0.0;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) d = std::max(d, distance(vertices_[vs[a]], vertices_[vs[b]]));
  return d;
}

std::vector<std::array<Index, 2>> SimplicialMesh::edges() const {
  std::vector<std::array<Index, 2>> e;
  e.reserve(static_cast<std::size_t>(num_cells()) * (tdim_ + 1) * tdim_ / 2);
  for (Index c = 0; c < num_cells(); ++c) {
    const auto vs = cell(c);
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a + 1; b < vs.size(); ++b) e.push_back({std::min(vs[a], vs[b]), std::max(vs[a], vs[b])});
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

double SimplicialMesh::h_min() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : edges()) h = std::min(h, distance(vertices_[a], vertices_[b]));
  return h;
}

double SimplicialMesh::h_max() const {
  double h = 0.0;
  for (const auto& [a, b] : edges()) h = std::max(h, distance(vertices_[a], vertices_[b]));
  return h;
}

std::vector<Index> SimplicialMesh::boundary_vertices() const {
  std::vector<std::array<Index, 3>> facets;
  facets.reserve(static_cast<std::size_t>(num_cells()) * (tdim_ + 1));
  for (Index c = 0; c < num_cells(); ++c) {
    const auto vs = cell(c);
    for (int skip = 0; skip <= tdim_; ++skip) {
      std::array<Index, 3> f{-1, -1, -1};
      int k = 0;
      for (int a = 0; a <= tdim_; ++a)
        if (a != skip) f[k++] = vs[a];
      std::sort(f.begin(), f.begin() + k);
      facets.push_back(f);
    }
  }
  std::sort(facets.begin(), facets.end());
  std::vector<char> on_boundary(vertices_.size(), 0);
  for (std::size_t i = 0; i < facets.size();) {
    std::size_t j = i;
    while (j < facets.size() && facets[j] == facets[i]) ++j;
    if (j - i == 1)
      for (Index v : facets[i])
        if (v >= 0) on_boundary[v] = 1;
    i = j;
  }
  std::vector<Index> out;
  for (Index v = 0; v < num_vertices(); ++v)
    if (on_boundary[v]) out.push_back(v);
  return out;
}

void SimplicialMesh::write_text(std::ostream& os) const {
  os.precision(17);
  os << tdim_ << ' ' << gdim_ << '\n' << num_vertices() << '\n';
  for (const Point& p : vertices_) {
    for (int r = 0; r < gdim_; ++r) os << (r ? " " : "") << p[r];
    os << '\n';
  }
  os << num_cells() << '\n';
  for (Index c = 0; c < num_cells(); ++c) {
    const auto vs = cell(c);
    for (std::size_t a = 0; a < vs.size(); ++a) os << (a ? " " : "") << vs[a];
    os << '\n';
  }
}

void SimplicialMesh::write_vtk(std::ostream& os) const {
  const int vtk_type[] = {0, 3, 5, 10};
  os.precision(17);
  os << "# vtk DataFile Version 3.0\ntracenorm mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << num_vertices() << " double\n";
  for (const Point& p : vertices_) os << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  os << "CELLS " << num_cells() << ' ' << num_cells() * (tdim_ + 2) << '\n';
  for (Index c = 0; c < num_cells(); ++c) {
    os << tdim_ + 1;
    for (Index v : cell(c)) os << ' ' << v;
    os << '\n';
  }
  os << "CELL_TYPES " << num_cells() << '\n';
  for (Index c = 0; c < num_cells(); ++c) os << vtk_type[tdim_] << '\n';
}

Index grid_vertex(int n, int dim, int i, int j, int k) {
  const Index m = n + 1;
  if (dim == 1) return i;
  if (dim == 2) return i + m * j;
  return i + m * (j + m * k);
}

SimplicialMesh interval_mesh(int cells) {
  if (cells < 1) throw DimensionError("interval_mesh: need at least one cell");
  std::vector<Point> v;
  std::vector<Index> c;
  for (int i = 0; i <= cells; ++i) v.push_back({static_cast<double>(i) / cells, 0.0, 0.0});
  for (int i = 0; i < cells; ++i) {
    c.push_back(i);
    c.push_back(i + 1);
  }
  return SimplicialMesh(1, 1, std::move(v), std::move(c), GridInfo{cells});
}

SimplicialMesh square_mesh(int n) {
  if (n < 1) throw DimensionError("square_mesh: need at least one cell per axis");
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0});
  std::vector<Index> c;
  c.reserve(static_cast<std::size_t>(n) * n * 6);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Index v00 = grid_vertex(n, 2, i, j, 0), v10 = grid_vertex(n, 2, i + 1, j, 0);
      const Index v01 = grid_vertex(n, 2, i, j + 1, 0), v11 = grid_vertex(n, 2, i + 1, j + 1, 0);
      c.insert(c.end(), {v00, v10, v11, v00, v01, v11});
    }
  return SimplicialMesh(2, 2, std::move(v), std::move(c), GridInfo{n});
}

SimplicialMesh cube_mesh(int n) {
  if (n < 1) throw DimensionError("cube_mesh: need at least one cell per axis");
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        v.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n});
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<Index> c;
  c.reserve(static_cast<std::size_t>(n) * n * n * 24);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          int idx[3] = {i, j, k};
          c.push_back(grid_vertex(n, 3, idx[0], idx[1], idx[2]));
          for (int step = 0; step < 2; ++step) {
            ++idx[p[step]];
            c.push_back(grid_vertex(n, 3, idx[0], idx[1], idx[2]));
          }
          c.push_back(grid_vertex(n, 3, i + 1, j + 1, k + 1));
        }
  return SimplicialMesh(3, 3, std::move(v), std::move(c), GridInfo{n});
}

std::array<double, 4> barycentric(const SimplicialMesh& mesh, Index cell, const Point& x) {
  const int d = mesh.tdim();
  if (d != mesh.gdim()) throw DimensionError("barycentric: cell must be full-dimensional");
  const auto vs = mesh.cell(cell);
  const Point& p0 = mesh.vertex(vs[0]);
  std::array<double, 4> lam{0.0, 0.0, 0.0, 0.0};
  if (d == 1) {
    lam[1] = (x[0] - p0[0]) / (mesh.vertex(vs[1])[0] - p0[0]);
  } else if (d == 2) {
    const Point& p1 = mesh.vertex(vs[1]);
    const Point& p2 = mesh.vertex(vs[2]);
    const double a = p1[0] - p0[0], b = p2[0] - p0[0], c = p1[1] - p0[1], e = p2[1] - p0[1];
    const double det = a * e - b * c;
    const double rx = x[0] - p0[0], ry = x[1] - p0[1];
    lam[1] = (e * rx - b * ry) / det;
    lam[2] = (-c * rx + a * ry) / det;
  } else {
    double m[3][3];
    for (int k = 0; k < 3; ++k)
      for (int r = 0; r < 3; ++r) m[r][k] = mesh.vertex(vs[k + 1])[r] - p0[r];
    const double det = det3(m);
    const double rhs[3] = {x[0] - p0[0], x[1] - p0[1], x[2] - p0[2]};
    for (int k = 0; k < 3; ++k) {
      double mk[3][3];
      for (int r = 0; r < 3; ++r)
        for (int q = 0; q < 3; ++q) mk[r][q] = q == k ? rhs[r] : m[r][q];
      lam[k + 1] = det3(mk) / det;
    }
  }
  lam[0] = 1.0;
  for (int k = 1; k <= d; ++k) lam[0] -= lam[k];
  return lam;
}

namespace {

double min_coordinate(const std::array<double, 4>& lam, int d) {
  double m = lam[0];
  for (int k = 1; k <= d; ++k) m = std::min(m, lam[k]);
  return m;
}

PointLocation finalize(Index cell, std::array<double, 4> lam, int d) {
  double sum = 0.0;
  for (int k = 0; k <= d; ++k) {
    lam[k] = std::clamp(lam[k], 0.0, 1.0);
    sum += lam[k];
  }
  for (int k = 0; k <= d; ++k) lam[k] /= sum;
  return {cell, lam};
}

}  // namespace

PointLocation locate_point(const SimplicialMesh& mesh, const Point& x) {
  const int d = mesh.gdim();
  if (mesh.tdim() != d) throw DimensionError("locate_point: mesh must be full-dimensional");

  Index best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  std::array<double, 4> best_lam{};
  auto consider = [&](Index c) {
    const auto lam = barycentric(mesh, c, x);
    const double m = min_coordinate(lam, d);
    if (m > best_min) {
      best_min = m;
      best = c;
      best_lam = lam;
    }
    return m >= -kInsideTol;
  };
  auto outside = [&] {
    return Error("locate_point: point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " +
                 std::to_string(x[2]) + ") lies outside the mesh");
  };

  if (mesh.grid()) {
    const int n = mesh.grid()->cells_per_axis;
    int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int r = 0; r < d; ++r) {
      if (x[r] < -kOutsideTol || x[r] > 1.0 + kOutsideTol) throw outside();
      lo[r] = std::clamp(static_cast<int>(std::floor((x[r] - 1e-9) * n)), 0, n - 1);
      hi[r] = std::clamp(static_cast<int>(std::floor((x[r] + 1e-9) * n)), 0, n - 1);
    }
    const int per_cube = d == 3 ? 6 : (d == 2 ? 2 : 1);
    // Cube ids grow with k, then j, then i, so this visits cells in increasing id order.
    for (int k = lo[2]; k <= hi[2]; ++k)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const Index cube = d == 1 ? i : (d == 2 ? i + n * j : i + n * (j + n * k));
          for (int t = 0; t < per_cube; ++t)
            if (consider(cube * per_cube + t)) return finalize(cube * per_cube + t, best_lam, d);
        }
  } else {
    for (Index c = 0; c < mesh.num_cells(); ++c)
      if (consider(c)) return finalize(c, best_lam, d);
  }
  if (best >= 0 && best_min >= -1e-8) return finalize(best, best_lam, d);
  throw outside();
}

}  // namespace tracenorm
