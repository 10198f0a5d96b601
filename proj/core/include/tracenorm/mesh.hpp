#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tracenorm/vector.hpp"

namespace tracenorm {

using Point = std::array<double, 3>;

/// Structured unit-box meshes remember their grid so point location is O(1).
struct GridInfo {
  int cells_per_axis = 0;
};

/// Simplicial mesh of topological dimension tdim (1..3) embedded in R^gdim. Points always carry three
/// coordinates; the ones beyond gdim are zero.
class SimplicialMesh {
 public:
  SimplicialMesh(int tdim, int gdim, std::vector<Point> vertices, std::vector<Index> cells,
                 std::optional<GridInfo> grid = std::nullopt);

  int tdim() const noexcept { return tdim_; }
  int gdim() const noexcept { return gdim_; }
  Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index num_cells() const noexcept { return static_cast<Index>(cells_.size() / (tdim_ + 1)); }

  const Point& vertex(Index v) const { return vertices_[v]; }
  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const Index> cell(Index c) const {
    return {cells_.data() + static_cast<std::size_t>(c) * (tdim_ + 1), static_cast<std::size_t>(tdim_ + 1)};
  }
  const std::optional<GridInfo>& grid() const noexcept { return grid_; }

  double cell_measure(Index c) const;
  Point cell_midpoint(Index c) const;
  /// Longest edge of the cell.
  double cell_diameter(Index c) const;

  /// Unique edges (sorted vertex pairs), lexicographically ordered.
  std::vector<std::array<Index, 2>> edges() const;
  double h_min() const;
  double h_max() const;

  /// Vertices lying on a facet that belongs to exactly one cell.
  std::vector<Index> boundary_vertices() const;

  void write_text(std::ostream& os) const;
  void write_vtk(std::ostream& os) const;

 private:
  int tdim_;
  int gdim_;
  std::vector<Point> vertices_;
  std::vector<Index> cells_;
  std::optional<GridInfo> grid_;
};

using MeshPtr = std::shared_ptr<const SimplicialMesh>;

SimplicialMesh interval_mesh(int cells);
/// Unit square, each grid square split along its (0,0)-(1,1) diagonal.
SimplicialMesh square_mesh(int cells_per_axis);
/// Unit cube, each grid cube split into 6 tetrahedra sharing its main diagonal (Kuhn split).
SimplicialMesh cube_mesh(int cells_per_axis);

/// Structured vertex index for (i, j, k) on a box grid with n cells per axis.
Index grid_vertex(int n, int dim, int i, int j, int k);

struct PointLocation {
  Index cell = -1;
  std::array<double, 4> barycentric{};
};

/// Finds the cell containing x (lowest id on ties). Barycentric coordinates are clamped into [0, 1]
/// and sum to 1. Throws if x is farther than 1e-10 from the mesh.
PointLocation locate_point(const SimplicialMesh& mesh, const Point& x);

/// Raw barycentric coordinates of x with respect to a full-dimensional cell.
std::array<double, 4> barycentric(const SimplicialMesh& mesh, Index cell, const Point& x);

}  // namespace tracenorm
