#pragma once

#include <functional>

#include "tracenorm/mesh.hpp"
#include "tracenorm/sparse.hpp"

namespace tracenorm {

enum class Element { P1, P0 };
enum class FormKind { Stiffness, Mass, StiffnessPlusMass };

/// Lagrange space on a simplicial mesh. P1 dofs are vertices, P0 dofs are cells.
class FunctionSpace {
 public:
  FunctionSpace(MeshPtr mesh, Element element);

  const SimplicialMesh& mesh() const noexcept { return *mesh_; }
  const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
  Element element() const noexcept { return element_; }
  Index dim() const noexcept;
  /// Vertex for P1, cell midpoint for P0.
  Point dof_point(Index dof) const;
  /// P1 only: dofs on the mesh boundary.
  std::vector<Index> boundary_dofs() const;

 private:
  MeshPtr mesh_;
  Element element_;
};

struct AssembledForm {
  CsrMatrix matrix;
  FormKind kind;
};

AssembledForm assemble(const FunctionSpace& space, FormKind kind);

/// Rows and columns of `dofs` are zeroed and their diagonal set to one.
AssembledForm apply_dirichlet(const AssembledForm& form, std::span<const Index> dofs);
/// Companion to apply_dirichlet for data u = g on `dofs`: returns b - A g with the constrained
/// entries replaced by g. `original` is the unconstrained matrix.
Vector apply_dirichlet_rhs(const CsrMatrix& original, std::span<const Index> dofs, std::span<const double> g,
                           std::span<const double> b);
/// Complement of `dofs` in [0, n).
std::vector<Index> free_dofs(Index n, std::span<const Index> dofs);

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
};

/// Norms of u - u_h by cellwise quadrature of degree 2.
ErrorNorms error_norms(const FunctionSpace& space, std::span<const double> coeffs, const ScalarField& exact,
                       const VectorField& exact_gradient);

/// Nodal interpolant (vertex values for P1, midpoint values for P0).
Vector interpolate(const FunctionSpace& space, const ScalarField& f);
/// Load vector (f, phi_i) by cellwise quadrature.
Vector assemble_load(const FunctionSpace& space, const ScalarField& f);

/// Tangential gradients of the barycentric coordinates of cell c (rows beyond tdim+1 are zero).
std::array<Point, 4> barycentric_gradients(const SimplicialMesh& mesh, Index c);

struct QuadraturePoint {
  std::array<double, 4> barycentric;
  double weight;  // fraction of the cell measure
};
/// Degree-2 rule on the reference simplex of dimension d.
std::span<const QuadraturePoint> simplex_quadrature(int d);

}  // namespace tracenorm
