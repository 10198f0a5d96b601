#include "tracenorm/multigrid.hpp"

#include <algorithm>

#include "tracenorm/error.hpp"

namespace tracenorm {

CsrMatrix p1_prolongation(const SimplicialMesh& coarse, const SimplicialMesh& fine) {
  if (coarse.tdim() != fine.tdim() || coarse.gdim() != fine.gdim())
    throw DimensionError("p1_prolongation: meshes differ in dimension");
  const int d = coarse.tdim();
  for (Index c = 0; c < fine.num_cells(); ++c) {
    const Index host = locate_point(coarse, fine.cell_midpoint(c)).cell;
    for (Index v : fine.cell(c)) {
      const auto lam = barycentric(coarse, host, fine.vertex(v));
      for (int a = 0; a <= d; ++a)
        if (lam[a] < -1e-10) throw Error("multigrid: hierarchy is not nested (fine cell " + std::to_string(c) + ")");
    }
  }
  std::vector<Triplet> t;
  for (Index v = 0; v < fine.num_vertices(); ++v) {
    const auto loc = locate_point(coarse, fine.vertex(v));
    const auto vs = coarse.cell(loc.cell);
    for (int a = 0; a <= d; ++a)
      if (loc.barycentric[a] > 1e-13) t.push_back({v, vs[a], loc.barycentric[a]});
  }
  return CsrMatrix::from_triplets(fine.num_vertices(), coarse.num_vertices(), std::move(t));
}

std::vector<MeshPtr> uniform_hierarchy(int dim, int finest_cells, int levels) {
  if (levels < 1) throw Error("uniform_hierarchy: need at least one level");
  std::vector<MeshPtr> out;
  for (int l = levels - 1; l >= 0; --l) {
    const int n = finest_cells >> l;
    if (n < 1 || (n << l) != finest_cells) throw Error("uniform_hierarchy: cells per axis not divisible enough");
    switch (dim) {
      case 1: out.push_back(std::make_shared<const SimplicialMesh>(interval_mesh(n))); break;
      case 2: out.push_back(std::make_shared<const SimplicialMesh>(square_mesh(n))); break;
      case 3: out.push_back(std::make_shared<const SimplicialMesh>(cube_mesh(n))); break;
      default: throw DimensionError("uniform_hierarchy: dimension must be 1, 2 or 3");
    }
  }
  return out;
}

GmgHierarchy::GmgHierarchy(std::vector<MeshPtr> meshes, const MultigridOptions& options) : options_(options) {
  if (meshes.empty()) throw Error("GmgHierarchy: no meshes");
  for (std::size_t l = 0; l < meshes.size(); ++l) {
    matrices_.push_back(assemble(FunctionSpace(meshes[l], Element::P1), options.form).matrix);
    Vector d = matrices_.back().diagonal();
    for (double& x : d) x = 1.0 / x;
    inv_diag_.push_back(std::move(d));
    if (l > 0) {
      prolongations_.push_back(p1_prolongation(*meshes[l - 1], *meshes[l]));
      restrictions_.push_back(prolongations_.back().transpose());
    }
  }
  coarse_ = std::make_unique<SparseCholesky>(matrices_.front());
}

void GmgHierarchy::cycle(int level, std::span<const double> b, std::span<double> x) const {
  if (level == 0) {
    coarse_->solve(b, x);
    return;
  }
  const CsrMatrix& a = matrices_[level];
  const Vector& dinv = inv_diag_[level];
  const std::size_t n = b.size();
  Vector r(n);
  std::fill(x.begin(), x.end(), 0.0);
  auto smooth = [&](int sweeps) {
    for (int s = 0; s < sweeps; ++s) {
      a.multiply(x, r);
      for (std::size_t i = 0; i < n; ++i) x[i] += options_.omega * dinv[i] * (b[i] - r[i]);
    }
  };
  smooth(options_.pre_smoothing);
  a.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const CsrMatrix& restrict_op = restrictions_[level - 1];
  Vector rc(static_cast<std::size_t>(restrict_op.rows())), ec(rc.size());
  restrict_op.multiply(r, rc);
  cycle(level - 1, rc, ec);
  Vector e(n);
  prolongations_[level - 1].multiply(ec, e);
  for (std::size_t i = 0; i < n; ++i) x[i] += e[i];
  smooth(options_.post_smoothing);
}

void GmgHierarchy::apply(std::span<const double> b, std::span<double> x) const {
  if (b.size() != static_cast<std::size_t>(size()) || x.size() != b.size())
    throw DimensionError("GmgHierarchy: size mismatch");
  cycle(levels() - 1, b, x);
}

LinearOperator GmgHierarchy::as_operator() const {
  return {size(), [this](std::span<const double> b, std::span<double> x) { apply(b, x); }};
}

}  // namespace tracenorm
