#include "tracenorm/fracnorm.hpp"

#include <cmath>
#include <string>

#include "tracenorm/error.hpp"

namespace tracenorm {

namespace {

void check_exponent(double s) {
  if (!(s >= -1.0 && s <= 1.0)) throw Error("fractional norm: exponent " + std::to_string(s) + " outside [-1, 1]");
}

DenseSymMatrix restrict_dense(const CsrMatrix& a, const std::vector<Index>& active) {
  const Index n = static_cast<Index>(active.size());
  std::vector<Index> pos(static_cast<std::size_t>(a.rows()), -1);
  for (Index k = 0; k < n; ++k) pos[active[k]] = k;
  DenseSymMatrix out(n);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (Index k = 0; k < n; ++k) {
    const Index i = active[k];
    for (Index p = rp[i]; p < rp[i + 1]; ++p) {
      const Index l = pos[ci[p]];
      if (l >= 0 && l <= k) out(k, l) = l == k ? v[p] : 0.5 * (v[p] + a.at(ci[p], i));
    }
  }
  return out;
}

std::vector<int> degrees(const SimplicialMesh& m) {
  std::vector<int> deg(static_cast<std::size_t>(m.num_vertices()), 0);
  for (Index c = 0; c < m.num_cells(); ++c)
    for (Index v : m.cell(c)) ++deg[v];
  return deg;
}

}  // namespace

CsrMatrix p0_curve_stiffness(const SimplicialMesh& curve, BoundaryVariant variant) {
  if (curve.tdim() != 1) throw Error("p0_curve_stiffness: needs a curve mesh");
  std::vector<std::vector<Index>> incident(static_cast<std::size_t>(curve.num_vertices()));
  for (Index c = 0; c < curve.num_cells(); ++c)
    for (Index v : curve.cell(c)) incident[v].push_back(c);
  auto dist = [&](Index a, Index b) {
    const Point pa = curve.cell_midpoint(a), pb = curve.cell_midpoint(b);
    return std::sqrt((pa[0] - pb[0]) * (pa[0] - pb[0]) + (pa[1] - pb[1]) * (pa[1] - pb[1]) +
                     (pa[2] - pb[2]) * (pa[2] - pb[2]));
  };
  std::vector<Triplet> t;
  for (Index v = 0; v < curve.num_vertices(); ++v) {
    const auto& cells = incident[v];
    if (cells.size() == 1 && variant == BoundaryVariant::Dirichlet) {
      const double w = 2.0 / curve.cell_measure(cells[0]);
      t.push_back({cells[0], cells[0], w});
    }
    for (std::size_t a = 0; a < cells.size(); ++a)
      for (std::size_t b = a + 1; b < cells.size(); ++b) {
        const double w = 1.0 / dist(cells[a], cells[b]);
        t.push_back({cells[a], cells[a], w});
        t.push_back({cells[b], cells[b], w});
        t.push_back({cells[a], cells[b], -w});
        t.push_back({cells[b], cells[a], -w});
      }
  }
  return CsrMatrix::from_triplets(curve.num_cells(), curve.num_cells(), std::move(t));
}

HilbertScale::HilbertScale(const FunctionSpace& q, BoundaryVariant variant, const FracnormOptions& options)
    : variant_(variant), full_dim_(q.dim()) {
  const SimplicialMesh& cm = q.mesh();
  const bool p1 = q.element() == Element::P1;
  std::vector<Index> fixed;
  if (variant == BoundaryVariant::Dirichlet) {
    const auto deg = degrees(cm);
    bool has_boundary = false;
    for (Index v = 0; v < cm.num_vertices(); ++v)
      if (deg[v] == 1) {
        has_boundary = true;
        if (p1) fixed.push_back(v);
      }
    if (!has_boundary) throw Error("fractional norm: Dirichlet variant needs a curve with endpoints");
  }
  active_ = free_dofs(q.dim(), fixed);

  const CsrMatrix mass = assemble(q, FormKind::Mass).matrix;
  CsrMatrix a;
  if (options.operator_override) {
    a = *options.operator_override;
    if (a.rows() != q.dim() || a.cols() != q.dim()) throw DimensionError("fractional norm: operator size");
  } else if (p1) {
    const bool with_mass = variant == BoundaryVariant::Neumann || options.dirichlet_with_mass;
    a = assemble(q, with_mass ? FormKind::StiffnessPlusMass : FormKind::Stiffness).matrix;
  } else {
    a = p0_curve_stiffness(cm, variant);
    if (variant == BoundaryVariant::Neumann || options.dirichlet_with_mass) a = add(a, mass);
  }
  a_ = restrict_dense(a, active_);
  m_ = restrict_dense(mass, active_);
  eig_ = sym_gevp(a_, m_, true);
  for (double l : eig_.values)
    if (!(l > 0.0)) throw NotPositiveDefinite("fractional norm: operator A is not positive definite", -1);
  const DenseMatrix mdense = m_.to_dense();
  mu_ = mdense * eig_.vectors;
}

DenseSymMatrix HilbertScale::matrix(double s) const {
  check_exponent(s);
  const Index n = dim();
  Vector ls(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) ls[k] = std::pow(eig_.values[k], s);
  DenseSymMatrix h(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) {
      double v = 0.0;
      for (Index k = 0; k < n; ++k) v += mu_(i, k) * ls[k] * mu_(j, k);
      h(i, j) = v;
    }
  return h;
}

DenseSymMatrix HilbertScale::inverse_matrix(double s) const {
  check_exponent(s);
  const Index n = dim();
  const DenseMatrix& u = eig_.vectors;
  Vector ls(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) ls[k] = std::pow(eig_.values[k], -s);
  DenseSymMatrix h(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) {
      double v = 0.0;
      for (Index k = 0; k < n; ++k) v += u(i, k) * ls[k] * u(j, k);
      h(i, j) = v;
    }
  return h;
}

Vector HilbertScale::coefficients(std::span<const double> u) const {
  if (u.size() != static_cast<std::size_t>(dim())) throw DimensionError("fractional norm: vector size");
  Vector c(u.size());
  mu_.multiply_transpose(u, c);
  return c;
}

FractionalNorm::FractionalNorm(std::shared_ptr<const HilbertScale> scale, double s)
    : scale_(std::move(scale)), s_(s), h_(scale_->matrix(s)) {}

double FractionalNorm::norm(std::span<const double> u) const {
  if (u.size() != static_cast<std::size_t>(dim())) throw DimensionError("fractional norm: vector size");
  return std::sqrt(std::max(0.0, h_.quadratic_form(u)));
}

double FractionalNorm::norm_spectral(std::span<const double> u) const {
  const Vector c = scale_->coefficients(u);
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += std::pow(scale_->eigenvalues()[k], s_) * c[k] * c[k];
  return std::sqrt(s);
}

LinearOperator FractionalNorm::inverse_operator() const {
  auto inv = std::make_shared<const DenseSymMatrix>(scale_->inverse_matrix(s_));
  return {dim(), [inv](std::span<const double> x, std::span<double> y) { inv->multiply(x, y); }};
}

FractionalNorm build_fracnorm(const FunctionSpace& q, double s, BoundaryVariant variant,
                              const FracnormOptions& options) {
  check_exponent(s);
  return FractionalNorm(std::make_shared<const HilbertScale>(q, variant, options), s);
}

SumNormInverse::SumNormInverse(const FractionalNorm& a, const FractionalNorm& b) : sum_(a.matrix() + b.matrix()) {
  if (a.dim() != b.dim()) throw DimensionError("SumNormInverse: norms live on different spaces");
  chol_ = std::make_shared<const DenseCholesky>(sum_);
}

void SumNormInverse::apply(std::span<const double> x, std::span<double> y) const {
  std::copy(x.begin(), x.end(), y.begin());
  chol_->solve_in_place(y);
}

LinearOperator SumNormInverse::as_operator() const {
  auto chol = chol_;
  return {dim(), [chol](std::span<const double> x, std::span<double> y) {
            std::copy(x.begin(), x.end(), y.begin());
            chol->solve_in_place(y);
          }};
}

}  // namespace tracenorm
