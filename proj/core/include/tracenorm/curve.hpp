#pragma once

#include <string>
#include <string_view>

#include "tracenorm/mesh.hpp"

namespace tracenorm {

enum class CurveKind { Gamma1, Gamma2, Circle, SquareLoop, Spiral, Tree };

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);

/// Polyline curve Gamma with its own 1d mesh (tdim 1, embedded in the ambient dimension).
struct EmbeddedCurve {
  CurveKind kind{};
  MeshPtr mesh;
  /// For matched curves: curve vertex -> host mesh vertex. Empty for independent curves.
  std::vector<Index> host_vertex;

  bool matched() const noexcept { return !host_vertex.empty(); }
  bool closed() const;
  double length() const;
  /// Largest segment length (H).
  double max_segment() const;
  double min_segment() const;
  /// Vertices of degree one.
  std::vector<Index> endpoints() const;
};

/// Curve lying on edges of a structured cube mesh. Gamma1 needs an even grid, Tree a multiple of 4.
EmbeddedCurve matched_curve(const SimplicialMesh& mesh, CurveKind kind);

struct CurveGeometry {
  double circle_radius = 0.25;
  double square_side = 0.5;
  double square_height = 0.5;
  double spiral_radius = 0.3;
  double spiral_turns = 2.0;
  double spiral_z0 = 0.1;
  double spiral_z1 = 0.9;
};

/// Curve discretized independently of any host mesh. Circle lives in the unit square (gdim 2);
/// SquareLoop and Spiral in the unit cube.
EmbeddedCurve independent_curve(CurveKind kind, int segments, const CurveGeometry& geometry = {});

/// Max diameter of host cells met by the curve divided by the smallest curve segment.
double check_infsup_ratio(const SimplicialMesh& host, const EmbeddedCurve& curve);

}  // namespace tracenorm
