#pragma once

#include "shrinkflow/grid.hpp"

namespace shrinkflow {

/// A hypersurface written as a radial graph over the round shrinker:
/// points r(p) * p/|p| with r = radius + u, u sampled at the grid nodes.
struct RadialGraph {
  GridPtr grid;
  Vec heights;  ///< u at the grid nodes
};

RadialGraph make_graph(GridPtr grid, Vec heights);
RadialGraph zero_graph(GridPtr grid);

/// Per-node geometric data of the graph surface.
struct GraphGeometry {
  Points positions;     ///< graph points in ambient space
  Points normal;        ///< outward unit normal
  Vec mean_curvature;   ///< sum of principal curvatures wrt outward normal
  Vec eta;              ///< <x, nu> at the graph point
  Vec measure;          ///< quadrature weight of the graph's area element
  Vec graph_factor;     ///< w_u = W/r: d(height)/dtau per unit normal speed
};

/// Geometry of the radial graph. Throws DegenerateGraphError if r <= 0
/// anywhere, std::invalid_argument on non-finite samples.
GraphGeometry graph_geometry(const RadialGraph& g);

/// Gaussian area F(M) = int_M rho dH^n by quadrature on the graph.
double gaussian_area(const RadialGraph& g);

/// Excess F(M) - F(Sigma).
double excess(const RadialGraph& g);

/// Spectrally computed sup norms of u and its first two covariant
/// derivatives; total() is the C^2 proxy used by the distance cutoff.
struct GraphNorms {
  double sup_u = 0.0;
  double sup_grad = 0.0;
  double sup_hess = 0.0;
  double total() const { return sup_u + sup_grad + sup_hess; }
};
GraphNorms graph_norms(const RadialGraph& g);

}  // namespace shrinkflow
