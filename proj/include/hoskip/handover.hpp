#pragma once

#include "hoskip/numerics.hpp"

namespace hoskip {

/// Serving BS at polar (r, theta) from the period's start; the UE moves to (l, 0).
struct ChordGeometry {
  double l = 0.0;
  double r = 1.0;
  double theta = 0.0;
};

/// Distance from the period's end point to the serving BS.
double chord_distance(const ChordGeometry& g);

/// Area of the disk around the end point through the serving BS that lies
/// outside the start point's empty disk of radius r. No handover happens in
/// the period iff this region holds no BS.
double excess_area(const ChordGeometry& g);

/// Expected number of Poisson-Voronoi boundary crossings along a segment of length l.
double expected_handovers_nonskip(double l, double lambda);

/// Probability that the end point of a length-l segment lies in a different
/// cell than its start point (at most one handover per skipping period).
QuadResult handover_probability_skip_quad(double l, double lambda, const QuadratureSpec& spec = {});

/// As above; throws ConvergenceError when the quadrature misses its tolerance.
double handover_probability_skip(double l, double lambda, const QuadratureSpec& spec = {});

}  // namespace hoskip
