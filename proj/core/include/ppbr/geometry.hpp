#pragma once

#include <armadillo>

namespace ppbr {

class Rng;

// Spherical chart of the upper hemisphere used for projection directions:
//   gamma_1 = sin(theta_1)
//   gamma_l = sin(theta_l) * prod_{j<l} cos(theta_j),   l = 2..p-1
//   gamma_p =               prod_{j<p} cos(theta_j)
// with every theta_j in [-pi/2, pi/2], which forces gamma_p >= 0 and rules
// out the gamma / -gamma ambiguity of the index <M, gamma gamma'>.
arma::vec to_cartesian(const arma::vec& theta);

// Inverse chart. Accepts any unit vector (|norm - 1| <= 1e-8), maps gamma and
// -gamma to the same angles. Angles past a zero prefix product are set to 0.
arma::vec to_spherical(const arma::vec& gamma);

// log of the surface-measure Jacobian of the chart,
//   sum_{j=1}^{p-2} (p-1-j) * log cos(theta_j),
// an empty sum (0) when p = 2. -inf when some relevant cosine vanishes.
double log_jacobian(const arma::vec& theta);

// von Mises-Fisher draw on S^{p-1} with the given mean direction and
// concentration; concentration 0 falls back to the uniform sphere law.
// Wood's rejection sampler for the cosine plus a uniform tangent direction.
arma::vec sample_vmf(Rng& rng, const arma::vec& mean_direction, double concentration);

}  // namespace ppbr
