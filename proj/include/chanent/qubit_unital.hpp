#pragma once

#include "chanent/channel.hpp"
#include "chanent/entropy.hpp"

namespace chanent {

// One-parameter machinery for unital qubit channels.  The channel relative
// entropy restricted to Schmidt inputs diag(p, 1-p) with no input rotation:
//   f(p) = log 2 + h(p) - H((Phi (x) 1) phi_p),
// is symmetric about p = 1/2, concave, and attains its maximum at p = 1/2,
// where it equals 2 log 2 - H_map(Phi).

// f is only evaluated on (kMinP, 1 - kMinP); the endpoints make the
// reference state singular.
inline constexpr double kMinP = 1e-9;

// Evaluation grid; the default constructor yields points symmetric about 1/2.
struct PGrid {
  RealVector points;
  RealVector values;  // f at the points, nats
};

double f_of_p(const Channel& phi, double p, const Tolerances& tol = {});

// f over n uniformly spaced interior points k/(n+1), k = 1..n.
PGrid f_grid(const Channel& phi, int n_points = 99, const Tolerances& tol = {});

// max over the grid points of |f(p) - f(1-p)| (f(1-p) evaluated fresh).
double verify_symmetry(const Channel& phi, const PGrid& grid,
                       const Tolerances& tol = {});

// max over admissible grid points of (f(p-h) - 2 f(p) + f(p+h)) / h^2;
// <= 0 up to discretization error for a concave f.
double verify_concavity(const Channel& phi, const PGrid& grid,
                        double h_step = 1e-2, const Tolerances& tol = {});

struct MaximizeResult {
  double p_star = 0.5;
  double value = 0.0;  // f(p_star), nats
};

// Golden-section search on (0, 1), valid by unimodality; exact ties
// (flat objectives) resolve to p = 1/2.
MaximizeResult maximize_f(const Channel& phi, const Tolerances& tol = {});

struct SaturationReport {
  double lhs_general = 0.0;  // H(Phi) from the general optimizer
  double lhs_fast = 0.0;     // log 2 - maximize_f(phi).value
  double rhs = 0.0;          // map_entropy(phi) - log 2
  double delta_general = 0.0;
  double delta_fast = 0.0;
};

// Checks H(Phi) = H_map(Phi) - log 2 along both evaluation routes.
SaturationReport verify_saturation(const Channel& phi,
                                   const OptimizerOptions& opts = {});

}  // namespace chanent
