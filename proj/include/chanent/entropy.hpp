#pragma once

#include <cstdint>

#include "chanent/channel.hpp"
#include "chanent/rng.hpp"
#include "chanent/states.hpp"

namespace chanent {

// All entropies are in nats; conversion to bits is presentation-only.

// -sum w_i log w_i over the entries above eps_eig (0 log 0 = 0).
double entropy_of_spectrum(const RealVector& w,
                           double eps_eig = Tolerances{}.eps_eig);

// h(p) = -p log p - (1-p) log(1-p).
double binary_entropy(double p);

// von Neumann entropy H(rho).
double von_neumann(const DensityMatrix& rho);

// D(rho||sigma), Infinite when supp(rho) leaks out of supp(sigma).
struct RelEntropyValue {
  double value = 0.0;
  bool infinite = false;

  static RelEntropyValue finite(double v) { return {v, false}; }
  static RelEntropyValue inf() { return {0.0, true}; }
};

RelEntropyValue relative_entropy(const DensityMatrix& rho,
                                 const DensityMatrix& sigma,
                                 const Tolerances& tol = {});

// Map entropy: H of the normalized Choi state J = D / dim_in.
double map_entropy(const Channel& phi, const Tolerances& tol = {});

// D((Phi_U (x) 1) psi || (R (x) 1) psi) for the pure input psi with Schmidt
// weights lambda and the pre-rotation Phi_U : rho -> Phi(U rho U^dag).
// Because the reference factorizes as I/d_out (x) diag(lambda), this reduces
// to log d_out + H(lambda) - H(sigma) with sigma the extended channel output,
// which is finite for every CPTP channel.
double relative_entropy_objective(const Channel& phi,
                                  const SchmidtSpectrum& lambda,
                                  const ComplexMatrix& u,
                                  const Tolerances& tol = {});

struct OptimizerOptions {
  int restarts = 8;
  std::uint64_t seed = kDefaultSeed;
  int max_evals_per_restart = 2000;
  double sweep_tol = 1e-10;  // stop a restart when a full sweep gains less
  Tolerances tol;            // validation tolerances for the input channel
};

struct OptimizerResult {
  double value = 0.0;            // best objective found, nats
  RealVector argmax_lambda;      // Schmidt weights at the best point
  ComplexMatrix argmax_unitary;  // input unitary at the best point
  long evaluations = 0;          // total objective evaluations
  int restarts = 0;
  int best_restart = 0;          // lowest restart index attaining the max
  bool converged = true;         // all restarts reached step convergence
};

// Estimate of sup over (lambda, U) of the objective, by derivative-free
// pattern search with multi-start.  Restart 0 always starts at the maximally
// entangled input (uniform lambda, U = I), so the returned value is never
// below the objective there.
OptimizerResult channel_relative_entropy(const Channel& phi,
                                         const OptimizerOptions& opts = {});

// log d_out - channel_relative_entropy; negative values are legal
// (unitary channels reach -log d).
double channel_entropy(const Channel& phi, const OptimizerOptions& opts = {});

struct EntropyReport {
  double h_map = 0.0;
  double h_channel = 0.0;
  double gap = 0.0;  // h_map - log d_out - h_channel; >= 0 up to numerics
  OptimizerResult optimizer;
};

// Both entropy definitions side by side with their gap.
EntropyReport entropy_gap(const Channel& phi, const OptimizerOptions& opts = {});

}  // namespace chanent
