#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chanent/linalg.hpp"
#include "chanent/states.hpp"

namespace chanent {

// Completely positive trace-preserving map, held as Kraus operators, as a
// Choi (dynamical) matrix, or both.
//
// Conventions, used consistently everywhere:
//   * Kraus operators are dim_out x dim_in.
//   * The Choi matrix lives on X_out (x) X_in and is built with the
//     unnormalized projector:  D = (Phi (x) 1)(|I>><<I|) = sum_k |K_k>><<K_k|,
//     with the row-major vectorization from linalg.hpp.  tr D = dim_in and
//     tr_out D = I_in for a channel.
//   * The Jamiolkowski state is D / dim_in.
struct Channel {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<ComplexMatrix> kraus;  // may be empty
  ComplexMatrix choi;                // may be 0 x 0

  bool has_kraus() const { return !kraus.empty(); }
  bool has_choi() const { return choi.size() != 0; }
};

// Constructors from one representation; shapes are validated, CPTP is not
// (use is_cptp to check that separately).
Channel channel_from_kraus(std::vector<ComplexMatrix> ops);
Channel channel_from_choi(ComplexMatrix choi, int dim_out, int dim_in);

// sum_k |K_k>><<K_k| on X_out (x) X_in.
ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix>& ops);

// Canonical Kraus operators from the eigendecomposition of the Choi matrix;
// eigenvalues below eps_eig are dropped.  Throws NotPsd if the Choi matrix
// has an eigenvalue below -psd tolerance.
std::vector<ComplexMatrix> kraus_from_choi(const ComplexMatrix& choi,
                                           int dim_out, int dim_in,
                                           const Tolerances& tol = {});

// The stored or lazily computed representations.
ComplexMatrix choi_matrix(const Channel& phi);
std::vector<ComplexMatrix> kraus_operators(const Channel& phi,
                                           const Tolerances& tol = {});

// Choi matrix normalized to unit trace.
DensityMatrix jamiolkowski_state(const Channel& phi);

// Phi(rho).
DensityMatrix apply(const Channel& phi, const DensityMatrix& rho);

// (Phi (x) 1_R)(rho_ar) where rho_ar lives on X_in (x) X_R with dim R = dim_in.
DensityMatrix apply_extended(const Channel& phi, const DensityMatrix& rho_ar);

// Output of (Phi (x) 1) on the pure state with Schmidt weights lambda,
// computed directly from the Choi matrix:
//   sigma = (1 (x) sqrt(Lambda)) D (1 (x) sqrt(Lambda)),
// and, with an input-side unitary u on the reference copy,
//   sigma = (1 (x) sqrt(Lambda) u^T) D (1 (x) u^* sqrt(Lambda)).
// These are the hot paths shared by the optimizer and the experiments.
ComplexMatrix schmidt_output_from_choi(const ComplexMatrix& choi, int dim_out,
                                       int dim_in, const RealVector& lambda);
ComplexMatrix schmidt_output_from_choi(const ComplexMatrix& choi, int dim_out,
                                       int dim_in, const RealVector& lambda,
                                       const ComplexMatrix& u);

struct CptpReport {
  bool cptp = false;
  double completeness_violation = 0.0;  // |sum K^dag K - I|_max (kraus only)
  double psd_violation = 0.0;           // max(0, -min eig of Choi)
  double tp_violation = 0.0;            // |tr_out D - I|_max
  double representation_mismatch = 0.0; // Choi-vs-Kraus, when both are stored
};

// Diagnostic CPTP check; never throws on a non-CPTP channel.
CptpReport is_cptp(const Channel& phi, const Tolerances& tol = {});

// Phi(I/d) == I/d within the cptp tolerance; requires dim_in == dim_out.
bool is_unital(const Channel& phi, const Tolerances& tol = {});

// --- named channels ---------------------------------------------------------

Channel identity_channel(int d);
Channel unitary_channel(ComplexMatrix w);

// Phi(rho) = I/d * tr(rho).
Channel depolarizing_channel(int d);

// (1 - q) rho + q I/d * tr(rho), q in [0, 1].
Channel partial_depolarizing_channel(int d, double q);

// Qubit Pauli mixture sum_i q_i P_i rho P_i with (q0, q1, q2, q3) a
// probability vector over (I, X, Y, Z).
Channel pauli_mixture_channel(double q0, double q1, double q2, double q3);

// Mixture of m Haar-random unitaries with the given weights (empty = uniform).
Channel random_unitary_mixture_channel(int d, int m,
                                       const std::vector<double>& weights,
                                       std::uint64_t seed);

// Qubit amplitude damping with decay probability gamma in [0, 1].
Channel amplitude_damping_channel(double gamma);

// Haar-style random channel: W = G G^dag for a d^2 x k Ginibre G, normalized
// by the inverse square root of its input marginal so that tr_out D = I.
// Resamples (up to a small retry cap) if the marginal is numerically singular.
Channel random_channel(int d, int k, std::uint64_t seed);

// --- input spectra for the experiments ---------------------------------------

enum class SchmidtKind {
  DirichletFlat,     // Dirichlet(1, ..., 1) on d outcomes
  DirichletTwo,      // Dirichlet(1, 1) on 2 outcomes, zero-padded to d
  DirichletConc,     // Dirichlet(2, ..., 2) on d outcomes
  Uniform,           // deterministic lambda_i = 1/d
};

const char* schmidt_kind_name(SchmidtKind kind);
SchmidtKind schmidt_kind_from_name(const std::string& name);

SchmidtSpectrum sample_schmidt(int d, SchmidtKind kind, std::uint64_t seed);

}  // namespace chanent
