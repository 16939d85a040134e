#pragma once

#include <optional>
#include <random>

#include "chanent/linalg.hpp"

namespace chanent {

// Hermitian, positive semidefinite, unit-trace operator.
// The invariants are checked on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix mat, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  ComplexMatrix mat_;
};

// Probability vector of squared Schmidt coefficients of a bipartite pure
// state: entries >= 0 summing to 1 within 1e-12, in a fixed order.
class SchmidtSpectrum {
 public:
  explicit SchmidtSpectrum(RealVector lambda);
  static SchmidtSpectrum uniform(int d);

  int dim() const { return static_cast<int>(lambda_.size()); }
  const RealVector& lambda() const { return lambda_; }

 private:
  RealVector lambda_;
};

// |I_d>><<I_d|: the unnormalized maximally entangled projector (trace d).
ComplexMatrix max_entangled_projector(int d);

// Rank-one projector onto (U (x) V) sum_i sqrt(lambda_i) |i>|i>.
// U and V default to the identity and must be unitary when given.
DensityMatrix schmidt_state(const SchmidtSpectrum& lambda,
                            const std::optional<ComplexMatrix>& u = std::nullopt,
                            const std::optional<ComplexMatrix>& v = std::nullopt);

// Matrix with iid standard complex Gaussian entries.
ComplexMatrix random_ginibre(int rows, int cols, std::mt19937_64& rng);

// Haar-distributed unitary via QR of a Ginibre matrix with phase fixing.
ComplexMatrix random_unitary(int d, std::mt19937_64& rng);

// G G^dag / tr(G G^dag) for a d x k Ginibre G (rank min(d, k)).
DensityMatrix random_density_matrix(int d, int k, std::mt19937_64& rng);

}  // namespace chanent
