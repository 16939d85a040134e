#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace chanent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Default numerical tolerances.  Matrix-shaped checks (hermiticity, positivity,
// reconstruction) are scaled by max(1, max-norm) of the operand.
struct Tolerances {
  double herm = 1e-10;     // hermiticity
  double psd = 1e-10;      // positive semidefiniteness
  double recon = 1e-10;    // reconstruction / round trips
  double cptp = 1e-8;      // channel completeness and trace preservation
  double supp = 1e-10;     // support inclusion for relative entropy
  double eps_eig = 1e-12;  // eigenvalue cutoff defining the support
};

// Largest entry magnitude; the norm used by the tolerance checks.
double max_abs(const ComplexMatrix& m);

struct HermitianEigensystem {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // orthonormal columns, same order
};

// Eigendecomposition of a Hermitian matrix (checked within tol_herm).
HermitianEigensystem hermitian_eig(const ComplexMatrix& m,
                                   double tol_herm = Tolerances{}.herm);

// Eigenvalues only; cheaper when eigenvectors are not needed.
RealVector hermitian_eigenvalues(const ComplexMatrix& m,
                                 double tol_herm = Tolerances{}.herm);

// Eigenvalues of a general square complex matrix, no symmetry assumed.
ComplexVector general_eigenvalues(const ComplexMatrix& m);

enum class SpectralFn { Log, Sqrt, Inverse, InvSqrt };

// What to do with eigenvalues below eps_eig: restrict the function to the
// support subspace (default), or clamp them up to eps_eig first.
enum class SmallEigPolicy { Support, ClampToEps };

// f(M) for Hermitian PSD M via eigendecomposition.
ComplexMatrix spectral_function(const ComplexMatrix& m, SpectralFn fn,
                                SmallEigPolicy policy = SmallEigPolicy::Support,
                                const Tolerances& tol = {});

// Kronecker product, row-major index convention: (A (x) B)[(i,k),(j,l)] = A_ij B_kl.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

// Partial trace of an operator on C^{dim_a} (x) C^{dim_b}, keeping one factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b,
                            Subsystem keep);

// Row-major vectorization |X>>: vectorize(X)[r * cols + c] = X(r, c).
// Satisfies (A (x) B)|X>> = |A X B^T>>.
ComplexVector vectorize(const ComplexMatrix& x);
ComplexMatrix devectorize(const ComplexVector& v, int rows, int cols);

// Directional derivative of the matrix logarithm at a strictly positive rho:
//   D log(rho)[V] = int_0^1 (s(rho - I) + I)^{-1} V (s(rho - I) + I)^{-1} ds,
// evaluated with fixed-order Gauss-Legendre quadrature.
ComplexMatrix frechet_log_derivative(const ComplexMatrix& rho,
                                     const ComplexMatrix& direction,
                                     int quadrature_order = 64);

// Gauss-Legendre nodes and weights on [0, 1].
std::pair<RealVector, RealVector> gauss_legendre(int n);

}  // namespace chanent
