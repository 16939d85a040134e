#include "chanent/states.hpp"

#include <cmath>
#include <string>

#include "chanent/errors.hpp"

namespace chanent {

namespace {

void require_unitary(const ComplexMatrix& u, int d, const char* who) {
  if (u.rows() != d || u.cols() != d) {
    throw DimensionMismatch(std::string(who) + ": unitary has wrong shape");
  }
  const double dev =
      max_abs(u.adjoint() * u - ComplexMatrix::Identity(d, d));
  if (dev > 1e-8) {
    throw NotUnitary(std::string(who) + ": |U^dag U - I|_max = " +
                     std::to_string(dev));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat, const Tolerances& tol)
    : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw DimensionMismatch("DensityMatrix: matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, max_abs(mat_));
  if (max_abs(mat_ - mat_.adjoint()) > tol.herm * scale) {
    throw NotHermitian("DensityMatrix: matrix is not Hermitian");
  }
  if (std::abs(mat_.trace().real() - 1.0) > 1e-10 ||
      std::abs(mat_.trace().imag()) > 1e-10) {
    throw InvalidParameter("DensityMatrix: trace = " +
                           std::to_string(mat_.trace().real()) + ", expected 1");
  }
  const RealVector w = hermitian_eigenvalues(mat_, tol.herm);
  if (w.minCoeff() < -tol.psd * scale) {
    throw NotPsd("DensityMatrix: eigenvalue " + std::to_string(w.minCoeff()) +
                 " below -psd tolerance");
  }
}

SchmidtSpectrum::SchmidtSpectrum(RealVector lambda) : lambda_(std::move(lambda)) {
  if (lambda_.size() == 0) {
    throw InvalidParameter("SchmidtSpectrum: empty spectrum");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (lambda_(i) < 0.0) {
      throw InvalidParameter("SchmidtSpectrum: negative weight " +
                             std::to_string(lambda_(i)));
    }
    sum += lambda_(i);
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidParameter("SchmidtSpectrum: weights sum to " +
                           std::to_string(sum) + ", expected 1");
  }
}

SchmidtSpectrum SchmidtSpectrum::uniform(int d) {
  if (d <= 0) throw InvalidParameter("SchmidtSpectrum::uniform: d must be positive");
  return SchmidtSpectrum(RealVector::Constant(d, 1.0 / d));
}

ComplexMatrix max_entangled_projector(int d) {
  if (d <= 0) throw InvalidParameter("max_entangled_projector: d must be positive");
  const ComplexVector v = vectorize(ComplexMatrix::Identity(d, d));
  return v * v.adjoint();
}

DensityMatrix schmidt_state(const SchmidtSpectrum& lambda,
                            const std::optional<ComplexMatrix>& u,
                            const std::optional<ComplexMatrix>& v) {
  const int d = lambda.dim();
  // (U (x) V)|sqrt(Lambda)>> = |U sqrt(Lambda) V^T>>.
  ComplexMatrix core = lambda.lambda().cwiseSqrt().cast<Complex>().asDiagonal();
  if (u) {
    require_unitary(*u, d, "schmidt_state");
    core = (*u) * core;
  }
  if (v) {
    require_unitary(*v, d, "schmidt_state");
    core = core * v->transpose();
  }
  const ComplexVector psi = vectorize(core);
  return DensityMatrix(psi * psi.adjoint());
}

ComplexMatrix random_ginibre(int rows, int cols, std::mt19937_64& rng) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidParameter("random_ginibre: dimensions must be positive");
  }
  ComplexMatrix g(rows, cols);
  std::normal_distribution<double> normal(0.0, 1.0);
  static constexpr double kScale = 0.70710678118654752440;  // 1/sqrt(2)
  // Fixed row-major fill order so a given substream always yields the same matrix.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(kScale * re, kScale * im);
    }
  }
  return g;
}

ComplexMatrix random_unitary(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar rather than QR-convention biased.
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= (mag > 0.0) ? rii / mag : Complex(1.0, 0.0);
  }
  return q;
}

DensityMatrix random_density_matrix(int d, int k, std::mt19937_64& rng) {
  const ComplexMatrix g = random_ginibre(d, k, rng);
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(0.5 * (w + w.adjoint()));
}

}  // namespace chanent
