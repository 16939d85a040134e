#include "chanent/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

// Make LAPACKE take std::complex directly (layout-compatible per the C++
// standard) instead of C99 _Complex.
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "chanent/errors.hpp"

namespace chanent {

namespace {

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(who) + ": matrix is " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
  }
}

void require_hermitian(const ComplexMatrix& m, double tol, const char* who) {
  const double dev = max_abs(m - m.adjoint());
  const double scale = std::max(1.0, max_abs(m));
  if (dev > tol * scale) {
    throw NotHermitian(std::string(who) + ": |M - M^dag|_max = " +
                       std::to_string(dev) + " exceeds tolerance");
  }
}

// LAPACK zheevd on the Hermitian part of m.  Eigen and LAPACK are both
// column-major, so the matrix buffer is passed straight through.  The
// optimizer calls this hundreds of thousands of times on tiny matrices, so
// the workspace buffers are cached per thread instead of letting LAPACKE
// query, allocate and free them on every call.
void zheevd_inplace(ComplexMatrix& a, RealVector& w, char jobz) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  thread_local std::vector<Complex> work;
  thread_local std::vector<double> rwork;
  thread_local std::vector<lapack_int> iwork;

  lapack_int info = 0;
  if (jobz == 'N') {
    // Eigenvalues only: drive the tridiagonal pipeline zheevd uses internally
    // ('L' Householder reduction, then root-free QL) directly, so the cached
    // workspace is reused across the optimizer's many tiny solves.
    thread_local std::vector<Complex> tau;
    thread_local std::vector<double> offdiag;
    if (tau.size() < static_cast<std::size_t>(std::max<lapack_int>(n - 1, 1))) {
      tau.resize(std::max<lapack_int>(n - 1, 1));
      offdiag.resize(std::max<lapack_int>(n - 1, 1));
    }
    Complex wq;
    info = LAPACKE_zhetrd_work(LAPACK_COL_MAJOR, 'L', n, a.data(), n, w.data(),
                               offdiag.data(), tau.data(), &wq, -1);
    if (info == 0) {
      if (work.size() < static_cast<std::size_t>(wq.real()))
        work.resize(static_cast<std::size_t>(wq.real()));
      info = LAPACKE_zhetrd_work(LAPACK_COL_MAJOR, 'L', n, a.data(), n,
                                 w.data(), offdiag.data(), tau.data(),
                                 work.data(),
                                 static_cast<lapack_int>(work.size()));
    }
    if (info == 0) info = LAPACKE_dsterf(n, w.data(), offdiag.data());
  } else {
    Complex wq;
    double rwq = 0.0;
    lapack_int iwq = 0;
    info = LAPACKE_zheevd_work(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n,
                               w.data(), &wq, -1, &rwq, -1, &iwq, -1);
    if (info == 0) {
      if (work.size() < static_cast<std::size_t>(wq.real()))
        work.resize(static_cast<std::size_t>(wq.real()));
      if (rwork.size() < static_cast<std::size_t>(rwq))
        rwork.resize(static_cast<std::size_t>(rwq));
      if (iwork.size() < static_cast<std::size_t>(iwq))
        iwork.resize(static_cast<std::size_t>(iwq));
      info = LAPACKE_zheevd_work(
          LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, w.data(), work.data(),
          static_cast<lapack_int>(work.size()), rwork.data(),
          static_cast<lapack_int>(rwork.size()), iwork.data(),
          static_cast<lapack_int>(iwork.size()));
    }
  }
  if (info != 0) {
    throw ConvergenceFailure("hermitian eigensolve failed with info = " +
                             std::to_string(info));
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

HermitianEigensystem hermitian_eig(const ComplexMatrix& m, double tol_herm) {
  require_square(m, "hermitian_eig");
  require_hermitian(m, tol_herm, "hermitian_eig");
  HermitianEigensystem es;
  es.eigenvectors = m;
  es.eigenvalues.resize(m.rows());
  zheevd_inplace(es.eigenvectors, es.eigenvalues, 'V');
  return es;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m, double tol_herm) {
  require_square(m, "hermitian_eigenvalues");
  require_hermitian(m, tol_herm, "hermitian_eigenvalues");
  ComplexMatrix a = m;
  RealVector w(m.rows());
  zheevd_inplace(a, w, 'N');
  return w;
}

ComplexVector general_eigenvalues(const ComplexMatrix& m) {
  require_square(m, "general_eigenvalues");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  ComplexMatrix a = m;
  ComplexVector w(n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                    nullptr, n, nullptr, n);
  if (info != 0) {
    throw ConvergenceFailure("zgeev failed with info = " +
                             std::to_string(info));
  }
  return w;
}

ComplexMatrix spectral_function(const ComplexMatrix& m, SpectralFn fn,
                                SmallEigPolicy policy, const Tolerances& tol) {
  HermitianEigensystem es = hermitian_eig(m, tol.herm);
  const double scale = std::max(1.0, max_abs(m));
  if (es.eigenvalues.minCoeff() < -tol.psd * scale) {
    throw NotPsd("spectral_function: eigenvalue " +
                 std::to_string(es.eigenvalues.minCoeff()) + " below -psd tol");
  }

  const Eigen::Index n = m.rows();
  RealVector f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double w = es.eigenvalues(i);
    if (policy == SmallEigPolicy::ClampToEps) {
      w = std::max(w, tol.eps_eig);
    } else if (w <= tol.eps_eig) {
      // Support mode: the function acts as zero off the support.
      f(i) = 0.0;
      continue;
    }
    switch (fn) {
      case SpectralFn::Log: f(i) = std::log(w); break;
      case SpectralFn::Sqrt: f(i) = std::sqrt(w); break;
      case SpectralFn::Inverse: f(i) = 1.0 / w; break;
      case SpectralFn::InvSqrt: f(i) = 1.0 / std::sqrt(w); break;
    }
  }
  ComplexMatrix out = es.eigenvectors * f.asDiagonal() *
                      es.eigenvectors.adjoint();
  return 0.5 * (out + out.adjoint());  // clean rounding off the Hermitian part
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b,
                            Subsystem keep) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw DimensionMismatch("partial_trace: matrix size does not equal dim_a * dim_b");
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int b = 0; b < dim_b; ++b)
          out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int c = 0; c < dim_b; ++c)
      for (int a = 0; a < dim_a; ++a)
        out(b, c) += m(a * dim_b + b, a * dim_b + c);
  return out;
}

ComplexVector vectorize(const ComplexMatrix& x) {
  ComplexVector v(x.rows() * x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      v(r * x.cols() + c) = x(r, c);
  return v;
}

ComplexMatrix devectorize(const ComplexVector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw DimensionMismatch("devectorize: vector length " +
                            std::to_string(v.size()) + " != rows * cols");
  }
  ComplexMatrix x(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      x(r, c) = v(r * cols + c);
  return x;
}

std::pair<RealVector, RealVector> gauss_legendre(int n) {
  if (n <= 0) throw InvalidParameter("gauss_legendre: order must be positive");
  RealVector x(n), w(n);
  const double pi = std::acos(-1.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-based initial guess.
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // Map the node pair from [-1, 1] onto [0, 1].
    x(i) = 0.5 * (1.0 - z);
    x(n - 1 - i) = 0.5 * (1.0 + z);
    w(i) = w(n - 1 - i) = 1.0 / ((1.0 - z * z) * pp * pp);
  }
  return {x, w};
}

ComplexMatrix frechet_log_derivative(const ComplexMatrix& rho,
                                     const ComplexMatrix& direction,
                                     int quadrature_order) {
  require_square(rho, "frechet_log_derivative");
  if (direction.rows() != rho.rows() || direction.cols() != rho.cols()) {
    throw DimensionMismatch("frechet_log_derivative: direction shape mismatch");
  }
  const Tolerances tol;
  require_hermitian(rho, tol.herm, "frechet_log_derivative");
  require_hermitian(direction, tol.herm, "frechet_log_derivative");
  const RealVector w = hermitian_eigenvalues(rho);
  if (w.minCoeff() <= tol.eps_eig) {
    throw SingularState("frechet_log_derivative: rho must be strictly positive");
  }

  const auto [nodes, weights] = gauss_legendre(quadrature_order);
  const Eigen::Index n = rho.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int q = 0; q < quadrature_order; ++q) {
    const double s = nodes(q);
    // Resolvent kernel s(rho - I) + I, positive definite for s in [0, 1].
    const ComplexMatrix a = s * rho + (1.0 - s) * eye;
    const Eigen::LLT<ComplexMatrix> llt(a);
    const ComplexMatrix y = llt.solve(direction);
    acc += weights(q) * llt.solve(y.adjoint()).adjoint();
  }
  return 0.5 * (acc + acc.adjoint());
}

}  // namespace chanent
