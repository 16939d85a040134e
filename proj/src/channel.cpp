#include "chanent/channel.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "chanent/errors.hpp"
#include "chanent/rng.hpp"

namespace chanent {

namespace {

// Substream roles, so each sampling site has its own independent stream.
constexpr std::uint64_t kTagRandomChannel = 0x6368616e;  // random_channel
constexpr std::uint64_t kTagSchmidt = 0x73636d64;        // sample_schmidt
constexpr std::uint64_t kTagUnitaryMix = 0x756d6978;     // unitary mixtures

ComplexMatrix elementary(int d, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

void require_choi_shape(const ComplexMatrix& choi, int dim_out, int dim_in,
                        const char* who) {
  if (dim_out <= 0 || dim_in <= 0 || choi.rows() != choi.cols() ||
      choi.rows() != static_cast<Eigen::Index>(dim_out) * dim_in) {
    throw DimensionMismatch(std::string(who) +
                            ": Choi matrix size does not equal dim_out * dim_in");
  }
}

}  // namespace

Channel channel_from_kraus(std::vector<ComplexMatrix> ops) {
  if (ops.empty()) {
    throw InvalidParameter("channel_from_kraus: empty Kraus list");
  }
  const Eigen::Index rows = ops.front().rows();
  const Eigen::Index cols = ops.front().cols();
  if (rows <= 0 || cols <= 0) {
    throw DimensionMismatch("channel_from_kraus: empty Kraus operator");
  }
  for (const auto& k : ops) {
    if (k.rows() != rows || k.cols() != cols) {
      throw DimensionMismatch("channel_from_kraus: Kraus shapes differ");
    }
  }
  Channel phi;
  phi.dim_out = static_cast<int>(rows);
  phi.dim_in = static_cast<int>(cols);
  phi.kraus = std::move(ops);
  return phi;
}

Channel channel_from_choi(ComplexMatrix choi, int dim_out, int dim_in) {
  require_choi_shape(choi, dim_out, dim_in, "channel_from_choi");
  Channel phi;
  phi.dim_out = dim_out;
  phi.dim_in = dim_in;
  phi.choi = std::move(choi);
  return phi;
}

ComplexMatrix choi_from_kraus(const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) {
    throw InvalidParameter("choi_from_kraus: empty Kraus list");
  }
  const Eigen::Index n = ops.front().rows() * ops.front().cols();
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (const auto& k : ops) {
    if (k.rows() != ops.front().rows() || k.cols() != ops.front().cols()) {
      throw DimensionMismatch("choi_from_kraus: Kraus shapes differ");
    }
    const ComplexVector v = vectorize(k);
    d.noalias() += v * v.adjoint();
  }
  return d;
}

std::vector<ComplexMatrix> kraus_from_choi(const ComplexMatrix& choi,
                                           int dim_out, int dim_in,
                                           const Tolerances& tol) {
  require_choi_shape(choi, dim_out, dim_in, "kraus_from_choi");
  const HermitianEigensystem es = hermitian_eig(choi, tol.herm);
  const double scale = std::max(1.0, max_abs(choi));
  if (es.eigenvalues.minCoeff() < -tol.psd * scale) {
    throw NotPsd("kraus_from_choi: Choi eigenvalue " +
                 std::to_string(es.eigenvalues.minCoeff()) +
                 " below -psd tolerance");
  }
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double w = es.eigenvalues(i);
    if (w <= tol.eps_eig) continue;
    ops.push_back(std::sqrt(w) *
                  devectorize(es.eigenvectors.col(i), dim_out, dim_in));
  }
  if (ops.empty()) {
    throw InvalidParameter("kraus_from_choi: Choi matrix has empty support");
  }
  return ops;
}

ComplexMatrix choi_matrix(const Channel& phi) {
  if (phi.has_choi()) return phi.choi;
  if (phi.has_kraus()) return choi_from_kraus(phi.kraus);
  throw InvalidParameter("choi_matrix: channel holds no representation");
}

std::vector<ComplexMatrix> kraus_operators(const Channel& phi,
                                           const Tolerances& tol) {
  if (phi.has_kraus()) return phi.kraus;
  if (phi.has_choi()) {
    return kraus_from_choi(phi.choi, phi.dim_out, phi.dim_in, tol);
  }
  throw InvalidParameter("kraus_operators: channel holds no representation");
}

DensityMatrix jamiolkowski_state(const Channel& phi) {
  const ComplexMatrix d = choi_matrix(phi);
  try {
    return DensityMatrix(d / static_cast<double>(phi.dim_in));
  } catch (const Error& e) {
    throw NotCptp(std::string("jamiolkowski_state: ") + e.what());
  }
}

DensityMatrix apply(const Channel& phi, const DensityMatrix& rho) {
  if (rho.dim() != phi.dim_in) {
    throw DimensionMismatch("apply: state dimension " +
                            std::to_string(rho.dim()) + " != dim_in " +
                            std::to_string(phi.dim_in));
  }
  ComplexMatrix out = ComplexMatrix::Zero(phi.dim_out, phi.dim_out);
  if (phi.has_kraus()) {
    for (const auto& k : phi.kraus) {
      out.noalias() += k * rho.mat() * k.adjoint();
    }
  } else {
    // tr_in[D (I (x) rho^T)]:  out(a,c) = sum_{b,f} D[(a,b),(c,f)] rho(b,f).
    const ComplexMatrix d = choi_matrix(phi);
    const int din = phi.dim_in;
    for (int a = 0; a < phi.dim_out; ++a) {
      for (int c = 0; c < phi.dim_out; ++c) {
        out(a, c) = (d.block(a * din, c * din, din, din).array() *
                     rho.mat().array())
                        .sum();
      }
    }
  }
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

DensityMatrix apply_extended(const Channel& phi, const DensityMatrix& rho_ar) {
  const int din = phi.dim_in;
  if (rho_ar.dim() % din != 0) {
    throw DimensionMismatch("apply_extended: state dimension not divisible by dim_in");
  }
  const int dr = rho_ar.dim() / din;
  const int dout = phi.dim_out;
  ComplexMatrix out = ComplexMatrix::Zero(dout * dr, dout * dr);
  if (phi.has_kraus()) {
    const ComplexMatrix eye = ComplexMatrix::Identity(dr, dr);
    for (const auto& k : phi.kraus) {
      const ComplexMatrix kr = kron(k, eye);
      out.noalias() += kr * rho_ar.mat() * kr.adjoint();
    }
  } else {
    // out[(a,r),(c,s)] = sum_{b,f} D[(a,b),(c,f)] rho[(b,r),(f,s)].
    const ComplexMatrix d = choi_matrix(phi);
    for (int a = 0; a < dout; ++a) {
      for (int c = 0; c < dout; ++c) {
        for (int b = 0; b < din; ++b) {
          for (int f = 0; f < din; ++f) {
            out.block(a * dr, c * dr, dr, dr) +=
                d(a * din + b, c * din + f) *
                rho_ar.mat().block(b * dr, f * dr, dr, dr);
          }
        }
      }
    }
  }
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

ComplexMatrix schmidt_output_from_choi(const ComplexMatrix& choi, int dim_out,
                                       int dim_in, const RealVector& lambda) {
  require_choi_shape(choi, dim_out, dim_in, "schmidt_output_from_choi");
  if (lambda.size() != dim_in) {
    throw DimensionMismatch("schmidt_output_from_choi: lambda length != dim_in");
  }
  // sigma = diag(t) D diag(t) with t = 1 (x) sqrt(lambda).
  RealVector t(static_cast<Eigen::Index>(dim_out) * dim_in);
  const RealVector s = lambda.cwiseMax(0.0).cwiseSqrt();
  for (int a = 0; a < dim_out; ++a) {
    t.segment(a * dim_in, dim_in) = s;
  }
  const ComplexVector tc = t.cast<Complex>();
  return tc.asDiagonal() * choi * tc.asDiagonal();
}

ComplexMatrix schmidt_output_from_choi(const ComplexMatrix& choi, int dim_out,
                                       int dim_in, const RealVector& lambda,
                                       const ComplexMatrix& u) {
  require_choi_shape(choi, dim_out, dim_in, "schmidt_output_from_choi");
  if (lambda.size() != dim_in || u.rows() != dim_in || u.cols() != dim_in) {
    throw DimensionMismatch("schmidt_output_from_choi: lambda or unitary shape mismatch");
  }
  // sigma = (1 (x) M) D (1 (x) M)^dag with M = sqrt(Lambda) u^T; two full-size
  // products beat a loop over small blocks here.
  const ComplexMatrix m =
      lambda.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal() *
      u.transpose();
  const ComplexMatrix im = kron(ComplexMatrix::Identity(dim_out, dim_out), m);
  return im * choi * im.adjoint();
}

CptpReport is_cptp(const Channel& phi, const Tolerances& tol) {
  CptpReport rep;
  if (phi.has_kraus()) {
    ComplexMatrix acc = ComplexMatrix::Zero(phi.dim_in, phi.dim_in);
    for (const auto& k : phi.kraus) acc.noalias() += k.adjoint() * k;
    rep.completeness_violation =
        max_abs(acc - ComplexMatrix::Identity(phi.dim_in, phi.dim_in));
  }
  const ComplexMatrix d = choi_matrix(phi);
  const double scale = std::max(1.0, max_abs(d));
  const double herm_dev = max_abs(d - d.adjoint());
  const ComplexMatrix h = 0.5 * (d + d.adjoint());
  const RealVector w = hermitian_eigenvalues(h, /*tol_herm=*/1.0);
  rep.psd_violation = std::max(herm_dev, std::max(0.0, -w.minCoeff()));
  rep.tp_violation =
      max_abs(partial_trace(d, phi.dim_out, phi.dim_in, Subsystem::B) -
              ComplexMatrix::Identity(phi.dim_in, phi.dim_in));
  if (phi.has_kraus() && phi.has_choi()) {
    rep.representation_mismatch = max_abs(choi_from_kraus(phi.kraus) - phi.choi);
  }
  rep.cptp = rep.completeness_violation <= tol.cptp &&
             rep.psd_violation <= tol.cptp * scale &&
             rep.tp_violation <= tol.cptp &&
             rep.representation_mismatch <= tol.recon * scale;
  return rep;
}

bool is_unital(const Channel& phi, const Tolerances& tol) {
  if (phi.dim_in != phi.dim_out) {
    throw DimensionMismatch("is_unital: dim_in != dim_out");
  }
  const int d = phi.dim_in;
  const DensityMatrix mixed(ComplexMatrix::Identity(d, d) / d);
  const DensityMatrix out = apply(phi, mixed);
  return max_abs(out.mat() - mixed.mat()) <= tol.cptp;
}

Channel identity_channel(int d) {
  if (d <= 0) throw InvalidParameter("identity_channel: d must be positive");
  return channel_from_kraus({ComplexMatrix::Identity(d, d)});
}

Channel unitary_channel(ComplexMatrix w) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw DimensionMismatch("unitary_channel: matrix must be square");
  }
  const double dev =
      max_abs(w.adjoint() * w - ComplexMatrix::Identity(w.rows(), w.cols()));
  if (dev > 1e-8) {
    throw NotUnitary("unitary_channel: |W^dag W - I|_max = " +
                     std::to_string(dev));
  }
  return channel_from_kraus({std::move(w)});
}

Channel depolarizing_channel(int d) {
  if (d <= 0) throw InvalidParameter("depolarizing_channel: d must be positive");
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(d) * d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) ops.push_back(s * elementary(d, i, j));
  Channel phi = channel_from_kraus(std::move(ops));
  // The Choi matrix is exactly I / d; store it alongside.
  phi.choi = ComplexMatrix::Identity(d * d, d * d) / static_cast<double>(d);
  return phi;
}

Channel partial_depolarizing_channel(int d, double q) {
  if (d <= 0) throw InvalidParameter("partial_depolarizing_channel: d must be positive");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidParameter("partial_depolarizing_channel: q = " +
                           std::to_string(q) + " outside [0, 1]");
  }
  std::vector<ComplexMatrix> ops;
  if (q < 1.0) {
    ops.push_back(std::sqrt(1.0 - q) * ComplexMatrix::Identity(d, d));
  }
  if (q > 0.0) {
    const double s = std::sqrt(q / d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) ops.push_back(s * elementary(d, i, j));
  }
  return channel_from_kraus(std::move(ops));
}

Channel pauli_mixture_channel(double q0, double q1, double q2, double q3) {
  const double qs[4] = {q0, q1, q2, q3};
  double sum = 0.0;
  for (double q : qs) {
    if (q < 0.0) throw InvalidParameter("pauli_mixture_channel: negative weight");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidParameter("pauli_mixture_channel: weights sum to " +
                           std::to_string(sum) + ", expected 1");
  }
  const Complex i(0.0, 1.0);
  ComplexMatrix pauli[4];
  pauli[0] = ComplexMatrix::Identity(2, 2);
  pauli[1] = (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished();
  pauli[2] = (ComplexMatrix(2, 2) << 0, -i, i, 0).finished();
  pauli[3] = (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished();
  std::vector<ComplexMatrix> ops;
  for (int t = 0; t < 4; ++t) {
    if (qs[t] > 0.0) ops.push_back(std::sqrt(qs[t]) * pauli[t]);
  }
  if (ops.empty()) {
    throw InvalidParameter("pauli_mixture_channel: all weights zero");
  }
  return channel_from_kraus(std::move(ops));
}

Channel random_unitary_mixture_channel(int d, int m,
                                       const std::vector<double>& weights,
                                       std::uint64_t seed) {
  if (d <= 0 || m <= 0) {
    throw InvalidParameter("random_unitary_mixture_channel: d and m must be positive");
  }
  std::vector<double> w = weights;
  if (w.empty()) w.assign(m, 1.0 / m);
  if (static_cast<int>(w.size()) != m) {
    throw InvalidParameter("random_unitary_mixture_channel: weight count != m");
  }
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0) throw InvalidParameter("random_unitary_mixture_channel: negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidParameter("random_unitary_mixture_channel: weights sum to " +
                           std::to_string(sum) + ", expected 1");
  }
  auto rng = substream(seed, kTagUnitaryMix);
  std::vector<ComplexMatrix> ops;
  ops.reserve(m);
  for (int t = 0; t < m; ++t) {
    ops.push_back(std::sqrt(w[t]) * random_unitary(d, rng));
  }
  return channel_from_kraus(std::move(ops));
}

Channel amplitude_damping_channel(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidParameter("amplitude_damping_channel: gamma = " +
                           std::to_string(gamma) + " outside [0, 1]");
  }
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return channel_from_kraus({k0, k1});
}

Channel random_channel(int d, int k, std::uint64_t seed) {
  if (d <= 0 || k <= 0) {
    throw InvalidParameter("random_channel: d and k must be positive");
  }
  constexpr int kMaxAttempts = 8;
  const Tolerances tol;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    auto rng = substream(seed, kTagRandomChannel, static_cast<std::uint64_t>(attempt));
    const ComplexMatrix g = random_ginibre(d * d, k, rng);
    ComplexMatrix w = g * g.adjoint();
    w = 0.5 * (w + w.adjoint());
    // Input marginal; its inverse square root normalizes tr_out to I.
    const ComplexMatrix s = partial_trace(w, d, d, Subsystem::B);
    const HermitianEigensystem es = hermitian_eig(s, tol.herm);
    if (es.eigenvalues.minCoeff() <=
        tol.eps_eig * std::max(1.0, es.eigenvalues.maxCoeff())) {
      continue;  // singular marginal: resample from the next substream
    }
    const ComplexMatrix r = es.eigenvectors *
                            es.eigenvalues.cwiseSqrt().cwiseInverse()
                                .cast<Complex>().asDiagonal() *
                            es.eigenvectors.adjoint();
    const ComplexMatrix ir = kron(ComplexMatrix::Identity(d, d), r);
    ComplexMatrix choi = ir * w * ir;
    choi = 0.5 * (choi + choi.adjoint());
    return channel_from_choi(std::move(choi), d, d);
  }
  throw SingularMarginal("random_channel: marginal stayed singular after " +
                         std::to_string(kMaxAttempts) + " attempts");
}

const char* schmidt_kind_name(SchmidtKind kind) {
  switch (kind) {
    case SchmidtKind::DirichletFlat: return "dir_d_1";
    case SchmidtKind::DirichletTwo: return "dir_2_1";
    case SchmidtKind::DirichletConc: return "dir_d_2";
    case SchmidtKind::Uniform: return "uniform";
  }
  throw InvalidParameter("schmidt_kind_name: unknown kind");
}

SchmidtKind schmidt_kind_from_name(const std::string& name) {
  if (name == "dir_d_1") return SchmidtKind::DirichletFlat;
  if (name == "dir_2_1") return SchmidtKind::DirichletTwo;
  if (name == "dir_d_2") return SchmidtKind::DirichletConc;
  if (name == "uniform") return SchmidtKind::Uniform;
  throw InvalidParameter("unknown Schmidt kind '" + name +
                         "' (expected dir_d_1, dir_2_1, dir_d_2 or uniform)");
}

SchmidtSpectrum sample_schmidt(int d, SchmidtKind kind, std::uint64_t seed) {
  if (d <= 0) throw InvalidParameter("sample_schmidt: d must be positive");
  if (kind == SchmidtKind::Uniform) return SchmidtSpectrum::uniform(d);
  if (kind == SchmidtKind::DirichletTwo && d < 2) {
    throw InvalidParameter("sample_schmidt: dir_2_1 needs d >= 2");
  }
  auto rng = substream(seed, kTagSchmidt, static_cast<std::uint64_t>(kind));
  const double alpha = (kind == SchmidtKind::DirichletConc) ? 2.0 : 1.0;
  const int live = (kind == SchmidtKind::DirichletTwo) ? 2 : d;
  std::gamma_distribution<double> gamma(alpha, 1.0);
  RealVector lambda = RealVector::Zero(d);
  double sum = 0.0;
  while (sum <= 0.0) {  // an all-zero draw has probability zero; guard anyway
    for (int i = 0; i < live; ++i) {
      lambda(i) = gamma(rng);
      sum += lambda(i);
    }
  }
  lambda /= sum;
  return SchmidtSpectrum(lambda);
}

}  // namespace chanent
