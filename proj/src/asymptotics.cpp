#include "chanent/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chanent/errors.hpp"
#include "chanent/rng.hpp"

namespace chanent {

namespace {

// Experiment ids keying the per-trial substreams.
constexpr std::uint64_t kExpFig1 = 0xf161;
constexpr std::uint64_t kExpConjecture = 0xc017;
constexpr std::uint64_t kExpMoments = 0x303e;

// Roles within a trial.
constexpr std::uint64_t kRoleChannel = 0;
constexpr std::uint64_t kRoleLambda = 1;

std::uint64_t pack_d_kind(int d, SchmidtKind kind) {
  return (static_cast<std::uint64_t>(d) << 8) |
         static_cast<std::uint64_t>(kind);
}

void require_square_cptp(const Channel& phi, const SchmidtSpectrum& lambda,
                         const char* who) {
  if (phi.dim_in != phi.dim_out) {
    throw DimensionMismatch(std::string(who) + ": dim_in != dim_out");
  }
  if (lambda.dim() != phi.dim_in) {
    throw DimensionMismatch(std::string(who) + ": lambda length != dim_in");
  }
  const CptpReport rep = is_cptp(phi);
  if (!rep.cptp) {
    throw NotCptp(std::string(who) + ": channel is not CPTP");
  }
}

struct Accumulator {
  double sum = 0.0;
  double sumsq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double stderr_of_mean() const {
    if (n < 2) return 0.0;
    const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

SpectrumSample output_spectrum(const Channel& phi, const SchmidtSpectrum& lambda) {
  require_square_cptp(phi, lambda, "output_spectrum");
  const int d = phi.dim_in;
  const ComplexMatrix choi = choi_matrix(phi);

  SpectrumSample sample;
  sample.d = d;
  const ComplexMatrix sigma =
      schmidt_output_from_choi(choi, d, d, lambda.lambda());
  sample.eigenvalues = hermitian_eigenvalues(sigma);
  sample.rescaled =
      sample.eigenvalues * static_cast<double>(d) * static_cast<double>(d);

  // Cross-check: sigma and D (1 (x) Lambda) are similar up to a square-root
  // conjugation, so their spectra agree even though the product is not
  // Hermitian.  Compare against a general (non-symmetric) eigensolver.
  ComplexMatrix product = choi;
  for (int a = 0; a < d; ++a) {
    for (int j = 0; j < d; ++j) {
      product.col(a * d + j) *= lambda.lambda()(j);
    }
  }
  const ComplexVector z = general_eigenvalues(product);
  RealVector zr(z.size());
  double imag_dev = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    zr(i) = z(i).real();
    imag_dev = std::max(imag_dev, std::abs(z(i).imag()));
  }
  std::sort(zr.begin(), zr.end());
  sample.identity_dev =
      std::max(imag_dev, (zr - sample.eigenvalues).cwiseAbs().maxCoeff());
  return sample;
}

double tr_sigma_log_gamma(const Channel& phi, const SchmidtSpectrum& lambda) {
  require_square_cptp(phi, lambda, "tr_sigma_log_gamma");
  const int d = phi.dim_in;
  const Tolerances tol;
  const ComplexMatrix sigma =
      schmidt_output_from_choi(choi_matrix(phi), d, d, lambda.lambda());
  // log gamma is diagonal on the product basis: log(lambda_j / d) at (b, j),
  // restricted to the support of lambda; the reference marginal of sigma
  // carries all the weight, so only the diagonal of tr_out sigma enters.
  const ComplexMatrix marginal = partial_trace(sigma, d, d, Subsystem::B);
  const double logd = std::log(static_cast<double>(d));
  double value = 0.0;
  for (int j = 0; j < d; ++j) {
    const double lj = lambda.lambda()(j);
    if (lj <= tol.eps_eig) continue;
    value += marginal(j, j).real() * (std::log(lj) - logd);
  }
  const double expected =
      -entropy_of_spectrum(lambda.lambda(), tol.eps_eig) - logd;
  if (std::abs(value - expected) > 1e-8) {
    throw Error("tr_sigma_log_gamma: identity violated by " +
                std::to_string(std::abs(value - expected)) +
                " (channel marginal is off)");
  }
  return value;
}

MomentReport free_moment_check(int d, int k, SchmidtKind kind, int trials,
                               std::uint64_t seed) {
  if (d <= 0 || k <= 0) {
    throw InvalidParameter("free_moment_check: d and k must be positive");
  }
  if (trials < 2) {
    throw InsufficientTrials("free_moment_check: need at least 2 trials");
  }

  Accumulator m1, m2, pred2, res1, res2;
  for (int t = 0; t < trials; ++t) {
    const Channel phi = random_channel(
        d, k, derive_seed(seed, kExpMoments, static_cast<std::uint64_t>(t), kRoleChannel));
    const SchmidtSpectrum lambda = sample_schmidt(
        d, kind, derive_seed(seed, kExpMoments, static_cast<std::uint64_t>(t), kRoleLambda));
    const ComplexMatrix choi = choi_matrix(phi);

    // Output spectrum, rescaled by d^2 (mean 1 because tr sigma = 1).
    const RealVector x =
        hermitian_eigenvalues(
            schmidt_output_from_choi(choi, d, d, lambda.lambda())) *
        static_cast<double>(d) * static_cast<double>(d);
    // Choi and input spectra, explicitly renormalized to mean 1.
    RealVector a = hermitian_eigenvalues(choi) * static_cast<double>(d);
    a /= a.mean();
    RealVector b = lambda.lambda() * static_cast<double>(d);
    b /= b.mean();

    const double m1_t = x.mean();
    const double m2_t = x.array().square().mean();
    const double a2 = a.array().square().mean();
    const double b2 = b.array().square().mean();
    // Free multiplicative prediction with a1 = b1 = 1:
    //   m2 = a2 b1^2 + a1^2 b2 - a1^2 b1^2 = a2 + b2 - 1.
    const double pred_t = a2 + b2 - 1.0;

    m1.add(m1_t);
    m2.add(m2_t);
    pred2.add(pred_t);
    res1.add(m1_t - 1.0);
    res2.add(m2_t - pred_t);
  }

  // z-scores of the per-trial residuals; the stderr floor keeps identically
  // satisfied predictions (residuals at rounding level) from dividing 0 by 0.
  constexpr double kStderrFloor = 1e-12;
  MomentReport report;
  report.d = d;
  report.k = k;
  report.trials = trials;
  report.m1_emp = m1.mean();
  report.m1_pred = 1.0;
  report.z1 = res1.mean() / std::max(res1.stderr_of_mean(), kStderrFloor);
  report.m2_emp = m2.mean();
  report.m2_pred = pred2.mean();
  report.z2 = res2.mean() / std::max(res2.stderr_of_mean(), kStderrFloor);
  return report;
}

std::pair<Channel, SchmidtSpectrum> fig1_trial(int d, SchmidtKind kind,
                                               int trial, std::uint64_t seed) {
  Channel phi = random_channel(
      d, d * d,
      derive_seed(seed, kExpFig1, pack_d_kind(d, kind),
                  2 * static_cast<std::uint64_t>(trial) + kRoleChannel));
  SchmidtSpectrum lambda = sample_schmidt(
      d, kind,
      derive_seed(seed, kExpFig1, pack_d_kind(d, kind),
                  2 * static_cast<std::uint64_t>(trial) + kRoleLambda));
  return {std::move(phi), std::move(lambda)};
}

std::vector<CurvePoint> fig1_experiment(const std::vector<int>& d_list,
                                        const std::vector<SchmidtKind>& nu_kinds,
                                        int trials, std::uint64_t seed) {
  if (d_list.empty() || nu_kinds.empty()) {
    throw InvalidParameter("fig1_experiment: empty dimension or kind list");
  }
  if (!std::is_sorted(d_list.begin(), d_list.end())) {
    throw InvalidParameter("fig1_experiment: d_list must be ascending");
  }
  if (trials < 1) {
    throw InvalidParameter("fig1_experiment: trials must be >= 1");
  }
  const Tolerances tol;
  std::vector<CurvePoint> points;
  for (const int d : d_list) {
    const double logd = std::log(static_cast<double>(d));
    for (const SchmidtKind kind : nu_kinds) {
      Accumulator acc;
      for (int t = 0; t < trials; ++t) {
        const auto [phi, lambda] = fig1_trial(d, kind, t, seed);
        const RealVector w = hermitian_eigenvalues(schmidt_output_from_choi(
            choi_matrix(phi), d, d, lambda.lambda()));
        acc.add(logd + entropy_of_spectrum(lambda.lambda(), tol.eps_eig) -
                entropy_of_spectrum(w, tol.eps_eig));
      }
      CurvePoint point;
      point.d = d;
      point.nu_kind = kind;
      point.mean_D = acc.mean();
      point.stderr_D = acc.stderr_of_mean();
      point.trials = trials;
      points.push_back(point);
    }
  }
  return points;
}

std::vector<ConjectureRow> conjecture_sweep(const std::vector<int>& d_list,
                                            int trials, std::uint64_t seed) {
  if (d_list.empty()) {
    throw InvalidParameter("conjecture_sweep: empty dimension list");
  }
  if (trials < 1) {
    throw InvalidParameter("conjecture_sweep: trials must be >= 1");
  }
  const Tolerances tol;
  std::vector<ConjectureRow> rows;
  for (const int d : d_list) {
    const int k = d * d;
    const double logd = std::log(static_cast<double>(d));
    Accumulator hmap, dlb;
    for (int t = 0; t < trials; ++t) {
      const Channel phi = random_channel(
          d, k,
          derive_seed(seed, kExpConjecture, static_cast<std::uint64_t>(d),
                      static_cast<std::uint64_t>(t)));
      // At the maximally entangled input, sigma equals the Choi state, so
      // one eigendecomposition yields both H_map and the objective there:
      //   D = log d + H(uniform) - H(J) = 2 log d - H_map.
      const RealVector w =
          hermitian_eigenvalues(choi_matrix(phi)) / static_cast<double>(d);
      const double h = entropy_of_spectrum(w, tol.eps_eig);
      hmap.add(h);
      dlb.add(2.0 * logd - h);
    }
    ConjectureRow row;
    row.d = d;
    row.k = k;
    row.trials = trials;
    row.mean_h_map = hmap.mean();
    row.h_map_dev = row.mean_h_map - (2.0 * logd - 0.5);
    row.stderr_h_map = hmap.stderr_of_mean();
    row.mean_D_lower_bound = dlb.mean();
    row.D_dev = row.mean_D_lower_bound - 0.5;
    row.stderr_D = dlb.stderr_of_mean();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace chanent
