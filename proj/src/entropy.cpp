#include "chanent/entropy.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "chanent/errors.hpp"

namespace chanent {

namespace {

constexpr std::uint64_t kTagOptimizer = 0x6f707469;  // restart substreams

void require_cptp(const Channel& phi, const Tolerances& tol, const char* who) {
  const CptpReport rep = is_cptp(phi, tol);
  if (!rep.cptp) {
    throw NotCptp(std::string(who) + ": channel is not CPTP (completeness " +
                  std::to_string(rep.completeness_violation) + ", psd " +
                  std::to_string(rep.psd_violation) + ", tp " +
                  std::to_string(rep.tp_violation) + ", rep mismatch " +
                  std::to_string(rep.representation_mismatch) + ")");
  }
}

// Objective evaluator over unconstrained coordinates, sharing one Choi matrix.
// Layout of theta: dim_in - 1 softmax logits for lambda (the last logit is
// pinned to 0), then dim_in diagonal and dim_in (dim_in - 1) off-diagonal
// coordinates of the Hermitian generator of U = exp(iH).
class ObjectiveEvaluator {
 public:
  explicit ObjectiveEvaluator(const Channel& phi)
      : choi_(choi_matrix(phi)), dout_(phi.dim_out), din_(phi.dim_in) {}

  int num_params() const { return (din_ - 1) + din_ * din_; }

  RealVector lambda_of(const RealVector& theta) const {
    RealVector logits(din_);
    logits.head(din_ - 1) = theta.head(din_ - 1);
    logits(din_ - 1) = 0.0;
    const double top = logits.maxCoeff();
    RealVector lambda = (logits.array() - top).exp();
    return lambda / lambda.sum();
  }

  ComplexMatrix unitary_of(const RealVector& theta) const {
    ComplexMatrix h(din_, din_);
    int at = din_ - 1;
    for (int i = 0; i < din_; ++i) h(i, i) = theta(at++);
    for (int i = 0; i < din_; ++i) {
      for (int j = i + 1; j < din_; ++j) {
        const Complex z(theta(at), theta(at + 1));
        at += 2;
        h(i, j) = z;
        h(j, i) = std::conj(z);
      }
    }
    const HermitianEigensystem es = hermitian_eig(h);
    ComplexVector phase(din_);
    for (int i = 0; i < din_; ++i) {
      phase(i) = std::exp(Complex(0.0, es.eigenvalues(i)));
    }
    return es.eigenvectors * phase.asDiagonal() * es.eigenvectors.adjoint();
  }

  double operator()(const RealVector& theta) const {
    const RealVector lambda = lambda_of(theta);
    const ComplexMatrix u = unitary_of(theta);
    const ComplexMatrix sigma =
        schmidt_output_from_choi(choi_, dout_, din_, lambda, u);
    const RealVector w = hermitian_eigenvalues(sigma);
    return std::log(static_cast<double>(dout_)) + entropy_of_spectrum(lambda) -
           entropy_of_spectrum(w);
  }

 private:
  ComplexMatrix choi_;
  int dout_;
  int din_;
};

struct RestartOutcome {
  double value = 0.0;
  RealVector theta;
  long evaluations = 0;
  bool converged = false;
};

// Compass pattern search: sweep coordinate moves +/- h, halve h when a full
// sweep gains less than sweep_tol, stop when h underflows the resolution
// floor or the evaluation budget runs out.
RestartOutcome pattern_search(const ObjectiveEvaluator& f, RealVector theta,
                              const OptimizerOptions& opts) {
  constexpr double kInitialStep = 0.5;
  constexpr double kMinStep = 1e-7;

  RestartOutcome out;
  out.theta = theta;
  double fx = f(theta);
  ++out.evaluations;
  double h = kInitialStep;
  while (h >= kMinStep && out.evaluations < opts.max_evals_per_restart) {
    const double sweep_start = fx;
    for (int i = 0;
         i < theta.size() && out.evaluations < opts.max_evals_per_restart;
         ++i) {
      for (const double sgn : {1.0, -1.0}) {
        RealVector cand = theta;
        cand(i) += sgn * h;
        const double fc = f(cand);
        ++out.evaluations;
        if (fc > fx) {
          theta = std::move(cand);
          fx = fc;
          break;
        }
      }
    }
    if (fx - sweep_start < opts.sweep_tol) h *= 0.5;
  }
  out.converged = h < kMinStep;
  out.value = fx;
  out.theta = theta;
  return out;
}

}  // namespace

double entropy_of_spectrum(const RealVector& w, double eps_eig) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > eps_eig) h -= w(i) * std::log(w(i));
  }
  return h;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

double von_neumann(const DensityMatrix& rho) {
  return entropy_of_spectrum(hermitian_eigenvalues(rho.mat()));
}

RelEntropyValue relative_entropy(const DensityMatrix& rho,
                                 const DensityMatrix& sigma,
                                 const Tolerances& tol) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionMismatch("relative_entropy: dimensions differ");
  }
  const HermitianEigensystem es = hermitian_eig(sigma.mat(), tol.herm);
  const Eigen::Index n = es.eigenvalues.size();

  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (es.eigenvalues(i) <= tol.eps_eig) kernel.push_back(i);
  }
  if (!kernel.empty()) {
    // Leakage of rho outside supp(sigma): ||(I - Pi) rho (I - Pi)||_max.
    ComplexMatrix vk(n, static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j) {
      vk.col(j) = es.eigenvectors.col(kernel[j]);
    }
    const ComplexMatrix leak = vk * (vk.adjoint() * rho.mat() * vk) * vk.adjoint();
    if (max_abs(leak) > tol.supp) return RelEntropyValue::inf();
  }

  // Tr rho log rho - Tr rho log sigma, the latter on supp(sigma).
  double value = -von_neumann(rho);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = es.eigenvalues(i);
    if (s <= tol.eps_eig) continue;
    const double overlap =
        (es.eigenvectors.col(i).adjoint() * rho.mat() * es.eigenvectors.col(i))
            .value()
            .real();
    value -= std::log(s) * overlap;
  }
  return RelEntropyValue::finite(value);
}

double map_entropy(const Channel& phi, const Tolerances& tol) {
  require_cptp(phi, tol, "map_entropy");
  const ComplexMatrix d = choi_matrix(phi);
  const RealVector w = hermitian_eigenvalues(0.5 * (d + d.adjoint()));
  return entropy_of_spectrum(w / static_cast<double>(phi.dim_in), tol.eps_eig);
}

double relative_entropy_objective(const Channel& phi,
                                  const SchmidtSpectrum& lambda,
                                  const ComplexMatrix& u,
                                  const Tolerances& tol) {
  require_cptp(phi, tol, "relative_entropy_objective");
  if (lambda.dim() != phi.dim_in) {
    throw DimensionMismatch("relative_entropy_objective: lambda length != dim_in");
  }
  if (u.rows() != phi.dim_in || u.cols() != phi.dim_in) {
    throw DimensionMismatch("relative_entropy_objective: unitary shape mismatch");
  }
  const double udev = max_abs(u.adjoint() * u -
                              ComplexMatrix::Identity(u.rows(), u.cols()));
  if (udev > 1e-8) {
    throw NotUnitary("relative_entropy_objective: |U^dag U - I|_max = " +
                     std::to_string(udev));
  }
  const ComplexMatrix sigma = schmidt_output_from_choi(
      choi_matrix(phi), phi.dim_out, phi.dim_in, lambda.lambda(), u);
  const RealVector w = hermitian_eigenvalues(sigma);
  return std::log(static_cast<double>(phi.dim_out)) +
         entropy_of_spectrum(lambda.lambda(), tol.eps_eig) -
         entropy_of_spectrum(w, tol.eps_eig);
}

OptimizerResult channel_relative_entropy(const Channel& phi,
                                         const OptimizerOptions& opts) {
  require_cptp(phi, opts.tol, "channel_relative_entropy");
  if (opts.restarts < 1) {
    throw InvalidParameter("channel_relative_entropy: restarts must be >= 1");
  }
  const ObjectiveEvaluator f(phi);
  const int np = f.num_params();

  OptimizerResult result;
  result.restarts = opts.restarts;
  bool have_best = false;
  RealVector best_theta;
  for (int r = 0; r < opts.restarts; ++r) {
    RealVector theta = RealVector::Zero(np);
    if (r > 0) {
      // Restart 0 is pinned to the maximally entangled input; the others
      // start from independent Gaussian draws.
      auto rng = substream(opts.seed, kTagOptimizer, static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < np; ++i) theta(i) = normal(rng);
    }
    RestartOutcome outcome = pattern_search(f, std::move(theta), opts);
    result.evaluations += outcome.evaluations;
    result.converged = result.converged && outcome.converged;
    // Strictly-greater keeps the lowest restart index on exact ties.
    if (!have_best || outcome.value > result.value) {
      have_best = true;
      result.value = outcome.value;
      result.best_restart = r;
      best_theta = std::move(outcome.theta);
    }
  }
  result.argmax_lambda = f.lambda_of(best_theta);
  result.argmax_unitary = f.unitary_of(best_theta);
  return result;
}

double channel_entropy(const Channel& phi, const OptimizerOptions& opts) {
  return std::log(static_cast<double>(phi.dim_out)) -
         channel_relative_entropy(phi, opts).value;
}

EntropyReport entropy_gap(const Channel& phi, const OptimizerOptions& opts) {
  EntropyReport report;
  report.h_map = map_entropy(phi, opts.tol);
  report.optimizer = channel_relative_entropy(phi, opts);
  report.h_channel =
      std::log(static_cast<double>(phi.dim_out)) - report.optimizer.value;
  report.gap = report.h_map - std::log(static_cast<double>(phi.dim_out)) -
               report.h_channel;
  return report;
}

}  // namespace chanent
