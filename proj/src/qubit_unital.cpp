#include "chanent/qubit_unital.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chanent/errors.hpp"

namespace chanent {

namespace {

constexpr double kLog2 = 0.69314718055994531;

// Validates the preconditions once and hands out cheap f(p) evaluations.
class QubitObjective {
 public:
  QubitObjective(const Channel& phi, const Tolerances& tol) : tol_(tol) {
    if (phi.dim_in != 2 || phi.dim_out != 2) {
      throw NotQubit("unital qubit objective: channel is " +
                     std::to_string(phi.dim_in) + " -> " +
                     std::to_string(phi.dim_out) + ", expected 2 -> 2");
    }
    const CptpReport rep = is_cptp(phi, tol);
    if (!rep.cptp) {
      throw NotCptp("unital qubit objective: channel is not CPTP");
    }
    if (!is_unital(phi, tol)) {
      throw NotUnital("unital qubit objective: channel is not unital");
    }
    choi_ = choi_matrix(phi);
  }

  double operator()(double p) const {
    if (!(p > kMinP && p < 1.0 - kMinP)) {
      throw POutOfRange("f_of_p: p = " + std::to_string(p) +
                        " outside (" + std::to_string(kMinP) + ", 1 - eps)");
    }
    RealVector lambda(2);
    lambda << p, 1.0 - p;
    const ComplexMatrix sigma = schmidt_output_from_choi(choi_, 2, 2, lambda);
    const RealVector w = hermitian_eigenvalues(sigma);
    return kLog2 + binary_entropy(p) - entropy_of_spectrum(w, tol_.eps_eig);
  }

 private:
  Tolerances tol_;
  ComplexMatrix choi_;
};

}  // namespace

double f_of_p(const Channel& phi, double p, const Tolerances& tol) {
  return QubitObjective(phi, tol)(p);
}

PGrid f_grid(const Channel& phi, int n_points, const Tolerances& tol) {
  if (n_points < 1) throw InvalidParameter("f_grid: n_points must be >= 1");
  const QubitObjective f(phi, tol);
  PGrid grid;
  grid.points.resize(n_points);
  grid.values.resize(n_points);
  for (int k = 1; k <= n_points; ++k) {
    const double p = static_cast<double>(k) / (n_points + 1);
    grid.points(k - 1) = p;
    grid.values(k - 1) = f(p);
  }
  return grid;
}

double verify_symmetry(const Channel& phi, const PGrid& grid,
                       const Tolerances& tol) {
  const QubitObjective f(phi, tol);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < grid.points.size(); ++i) {
    worst = std::max(worst,
                     std::abs(grid.values(i) - f(1.0 - grid.points(i))));
  }
  return worst;
}

double verify_concavity(const Channel& phi, const PGrid& grid, double h_step,
                        const Tolerances& tol) {
  if (h_step <= 0.0) throw InvalidParameter("verify_concavity: h_step must be positive");
  const QubitObjective f(phi, tol);
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < grid.points.size(); ++i) {
    const double p = grid.points(i);
    if (p - h_step <= kMinP || p + h_step >= 1.0 - kMinP) continue;
    const double second =
        (f(p - h_step) - 2.0 * grid.values(i) + f(p + h_step)) /
        (h_step * h_step);
    worst = std::max(worst, second);
  }
  if (!std::isfinite(worst)) {
    throw InvalidParameter("verify_concavity: no admissible interior grid points");
  }
  return worst;
}

MaximizeResult maximize_f(const Channel& phi, const Tolerances& tol) {
  const QubitObjective f(phi, tol);
  constexpr double kInvPhi = 0.61803398874989485;  // (sqrt 5 - 1) / 2
  double a = kMinP * 2.0, b = 1.0 - kMinP * 2.0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  MaximizeResult best;
  best.p_star = 0.5 * (a + b);
  best.value = f(best.p_star);
  // Flat objectives leave golden section wherever its bracketing drifted;
  // prefer the symmetric point whenever it is at least as good.
  const double fmid = f(0.5);
  if (fmid >= best.value - 1e-12) {
    best.p_star = 0.5;
    best.value = fmid;
  }
  return best;
}

SaturationReport verify_saturation(const Channel& phi,
                                   const OptimizerOptions& opts) {
  SaturationReport report;
  report.lhs_general = channel_entropy(phi, opts);
  report.lhs_fast = kLog2 - maximize_f(phi).value;
  report.rhs = map_entropy(phi) - kLog2;
  report.delta_general = report.lhs_general - report.rhs;
  report.delta_fast = report.lhs_fast - report.rhs;
  return report;
}

}  // namespace chanent
