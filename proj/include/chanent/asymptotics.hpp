#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chanent/channel.hpp"
#include "chanent/entropy.hpp"

namespace chanent {

// Large-dimension experiments on random channels: the finite-d spectral
// identity behind the limiting output spectrum, the reference cross-entropy
// identity, free-convolution moment checks, and the entropy-vs-dimension
// curves against the asymptotic reference log d - 1/2.

// Spectrum of sigma = (Phi (x) 1)(psi_lambda) plus the cross-check that it
// coincides with the spectrum of the (non-Hermitian) product D_Phi (1 (x) Lambda).
struct SpectrumSample {
  int d = 0;
  RealVector eigenvalues;    // of sigma, ascending, unit sum
  RealVector rescaled;       // eigenvalues * d^2, mean 1
  double identity_dev = 0.0; // max deviation between the two sorted spectra
};

SpectrumSample output_spectrum(const Channel& phi, const SchmidtSpectrum& lambda);

// Tr sigma log gamma for the factorized reference gamma = I/d (x) diag(lambda).
// Equal to -H(lambda) - log d for every channel (because tr_out D = I);
// asserted within 1e-8 before returning.
double tr_sigma_log_gamma(const Channel& phi, const SchmidtSpectrum& lambda);

struct MomentReport {
  int d = 0;
  int k = 0;
  int trials = 0;
  double m1_emp = 0.0;  // mean of d^2 eig(sigma)
  double m1_pred = 0.0; // free prediction a1 b1 (= 1 after mean-1 rescaling)
  double z1 = 0.0;
  double m2_emp = 0.0;
  double m2_pred = 0.0; // a2 b1^2 + a1^2 b2 - a1^2 b1^2
  double z2 = 0.0;
};

// First and second moments of the rescaled output spectrum against the free
// multiplicative convolution prediction, as z-scores over independent trials.
MomentReport free_moment_check(int d, int k, SchmidtKind kind, int trials,
                               std::uint64_t seed);

struct CurvePoint {
  int d = 0;
  SchmidtKind nu_kind = SchmidtKind::Uniform;
  double mean_D = 0.0;    // mean of D(sigma||gamma) = log d + H(lambda) - H(sigma)
  double stderr_D = 0.0;
  int trials = 0;
};

// The sampled (channel, input-spectrum) pair behind trial `trial` of the
// curve experiment; exposed so any curve point can be recomputed externally.
std::pair<Channel, SchmidtSpectrum> fig1_trial(int d, SchmidtKind kind,
                                               int trial, std::uint64_t seed);

// Entropy-vs-dimension curves: for each (d, nu) average the fixed-input
// relative entropy over random channels with k = d^2.  log d - mean_D
// estimates the channel entropy; the asymptotic reference is log d - 1/2.
std::vector<CurvePoint> fig1_experiment(const std::vector<int>& d_list,
                                        const std::vector<SchmidtKind>& nu_kinds,
                                        int trials, std::uint64_t seed);

struct ConjectureRow {
  int d = 0;
  int k = 0;
  int trials = 0;
  double mean_h_map = 0.0;          // mean H_map
  double h_map_dev = 0.0;           // mean H_map - (2 log d - 1/2)
  double stderr_h_map = 0.0;
  double mean_D_lower_bound = 0.0;  // objective at the maximally entangled
                                    // input: a lower bound on sup D(Phi||R)
  double D_dev = 0.0;               // mean_D_lower_bound - 1/2
  double stderr_D = 0.0;
};

// Sweep of H_map and the entangled-input lower bound on D(Phi||R) over random
// channels with k = d^2; both deviations should shrink as d grows.
std::vector<ConjectureRow> conjecture_sweep(const std::vector<int>& d_list,
                                            int trials, std::uint64_t seed);

}  // namespace chanent
