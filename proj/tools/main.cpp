// chanent: quantum channel entropy toolkit.
//
// Computes the map entropy (entropy of the Choi state) and the optimized
// channel entropy (log d minus the relative entropy to the completely
// depolarizing channel), verifies their relation on unital qubit channels,
// and runs the random-channel asymptotics experiments.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chanent/asymptotics.hpp"
#include "chanent/channel_json.hpp"
#include "chanent/entropy.hpp"
#include "chanent/errors.hpp"
#include "chanent/qubit_unital.hpp"
#include "chanent/rng.hpp"
#include "chanent/version.hpp"

namespace {

using nlohmann::json;

// Substream tag for the spectrum subcommand's per-trial draws.
constexpr std::uint64_t kCliSpectrum = 0x73706563;

struct Options {
  std::string channel_arg;
  std::string named;
  std::string params = "{}";
  std::uint64_t seed = chanent::kDefaultSeed;
  int trials = 0;  // per-command defaults applied below
  int d = 0;
  int k = 0;
  std::string d_list;
  std::string nu;
  int restarts = 8;
  std::string log_base = "e";
  std::string tol_spec;
  std::string out;
};

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Presentation-only conversion; everything internal is in nats.
double to_base(double nats, const std::string& base) {
  return base == "2" ? nats / 0.69314718055994531 : nats;
}

chanent::Tolerances parse_tolerances(const std::string& spec) {
  chanent::Tolerances tol;
  if (spec.empty()) return tol;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw chanent::InvalidParameter("--tol: expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw chanent::InvalidParameter("--tol: bad value in '" + item + "'");
    }
    if (key == "herm") tol.herm = value;
    else if (key == "psd") tol.psd = value;
    else if (key == "recon") tol.recon = value;
    else if (key == "cptp") tol.cptp = value;
    else if (key == "supp") tol.supp = value;
    else if (key == "eps_eig") tol.eps_eig = value;
    else throw chanent::InvalidParameter("--tol: unknown key '" + key + "'");
  }
  return tol;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw chanent::InvalidParameter(std::string(flag) + ": bad integer '" + item + "'");
    }
  }
  if (out.empty()) {
    throw chanent::InvalidParameter(std::string(flag) + ": empty list");
  }
  return out;
}

std::vector<chanent::SchmidtKind> parse_nu_list(const std::string& text) {
  if (text == "all") {
    return {chanent::SchmidtKind::Uniform, chanent::SchmidtKind::DirichletConc,
            chanent::SchmidtKind::DirichletFlat, chanent::SchmidtKind::DirichletTwo};
  }
  std::vector<chanent::SchmidtKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(chanent::schmidt_kind_from_name(item));
  }
  if (out.empty()) throw chanent::InvalidParameter("--nu: empty list");
  return out;
}

chanent::Channel load_channel(const Options& opt) {
  if (!opt.channel_arg.empty() && !opt.named.empty()) {
    throw chanent::InvalidParameter("give either --channel or --named, not both");
  }
  if (!opt.channel_arg.empty()) {
    std::string text = opt.channel_arg;
    if (text.find('{') == std::string::npos) {  // treat as a file path
      std::ifstream in(text);
      if (!in) throw chanent::ParseError("cannot read channel file '" + text + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw chanent::ParseError(e.what());  // message carries the byte position
    }
    return chanent::channel_from_json(j);
  }
  if (!opt.named.empty()) {
    json params;
    try {
      params = json::parse(opt.params);
    } catch (const json::parse_error& e) {
      throw chanent::ParseError(e.what());
    }
    return chanent::named_channel(opt.named, params, opt.seed);
  }
  throw chanent::InvalidParameter("no channel given; use --channel or --named");
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out);
  if (!out) throw chanent::InvalidParameter("cannot open output file '" + opt.out + "'");
  out << text;
}

void append_metadata(std::string& csv, const Options& opt,
                     const chanent::Tolerances& tol, const char* extra = nullptr) {
  csv += "# chanent " + std::string(chanent::kVersion) + "\n";
  csv += "# seed=" + std::to_string(opt.seed) + " log_base=" + opt.log_base + "\n";
  csv += "# tolerances: herm=" + fmt17(tol.herm) + " psd=" + fmt17(tol.psd) +
         " recon=" + fmt17(tol.recon) + " cptp=" + fmt17(tol.cptp) +
         " supp=" + fmt17(tol.supp) + " eps_eig=" + fmt17(tol.eps_eig) + "\n";
  if (extra != nullptr) csv += std::string("# ") + extra + "\n";
}

json tolerances_json(const chanent::Tolerances& tol) {
  return {{"herm", tol.herm}, {"psd", tol.psd},   {"recon", tol.recon},
          {"cptp", tol.cptp}, {"supp", tol.supp}, {"eps_eig", tol.eps_eig}};
}

json lambda_json(const chanent::RealVector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

int cmd_entropy(const Options& opt) {
  const chanent::Channel phi = load_channel(opt);
  chanent::OptimizerOptions oopts;
  oopts.restarts = opt.restarts;
  oopts.seed = opt.seed;
  oopts.tol = parse_tolerances(opt.tol_spec);
  const chanent::EntropyReport rep = chanent::entropy_gap(phi, oopts);

  json out;
  out["command"] = "entropy";
  out["version"] = chanent::kVersion;
  out["seed"] = opt.seed;
  out["log_base"] = opt.log_base;
  out["dim_in"] = phi.dim_in;
  out["dim_out"] = phi.dim_out;
  out["tolerances"] = tolerances_json(oopts.tol);
  out["h_map"] = to_base(rep.h_map, opt.log_base);
  out["h_channel"] = to_base(rep.h_channel, opt.log_base);
  out["gap"] = to_base(rep.gap, opt.log_base);
  out["optimizer"] = {
      {"value", to_base(rep.optimizer.value, opt.log_base)},
      {"argmax_lambda", lambda_json(rep.optimizer.argmax_lambda)},
      {"argmax_unitary", chanent::matrix_to_json(rep.optimizer.argmax_unitary)},
      {"evaluations", rep.optimizer.evaluations},
      {"restarts", rep.optimizer.restarts},
      {"best_restart", rep.optimizer.best_restart},
      {"converged", rep.optimizer.converged},
  };
  write_output(opt, out.dump(2) + "\n");
  return 0;
}

int cmd_verify_unital(const Options& opt) {
  const chanent::Channel phi = load_channel(opt);
  const chanent::Tolerances tol = parse_tolerances(opt.tol_spec);
  chanent::OptimizerOptions oopts;
  oopts.restarts = opt.restarts;
  oopts.seed = opt.seed;
  oopts.tol = tol;

  const chanent::PGrid grid = chanent::f_grid(phi, 99, tol);
  const double asym = chanent::verify_symmetry(phi, grid, tol);
  const double conc = chanent::verify_concavity(phi, grid, 1e-2, tol);
  const chanent::MaximizeResult mx = chanent::maximize_f(phi, tol);
  const chanent::SaturationReport sat = chanent::verify_saturation(phi, oopts);

  const bool sym_pass = asym <= 1e-9;
  const bool conc_pass = conc <= 1e-6;
  const bool max_pass = std::abs(mx.p_star - 0.5) <= 1e-6;
  const bool sat_pass =
      std::abs(sat.delta_general) <= 1e-4 && std::abs(sat.delta_fast) <= 1e-8;
  const bool all_pass = sym_pass && conc_pass && max_pass && sat_pass;

  json out;
  out["command"] = "verify-unital";
  out["version"] = chanent::kVersion;
  out["seed"] = opt.seed;
  out["log_base"] = opt.log_base;
  out["tolerances"] = tolerances_json(tol);
  out["checks"] = {
      {"symmetry", {{"max_asymmetry", asym}, {"pass", sym_pass}}},
      {"concavity", {{"max_second_difference", conc}, {"pass", conc_pass}}},
      {"maximum",
       {{"p_star", mx.p_star},
        {"value", to_base(mx.value, opt.log_base)},
        {"pass", max_pass}}},
      {"saturation",
       {{"lhs_general", to_base(sat.lhs_general, opt.log_base)},
        {"lhs_fast", to_base(sat.lhs_fast, opt.log_base)},
        {"rhs", to_base(sat.rhs, opt.log_base)},
        {"delta_general", to_base(sat.delta_general, opt.log_base)},
        {"delta_fast", to_base(sat.delta_fast, opt.log_base)},
        {"pass", sat_pass}}},
  };
  out["all_pass"] = all_pass;
  write_output(opt, out.dump(2) + "\n");
  return all_pass ? 0 : 1;
}

int cmd_fig1(const Options& opt) {
  const chanent::Tolerances tol = parse_tolerances(opt.tol_spec);
  const std::vector<int> ds =
      parse_int_list(opt.d_list.empty() ? "4,8,16" : opt.d_list, "--d-list");
  const auto kinds = parse_nu_list(opt.nu.empty() ? "all" : opt.nu);
  const int trials = opt.trials > 0 ? opt.trials : 20;
  const auto points = chanent::fig1_experiment(ds, kinds, trials, opt.seed);

  std::string csv;
  append_metadata(csv, opt, tol,
                  "columns: entropy_estimate = log(d) - mean_D; "
                  "entropy_reference = log(d) - 1/2");
  csv += "experiment,d,nu_kind,row,trials,mean_D,stderr_D,entropy_estimate,"
         "entropy_reference,seed\n";
  for (const auto& p : points) {
    const double logd = std::log(static_cast<double>(p.d));
    csv += "fig1," + std::to_string(p.d) + "," +
           chanent::schmidt_kind_name(p.nu_kind) + ",aggregate," +
           std::to_string(p.trials) + "," +
           fmt17(to_base(p.mean_D, opt.log_base)) + "," +
           fmt17(to_base(p.stderr_D, opt.log_base)) + "," +
           fmt17(to_base(logd - p.mean_D, opt.log_base)) + "," +
           fmt17(to_base(logd - 0.5, opt.log_base)) + "," +
           std::to_string(opt.seed) + "\n";
  }
  write_output(opt, csv);
  return 0;
}

int cmd_conjecture(const Options& opt) {
  const chanent::Tolerances tol = parse_tolerances(opt.tol_spec);
  const std::vector<int> ds =
      parse_int_list(opt.d_list.empty() ? "2,4,8,16,32" : opt.d_list, "--d-list");
  const int trials = opt.trials > 0 ? opt.trials : 20;
  const auto rows = chanent::conjecture_sweep(ds, trials, opt.seed);

  std::string csv;
  append_metadata(csv, opt, tol,
                  "mean_D_lower_bound is the objective at the maximally "
                  "entangled input, a lower bound on sup D(Phi||R); "
                  "h_map_dev is vs 2 log d - 1/2, D_dev is vs 1/2");
  csv += "experiment,d,nu_kind,row,k,trials,mean_h_map,h_map_dev,stderr_h_map,"
         "mean_D_lower_bound,D_dev,stderr_D,seed\n";
  for (const auto& r : rows) {
    csv += "conjecture," + std::to_string(r.d) + ",max_entangled,aggregate," +
           std::to_string(r.k) + "," + std::to_string(r.trials) + "," +
           fmt17(to_base(r.mean_h_map, opt.log_base)) + "," +
           fmt17(to_base(r.h_map_dev, opt.log_base)) + "," +
           fmt17(to_base(r.stderr_h_map, opt.log_base)) + "," +
           fmt17(to_base(r.mean_D_lower_bound, opt.log_base)) + "," +
           fmt17(to_base(r.D_dev, opt.log_base)) + "," +
           fmt17(to_base(r.stderr_D, opt.log_base)) + "," +
           std::to_string(opt.seed) + "\n";
  }
  write_output(opt, csv);
  return 0;
}

int cmd_spectrum(const Options& opt) {
  const chanent::Tolerances tol = parse_tolerances(opt.tol_spec);
  const int d = opt.d > 0 ? opt.d : 8;
  const int k = opt.k > 0 ? opt.k : d * d;
  const int trials = opt.trials > 0 ? opt.trials : 1;
  const chanent::SchmidtKind kind =
      chanent::schmidt_kind_from_name(opt.nu.empty() ? "uniform" : opt.nu);

  std::string body;
  double worst_dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const chanent::Channel phi = chanent::random_channel(
        d, k, chanent::derive_seed(opt.seed, kCliSpectrum, t, 0));
    const chanent::SchmidtSpectrum lambda = chanent::sample_schmidt(
        d, kind, chanent::derive_seed(opt.seed, kCliSpectrum, t, 1));
    const chanent::SpectrumSample sample = chanent::output_spectrum(phi, lambda);
    worst_dev = std::max(worst_dev, sample.identity_dev);
    for (Eigen::Index i = 0; i < sample.eigenvalues.size(); ++i) {
      body += "spectrum," + std::to_string(d) + "," +
              chanent::schmidt_kind_name(kind) + "," + std::to_string(t) + "," +
              std::to_string(i) + "," + fmt17(sample.eigenvalues(i)) + "," +
              fmt17(sample.rescaled(i)) + "," + std::to_string(opt.seed) + "\n";
    }
  }
  std::string csv;
  append_metadata(csv, opt, tol,
                  ("identity_dev_max=" + fmt17(worst_dev) +
                   " (sorted eig(sigma) vs sorted eig(D (1 (x) Lambda)))")
                      .c_str());
  csv += "experiment,d,nu_kind,row,index,eigenvalue,rescaled,seed\n";
  csv += body;
  write_output(opt, csv);
  return 0;
}

int cmd_free_moments(const Options& opt) {
  const chanent::Tolerances tol = parse_tolerances(opt.tol_spec);
  const int d = opt.d > 0 ? opt.d : 16;
  const int k = opt.k > 0 ? opt.k : d * d;
  const int trials = opt.trials > 0 ? opt.trials : 50;
  const chanent::SchmidtKind kind =
      chanent::schmidt_kind_from_name(opt.nu.empty() ? "dir_d_1" : opt.nu);
  const chanent::MomentReport rep =
      chanent::free_moment_check(d, k, kind, trials, opt.seed);

  std::string csv;
  append_metadata(csv, opt, tol, "rescaling=mean_one (spectra are dimensionless)");
  csv += "experiment,d,nu_kind,row,k,trials,m1_emp,m1_pred,z1,m2_emp,m2_pred,"
         "z2,seed\n";
  csv += "free_moments," + std::to_string(rep.d) + "," +
         chanent::schmidt_kind_name(kind) + ",aggregate," +
         std::to_string(rep.k) + "," + std::to_string(rep.trials) + "," +
         fmt17(rep.m1_emp) + "," + fmt17(rep.m1_pred) + "," + fmt17(rep.z1) +
         "," + fmt17(rep.m2_emp) + "," + fmt17(rep.m2_pred) + "," +
         fmt17(rep.z2) + "," + std::to_string(opt.seed) + "\n";
  write_output(opt, csv);
  return 0;
}

int cmd_random_channel(const Options& opt) {
  if (opt.d <= 0) throw chanent::InvalidParameter("random-channel: --d is required");
  const int k = opt.k > 0 ? opt.k : opt.d * opt.d;
  const chanent::Channel phi = chanent::random_channel(opt.d, k, opt.seed);
  json out = chanent::channel_to_json(phi);
  out["meta"] = {{"version", chanent::kVersion},
                 {"seed", opt.seed},
                 {"d", opt.d},
                 {"k", k}};
  write_output(opt, out.dump(2) + "\n");
  return 0;
}

int guarded(int (*handler)(const Options&), const Options& opt) {
  try {
    return handler(opt);
  } catch (const chanent::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const chanent::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const chanent::InsufficientTrials& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const chanent::NotCptp& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const chanent::NotPsd& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const chanent::NotTracePreserving& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const chanent::NotHermitian& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const chanent::NotUnitary& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const chanent::NotUnital& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const chanent::NotQubit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const chanent::POutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const chanent::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const chanent::SingularState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const chanent::ConvergenceFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const chanent::SingularMarginal& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const chanent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

void add_channel_options(CLI::App* sub, Options& opt) {
  sub->add_option("--channel", opt.channel_arg,
                  "channel as inline JSON or a path to a JSON file");
  sub->add_option("--named", opt.named,
                  "named channel: identity|unitary|depolarizing|"
                  "partial_depolarizing|pauli_mixture|amplitude_damping|"
                  "random|random_unitary_mixture");
  sub->add_option("--params", opt.params, "JSON parameters for --named");
}

void add_common_options(CLI::App* sub, Options& opt) {
  sub->add_option("--seed", opt.seed, "root seed (default 0xC0FFEE)");
  sub->add_option("--log-base", opt.log_base, "e (nats, default) or 2 (bits)")
      ->check(CLI::IsMember({"e", "2"}));
  sub->add_option("--tol", opt.tol_spec,
                  "tolerance overrides, e.g. cptp=1e-9,eps_eig=1e-14");
  sub->add_option("--out", opt.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum channel entropies: map entropy vs optimized channel entropy"};
  app.require_subcommand(1);

  Options opt;
  int (*handler)(const Options&) = nullptr;

  CLI::App* entropy = app.add_subcommand(
      "entropy", "map entropy, channel entropy and their gap for one channel");
  add_channel_options(entropy, opt);
  add_common_options(entropy, opt);
  entropy->add_option("--restarts", opt.restarts, "optimizer restarts (default 8)");
  entropy->callback([&] { handler = cmd_entropy; });

  CLI::App* verify = app.add_subcommand(
      "verify-unital", "symmetry/concavity/maximum/saturation checks for a unital qubit channel");
  add_channel_options(verify, opt);
  add_common_options(verify, opt);
  verify->add_option("--restarts", opt.restarts, "optimizer restarts (default 8)");
  verify->callback([&] { handler = cmd_verify_unital; });

  CLI::App* fig1 = app.add_subcommand(
      "fig1", "curves of mean D(sigma||gamma) over random channels vs dimension");
  add_common_options(fig1, opt);
  fig1->add_option("--d-list", opt.d_list, "dimensions (default 4,8,16)");
  fig1->add_option("--nu", opt.nu, "input spectra: all or a list of dir_d_1,dir_2_1,dir_d_2,uniform");
  fig1->add_option("--trials", opt.trials, "trials per point (default 20)");
  fig1->callback([&] { handler = cmd_fig1; });

  CLI::App* conjecture = app.add_subcommand(
      "conjecture", "H_map and the entangled-input bound vs the log d - 1/2 asymptote");
  add_common_options(conjecture, opt);
  conjecture->add_option("--d-list", opt.d_list, "dimensions (default 2,4,8,16,32)");
  conjecture->add_option("--trials", opt.trials, "trials per dimension (default 20)");
  conjecture->callback([&] { handler = cmd_conjecture; });

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "output spectrum of a random channel at a sampled Schmidt input");
  add_common_options(spectrum, opt);
  spectrum->add_option("--d", opt.d, "dimension (default 8)");
  spectrum->add_option("--k", opt.k, "Wishart parameter (default d^2)");
  spectrum->add_option("--nu", opt.nu, "input spectrum kind (default uniform)");
  spectrum->add_option("--trials", opt.trials, "number of draws (default 1)");
  spectrum->callback([&] { handler = cmd_spectrum; });

  CLI::App* moments = app.add_subcommand(
      "free-moments", "output-spectrum moments vs the free convolution prediction");
  add_common_options(moments, opt);
  moments->add_option("--d", opt.d, "dimension (default 16)");
  moments->add_option("--k", opt.k, "Wishart parameter (default d^2)");
  moments->add_option("--nu", opt.nu, "input spectrum kind (default dir_d_1)");
  moments->add_option("--trials", opt.trials, "trials (default 50)");
  moments->callback([&] { handler = cmd_free_moments; });

  CLI::App* random = app.add_subcommand(
      "random-channel", "sample a random channel and emit it as channel JSON");
  add_common_options(random, opt);
  random->add_option("--d", opt.d, "dimension (required)");
  random->add_option("--k", opt.k, "Wishart parameter (default d^2)");
  random->callback([&] { handler = cmd_random_channel; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return guarded(handler, opt);
}
