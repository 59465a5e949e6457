// Copyright 2026 The entdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: build the protocol states and their correlation
// reports, certify separability across a cut, run the finite-count Monte
// Carlo noise sweep, and run single tomography reconstructions. All outputs
// are flat JSON/CSV files that embed the resolved configuration and seed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entdist/correlations.hpp"
#include "entdist/protocol.hpp"
#include "entdist/qstate.hpp"
#include "entdist/separability.hpp"
#include "entdist/tomography.hpp"

namespace {

using entdist::Bipartition;
using entdist::QuantumState;
using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 12345;
constexpr int kExitNotCertified = 2;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return j;
}

// Config-file values fill in anything not given on the command line
// (precedence: flags > config file > built-in defaults).
template <typename T>
void config_fill(const json& section, const CLI::Option* opt, const char* key, T& value) {
  if (opt->count() > 0) return;
  if (auto it = section.find(key); it != section.end()) value = it->get<T>();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
  std::cout << "wrote " << path.string() << "\n";
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

// Builtin name "beta" or a path to a matrix JSON file.
QuantumState load_target(const std::string& name) {
  if (name == "beta") return entdist::build_beta();
  std::ifstream in(name);
  if (!in) throw std::runtime_error("cannot open target matrix file: " + name);
  json j;
  in >> j;
  return entdist::state_from_json(j);
}

// ---- protocol ----------------------------------------------------------

struct ProtocolOptions {
  double cx = -0.5;
  double noise = 0.0;
  int deficit_grid = 2000;
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  std::string config;
};

int run_protocol(const ProtocolOptions& opt) {
  const auto dir = prepare_out_dir(opt.out);
  QuantumState state = entdist::cphase(
      entdist::tensor(entdist::build_alpha_ab(), entdist::build_alpha_c({opt.cx})), 0, 2);
  if (opt.noise > 0.0) state = entdist::add_white_noise(state, {opt.noise});

  entdist::DeficitOptions deficit_options;
  deficit_options.grid_points = opt.deficit_grid;

  const std::vector<Bipartition> cuts = {
      Bipartition({0}, {1, 2}), Bipartition({1}, {0, 2}), Bipartition({2}, {0, 1})};
  json cut_reports = json::array();
  for (const Bipartition& cut : cuts) {
    const entdist::CutReport report = entdist::cut_report(state, cut);
    cut_reports.push_back(entdist::to_json(report));
    std::cout << cut.to_string() << " min PT eigenvalue: " << report.min_pt_eigenvalue
              << (report.is_ppt ? " (PPT)" : " (entangled)") << "\n";
  }
  const entdist::InfoReport info = entdist::eq1_report(state);
  const entdist::DeficitResult deficit = entdist::one_way_deficit(state, 2, deficit_options);
  const entdist::GainReport gain = entdist::eq2_report(state, deficit_options);

  const json config{{"cx", opt.cx},
                    {"noise", opt.noise},
                    {"deficit_grid", opt.deficit_grid},
                    {"seed", opt.seed}};
  write_json(dir / "state.json", entdist::to_json(state));
  write_json(dir / "reports.json", json{{"config", config},
                                        {"cuts", cut_reports},
                                        {"info", entdist::to_json(info)},
                                        {"deficit", entdist::to_json(deficit)},
                                        {"gain", entdist::to_json(gain)}});
  return 0;
}

// ---- certify -----------------------------------------------------------

struct CertifyOptions {
  std::string target = "beta";
  std::string cut = "C|AB";
  double noise = 0.0;
  int dict_random = 3000;
  double tol = 1e-6;
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  std::string config;
};

int run_certify(const CertifyOptions& opt) {
  const auto dir = prepare_out_dir(opt.out);
  QuantumState target = load_target(opt.target);
  if (opt.noise > 0.0) target = entdist::add_white_noise(target, {opt.noise});
  const Bipartition cut = Bipartition::parse(opt.cut);

  const json config{{"target", opt.target}, {"cut", opt.cut},
                    {"noise", opt.noise},   {"dict_random", opt.dict_random},
                    {"tol", opt.tol},       {"seed", opt.seed}};

  // A negative partial transpose rules out any separable decomposition;
  // refuse up front with the witness eigenvalue.
  const entdist::CutReport witness = entdist::cut_report(target, cut);
  if (!witness.is_ppt) {
    std::cout << "not separable: partial transpose across " << cut.to_string()
              << " has eigenvalue " << witness.min_pt_eigenvalue << "\n";
    write_json(dir / "failure.json", json{{"type", "ppt_violation"},
                                          {"config", config},
                                          {"witness", entdist::to_json(witness)}});
    return kExitNotCertified;
  }

  int left_dim = 1, right_dim = 1;
  for (int q : cut.left()) left_dim *= target.dims()[q];
  for (int q : cut.right()) right_dim *= target.dims()[q];
  const bool carrier_cut =
      target.dims() == std::vector<int>{2, 2, 2} && cut == Bipartition({2}, {0, 1});
  entdist::Dictionary dict =
      carrier_cut ? entdist::seed_dictionary_ideal() : entdist::Dictionary(left_dim, right_dim);
  dict = entdist::extend_dictionary(std::move(dict), opt.dict_random, opt.seed);

  const entdist::CertifyResult result = entdist::certify_separable(target, cut, dict, opt.tol);
  if (const auto* failure = std::get_if<entdist::CertifyFailure>(&result)) {
    std::cout << "not certified: " << failure->message << "\n";
    json j = entdist::to_json(*failure);
    j["config"] = config;
    write_json(dir / "failure.json", j);
    return kExitNotCertified;
  }

  const auto& certificate = std::get<entdist::Certificate>(result);
  std::vector<std::string> reasons;
  if (!entdist::verify_certificate(certificate, target, &reasons)) {
    std::cerr << "internal error: certificate failed verification:\n";
    for (const std::string& r : reasons) std::cerr << "  " << r << "\n";
    return 1;
  }
  std::cout << "certified separable across " << cut.to_string() << " with "
            << certificate.entries.size() << " product terms (max-norm residual "
            << certificate.residual_max << ")\n";
  json j = entdist::to_json(certificate);
  j["config"] = config;
  write_json(dir / "certificate.json", j);
  return 0;
}

// ---- sweep -------------------------------------------------------------

struct SweepOptions {
  int pvalues = 50;
  double pmin = 0.0;
  double pmax = 1.0 / 3.0;
  int samples = 500;
  double intensity = 30000.0 / 27.0;
  int threads = 1;
  int mle_max_iterations = 5000;
  double mle_tol = 1e-10;
  double mle_min_dilution = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  std::string config;
};

int run_sweep(const SweepOptions& opt) {
  const auto dir = prepare_out_dir(opt.out);
  entdist::SweepConfig cfg;
  cfg.p_values = entdist::default_p_grid(opt.pvalues, opt.pmin, opt.pmax);
  cfg.samples_per_p = opt.samples;
  cfg.intensity = opt.intensity;
  cfg.mle.max_iterations = opt.mle_max_iterations;
  cfg.mle.convergence_tol = opt.mle_tol;
  cfg.mle.min_dilution = opt.mle_min_dilution;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;

  const entdist::SweepResult result = entdist::monte_carlo_sweep(entdist::build_beta(), cfg);

  std::ostringstream csv;
  result.write_csv(csv);
  write_text(dir / "sweep.csv", csv.str());
  std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";
  write_json(dir / "sweep.json", result.to_json());
  return 0;
}

// ---- tomo --------------------------------------------------------------

struct TomoOptions {
  std::string target = "beta";
  double noise = 0.0;
  double intensity = 30000.0 / 27.0;
  int mle_max_iterations = 5000;
  double mle_tol = 1e-10;
  double mle_min_dilution = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  std::string out = ".";
  std::string config;
};

int run_tomo(const TomoOptions& opt) {
  const auto dir = prepare_out_dir(opt.out);
  const QuantumState base = load_target(opt.target);
  const QuantumState target =
      opt.noise > 0.0 ? entdist::add_white_noise(base, {opt.noise}) : base;

  const entdist::CountsTable counts = entdist::simulate_counts(target, opt.intensity, opt.seed);
  entdist::MLEConfig mle_cfg;
  mle_cfg.max_iterations = opt.mle_max_iterations;
  mle_cfg.convergence_tol = opt.mle_tol;
  mle_cfg.min_dilution = opt.mle_min_dilution;
  const QuantumState recon = entdist::mle_reconstruct(counts, mle_cfg);

  const json config{{"target", opt.target},
                    {"noise", opt.noise},
                    {"intensity", opt.intensity},
                    {"mle_max_iterations", opt.mle_max_iterations},
                    {"mle_tol", opt.mle_tol},
                    {"mle_min_dilution", opt.mle_min_dilution},
                    {"seed", opt.seed}};

  std::ostringstream csv;
  counts.write_csv(csv);
  write_text(dir / "counts.csv", csv.str());
  std::cout << "wrote " << (dir / "counts.csv").string() << "\n";

  json cut_reports = json::array();
  for (const Bipartition& cut :
       {Bipartition({0}, {1, 2}), Bipartition({1}, {0, 2}), Bipartition({2}, {0, 1})})
    cut_reports.push_back(entdist::to_json(entdist::cut_report(recon, cut)));

  const double fid_target = entdist::fidelity(recon, target);
  std::cout << "reconstruction fidelity to simulated state: " << fid_target << "\n";
  write_json(dir / "reconstruction.json", entdist::to_json(recon));
  write_json(dir / "report.json",
             json{{"config", config},
                  {"counts", counts.to_json()},
                  {"fidelity_to_target", fid_target},
                  {"fidelity_to_base", entdist::fidelity(recon, base)},
                  {"log_likelihood", entdist::log_likelihood(counts, recon.matrix())},
                  {"cuts", cut_reports}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entdist: entanglement distribution with separable carriers - "
               "state construction, correlation reports, separability "
               "certificates and finite-count tomography simulation"};
  app.require_subcommand(1);

  ProtocolOptions protocol_opt;
  CLI::App* protocol = app.add_subcommand(
      "protocol", "Build the carrier-exchange output state and write its correlation reports");
  auto* p_cx = protocol->add_option("--cx", protocol_opt.cx,
                                    "Carrier x-coherence in [-1, 1] (default -0.5)");
  auto* p_noise =
      protocol->add_option("--noise", protocol_opt.noise, "White-noise fraction in [0, 1]");
  auto* p_grid = protocol->add_option("--deficit-grid", protocol_opt.deficit_grid,
                                      "Coarse grid size for the deficit search");
  auto* p_seed = protocol->add_option("--seed", protocol_opt.seed, "RNG seed echoed in outputs");
  auto* p_out = protocol->add_option("--out", protocol_opt.out, "Output directory");
  protocol->add_option("--config", protocol_opt.config, "JSON config file");

  CertifyOptions certify_opt;
  CLI::App* certify = app.add_subcommand(
      "certify", "Find and verify an explicit product-state decomposition across a cut");
  auto* c_target = certify->add_option("--target", certify_opt.target,
                                       "Builtin state name ('beta') or matrix JSON path");
  auto* c_cut = certify->add_option("--cut", certify_opt.cut, "Cut, e.g. 'C|AB' or '2|01'");
  auto* c_noise =
      certify->add_option("--noise", certify_opt.noise, "White-noise fraction in [0, 1]");
  auto* c_rand = certify->add_option("--dict-random", certify_opt.dict_random,
                                     "Number of random product states in the dictionary");
  auto* c_tol = certify->add_option("--tol", certify_opt.tol, "Max-norm residual tolerance");
  auto* c_seed = certify->add_option("--seed", certify_opt.seed, "Dictionary RNG seed");
  auto* c_out = certify->add_option("--out", certify_opt.out, "Output directory");
  certify->add_option("--config", certify_opt.config, "JSON config file");

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo noise sweep: simulate counts, reconstruct, aggregate per-cut stats");
  auto* s_pvalues = sweep->add_option("--pvalues", sweep_opt.pvalues, "Number of noise values");
  auto* s_pmin = sweep->add_option("--pmin", sweep_opt.pmin, "Smallest noise fraction");
  auto* s_pmax = sweep->add_option("--pmax", sweep_opt.pmax, "Largest noise fraction");
  auto* s_samples = sweep->add_option("--samples", sweep_opt.samples, "Samples per noise value");
  auto* s_intensity =
      sweep->add_option("--intensity", sweep_opt.intensity, "Expected counts per setting");
  auto* s_threads = sweep->add_option("--threads", sweep_opt.threads,
                                      "Worker threads (never changes the results)");
  auto* s_mle_iters =
      sweep->add_option("--mle-max-iterations", sweep_opt.mle_max_iterations, "MLE iteration cap");
  auto* s_mle_tol = sweep->add_option("--mle-tol", sweep_opt.mle_tol,
                                      "MLE relative log-likelihood convergence tolerance");
  auto* s_mle_dilution =
      sweep->add_option("--mle-min-dilution", sweep_opt.mle_min_dilution, "Smallest MLE step");
  auto* s_seed = sweep->add_option("--seed", sweep_opt.seed, "Master RNG seed");
  auto* s_out = sweep->add_option("--out", sweep_opt.out, "Output directory");
  sweep->add_option("--config", sweep_opt.config, "JSON config file");

  TomoOptions tomo_opt;
  CLI::App* tomo = app.add_subcommand(
      "tomo", "Single finite-count tomography run: simulate counts and reconstruct");
  auto* t_target = tomo->add_option("--target", tomo_opt.target,
                                    "Builtin state name ('beta') or matrix JSON path");
  auto* t_noise = tomo->add_option("--noise", tomo_opt.noise, "White-noise fraction in [0, 1]");
  auto* t_intensity =
      tomo->add_option("--intensity", tomo_opt.intensity, "Expected counts per setting");
  auto* t_mle_iters =
      tomo->add_option("--mle-max-iterations", tomo_opt.mle_max_iterations, "MLE iteration cap");
  auto* t_mle_tol = tomo->add_option("--mle-tol", tomo_opt.mle_tol,
                                     "MLE relative log-likelihood convergence tolerance");
  auto* t_mle_dilution =
      tomo->add_option("--mle-min-dilution", tomo_opt.mle_min_dilution, "Smallest MLE step");
  auto* t_seed = tomo->add_option("--seed", tomo_opt.seed, "RNG seed for the simulated counts");
  auto* t_out = tomo->add_option("--out", tomo_opt.out, "Output directory");
  tomo->add_option("--config", tomo_opt.config, "JSON config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (protocol->parsed()) {
      const json cfg = load_config(protocol_opt.config);
      const json section = cfg.value("protocol", json::object());
      config_fill(section, p_cx, "cx", protocol_opt.cx);
      config_fill(section, p_noise, "noise", protocol_opt.noise);
      config_fill(section, p_grid, "deficit_grid", protocol_opt.deficit_grid);
      config_fill(cfg, p_seed, "seed", protocol_opt.seed);
      config_fill(section, p_out, "out", protocol_opt.out);
      return run_protocol(protocol_opt);
    }
    if (certify->parsed()) {
      const json cfg = load_config(certify_opt.config);
      const json section = cfg.value("certify", json::object());
      config_fill(section, c_target, "target", certify_opt.target);
      config_fill(section, c_cut, "cut", certify_opt.cut);
      config_fill(section, c_noise, "noise", certify_opt.noise);
      config_fill(section, c_rand, "dict_random", certify_opt.dict_random);
      config_fill(section, c_tol, "tol", certify_opt.tol);
      config_fill(cfg, c_seed, "seed", certify_opt.seed);
      config_fill(section, c_out, "out", certify_opt.out);
      return run_certify(certify_opt);
    }
    if (sweep->parsed()) {
      const json cfg = load_config(sweep_opt.config);
      const json section = cfg.value("sweep", json::object());
      config_fill(section, s_pvalues, "pvalues", sweep_opt.pvalues);
      config_fill(section, s_pmin, "pmin", sweep_opt.pmin);
      config_fill(section, s_pmax, "pmax", sweep_opt.pmax);
      config_fill(section, s_samples, "samples", sweep_opt.samples);
      config_fill(section, s_intensity, "intensity", sweep_opt.intensity);
      config_fill(section, s_threads, "threads", sweep_opt.threads);
      config_fill(section, s_mle_iters, "mle_max_iterations", sweep_opt.mle_max_iterations);
      config_fill(section, s_mle_tol, "mle_tol", sweep_opt.mle_tol);
      config_fill(section, s_mle_dilution, "mle_min_dilution", sweep_opt.mle_min_dilution);
      config_fill(cfg, s_seed, "seed", sweep_opt.seed);
      config_fill(section, s_out, "out", sweep_opt.out);
      return run_sweep(sweep_opt);
    }
    if (tomo->parsed()) {
      const json cfg = load_config(tomo_opt.config);
      const json section = cfg.value("tomo", json::object());
      config_fill(section, t_target, "target", tomo_opt.target);
      config_fill(section, t_noise, "noise", tomo_opt.noise);
      config_fill(section, t_intensity, "intensity", tomo_opt.intensity);
      config_fill(section, t_mle_iters, "mle_max_iterations", tomo_opt.mle_max_iterations);
      config_fill(section, t_mle_tol, "mle_tol", tomo_opt.mle_tol);
      config_fill(section, t_mle_dilution, "mle_min_dilution", tomo_opt.mle_min_dilution);
      config_fill(cfg, t_seed, "seed", tomo_opt.seed);
      config_fill(section, t_out, "out", tomo_opt.out);
      return run_tomo(tomo_opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
