// Copyright 2026 The sparsedict Authors.
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

#include "sparsedict/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsedict/bsum.hpp"
#include "sparsedict/denoise.hpp"
#include "sparsedict/hardness.hpp"
#include "sparsedict/io.hpp"
#include "sparsedict/rng.hpp"
#include "sparsedict/sca.hpp"

namespace sparsedict::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json finite_or_null(const std::optional<double>& v) {
  return v ? finite_or_null(*v) : json(nullptr);
}

json array_of(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(finite_or_null(x));
  return out;
}

fs::path output_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw Error("cannot create output directory " + dir);
  return p;
}

void write_json(const fs::path& path, const json& j) { io::write_file(path, j.dump(2) + "\n"); }

int exit_for(StopReason r) { return r == StopReason::Converged ? kOk : kMaxIters; }

json trace_json(const SolverTrace& t) {
  return json{{"iterations", t.iterations},
              {"stop_reason", to_string(t.stop_reason)},
              {"objective_trace", array_of(t.objective_history)},
              {"tau_x", array_of(t.tau_x_history)},
              {"tau_a", array_of(t.tau_a_history)}};
}

// Runs fn(0..n-1) on up to thread_budget() workers. Results keep index
// order; the first failure by index is rethrown.
template <class Fn>
auto parallel_map(int n, Fn fn) -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<std::optional<R>> slots(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        slots[static_cast<std::size_t>(i)].emplace(fn(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(thread_budget(), n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---- learn ---------------------------------------------------------------

struct LearnOptions {
  int case_id = 0;
  std::optional<double> beta;
  std::vector<double> betas;
  std::optional<double> theta;
  double lambda = 0.1;
  int k = 0;
  std::string input;
  std::string out = ".";
  std::uint64_t seed = 0;
  int max_iters = 20000;
  double tol = 1e-8;
};

ConstraintRegime learn_regime(const LearnOptions& o, int k) {
  auto need = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw InvalidArgument("--case " + std::to_string(o.case_id) + " needs " + flag);
    return *v;
  };
  switch (o.case_id) {
    case 1: return TotalNorm{need(o.beta, "--beta")};
    case 2:
      if (!o.betas.empty()) return PerAtomNorm{o.betas};
      return PerAtomNorm{std::vector<double>(static_cast<std::size_t>(k), need(o.beta, "--betas or --beta"))};
    case 3: return NonnegTotalNorm{need(o.beta, "--beta")};
    default: return NonnegL1Atom{need(o.theta, "--theta")};
  }
}

int cmd_learn(const LearnOptions& o, std::ostream& out) {
  TrainingMatrix Y(io::read_csv(o.input));
  const int k = o.k > 0 ? o.k : static_cast<int>(Y.dim());
  const auto regime = learn_regime(o, k);
  bsum::BsumProblem p{Y, k, o.lambda, regime};
  p.config.seed = o.seed;
  p.config.max_iters = o.max_iters;
  p.config.rel_obj_tol = o.tol;
  const auto res = bsum::solve(p);

  const auto dir = output_dir(o.out);
  io::write_csv(dir / "A.csv", res.A.atoms());
  io::write_csv(dir / "X.csv", res.X.matrix());
  json j = trace_json(res.trace);
  j["case"] = o.case_id;
  j["regime"] = regime_name(regime);
  j["lambda"] = o.lambda;
  j["k"] = k;
  j["seed"] = o.seed;
  j["stationarity_residual"] = res.stationarity_residual;
  write_json(dir / "trace.json", j);
  out << "learn: " << to_string(res.trace.stop_reason) << " after " << res.trace.iterations
      << " iterations, objective " << res.trace.objective_history.back() << "\n";
  return exit_for(res.trace.stop_reason);
}

// ---- constrained-fit -----------------------------------------------------

struct FitOptions {
  double alpha = 0.0;
  double beta = 0.0;
  int k = 0;
  std::string input;
  std::string out = ".";
  std::uint64_t seed = 0;
  int max_iters = 20000;
  double tol = 1e-8;
};

int cmd_constrained_fit(const FitOptions& o, std::ostream& out) {
  TrainingMatrix Y(io::read_csv(o.input));
  const int k = o.k > 0 ? o.k : static_cast<int>(Y.dim());
  sca::ConstrainedFitConfig cfg;
  cfg.solver.seed = o.seed;
  cfg.solver.max_iters = o.max_iters;
  cfg.solver.rel_obj_tol = o.tol;
  const auto res = sca::solve_constrained_fit(Y, k, o.alpha, TotalNorm{o.beta}, cfg);

  const auto dir = output_dir(o.out);
  io::write_csv(dir / "A.csv", res.A.atoms());
  io::write_csv(dir / "X.csv", res.X.matrix());
  const Matrix R = Y.matrix() - res.A.atoms() * res.X.matrix();
  json j = trace_json(res.trace);
  j["alpha"] = o.alpha;
  j["beta"] = o.beta;
  j["k"] = k;
  j["seed"] = o.seed;
  j["fit"] = 0.5 * R.squaredNorm();
  j["l1_norm"] = res.X.matrix().cwiseAbs().sum();
  j["stationarity_residual"] = res.stationarity_residual;
  write_json(dir / "trace.json", j);
  out << "constrained-fit: " << to_string(res.trace.stop_reason) << " after "
      << res.trace.iterations << " iterations, ||X||_1 " << j["l1_norm"].get<double>() << "\n";
  return exit_for(res.trace.stop_reason);
}

// ---- denoise / bench -----------------------------------------------------

struct DenoiseOptions {
  std::string input;
  std::optional<std::string> reference;
  bool prenoised = false;
  double sigma = 0.0;
  std::string learner = "alg2";
  int trials = 1;
  std::uint64_t seed = 0;
  int max_iters = 0;
  bool keep_patch_mean = false;
  std::string out = ".";
};

denoise::DenoiseConfig denoise_config(double sigma, const std::string& learner, int max_iters,
                                      bool keep_patch_mean, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw InvalidArgument("--sigma must be > 0");
  denoise::DenoiseConfig cfg;
  cfg.sigma = sigma;
  cfg.learner = denoise::parse_learner(learner);
  if (max_iters > 0) cfg.learn_iters = max_iters;
  cfg.remove_patch_mean = !keep_patch_mean;
  cfg.seed = seed;
  return cfg;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

int cmd_denoise(const DenoiseOptions& o, std::ostream& out) {
  if (o.trials < 1) throw InvalidArgument("--trials must be >= 1");
  const auto input = io::read_pgm(o.input);
  std::optional<denoise::GrayImage> reference;
  if (o.reference) reference = io::read_pgm(*o.reference);
  if (!o.prenoised) reference = input;
  const SeedTree seeds(o.seed);

  auto results = parallel_map(o.trials, [&](int t) {
    const auto trial_seed = seeds.derive("trial", static_cast<std::uint64_t>(t));
    const auto cfg = denoise_config(o.sigma, o.learner, o.max_iters, o.keep_patch_mean, trial_seed);
    const auto noisy = o.prenoised ? input : denoise::add_noise(input, o.sigma, trial_seed);
    return denoise::denoise_image(noisy, cfg, {}, reference);
  });

  std::vector<double> noisy_db;
  std::vector<double> clean_db;
  double wall = 0.0;
  json per_trial = json::array();
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t].report;
    wall += r.wall_time_ms;
    if (r.psnr_noisy) noisy_db.push_back(*r.psnr_noisy);
    if (r.psnr_denoised) clean_db.push_back(*r.psnr_denoised);
    per_trial.push_back({{"seed", seeds.derive("trial", t)},
                         {"psnr_noisy", finite_or_null(r.psnr_noisy)},
                         {"psnr_denoised", finite_or_null(r.psnr_denoised)}});
  }
  const auto& first = results.front().report;
  json j{{"psnr_noisy", noisy_db.empty() ? json(nullptr) : finite_or_null(mean_of(noisy_db))},
         {"psnr_denoised", clean_db.empty() ? json(nullptr) : finite_or_null(mean_of(clean_db))},
         {"sigma", o.sigma},
         {"learner", first.learner},
         {"iters", first.iters},
         {"wall_time_ms", wall},
         {"objective_trace", array_of(first.objective_trace)},
         {"trials", o.trials},
         {"seed", o.seed},
         {"mu", first.mu},
         {"lambda", first.lambda},
         {"blend_beta", first.blend_beta},
         {"patches", first.patches},
         {"atoms", first.atoms},
         {"max_atom_norm", first.max_atom_norm},
         {"per_trial", per_trial}};

  const auto dir = output_dir(o.out);
  io::write_pgm(dir / "denoised.pgm", results.front().clean);
  write_json(dir / "report.json", j);
  out << j.dump(2) << "\n";
  return kOk;
}

struct BenchOptions {
  std::string input;
  std::vector<double> sigmas{20.0, 60.0, 100.0, 140.0, 180.0};
  int trials = 1;
  std::uint64_t seed = 0;
  int max_iters = 0;
  bool keep_patch_mean = false;
  int synthetic_size = 64;
  std::optional<std::string> out;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  if (o.trials < 1) throw InvalidArgument("--trials must be >= 1");
  if (o.sigmas.empty()) throw InvalidArgument("--sigma needs at least one value");
  for (double s : o.sigmas) {
    if (!(s > 0.0)) throw InvalidArgument("--sigma values must be > 0");
  }
  const auto clean = o.input.empty()
                         ? denoise::synthetic_piecewise_constant(o.synthetic_size, o.synthetic_size,
                                                                 SeedTree(o.seed).derive("bench/image"))
                         : io::read_pgm(o.input);
  const SeedTree seeds(o.seed);
  const char* learners[] = {"dct", "ksvd", "alg2"};
  const int jobs = static_cast<int>(o.sigmas.size()) * o.trials;

  // Row per job: noisy PSNR then one column per learner.
  auto rows = parallel_map(jobs, [&](int job) {
    const auto s = static_cast<std::size_t>(job / o.trials);
    const auto t = static_cast<std::uint64_t>(job % o.trials);
    const auto trial_seed = seeds.child("bench/sigma", s).derive("trial", t);
    const auto noisy = denoise::add_noise(clean, o.sigmas[s], trial_seed);
    std::vector<double> row{denoise::psnr(noisy, clean)};
    for (const char* l : learners) {
      const auto cfg = denoise_config(o.sigmas[s], l, o.max_iters, o.keep_patch_mean, trial_seed);
      row.push_back(denoise::psnr(denoise::denoise_image(noisy, cfg).clean, clean));
    }
    return row;
  });

  std::ostringstream csv;
  csv << "sigma,psnr_noisy,dct,ksvd,alg2\n";
  for (std::size_t s = 0; s < o.sigmas.size(); ++s) {
    std::vector<double> mean(4, 0.0);
    for (int t = 0; t < o.trials; ++t) {
      const auto& row = rows[s * static_cast<std::size_t>(o.trials) + static_cast<std::size_t>(t)];
      for (std::size_t c = 0; c < 4; ++c) mean[c] += row[c] / o.trials;
    }
    csv << o.sigmas[s];
    for (double v : mean) csv << "," << v;
    csv << "\n";
  }
  if (o.out) io::write_file(output_dir(*o.out) / "bench.csv", csv.str());
  out << csv.str();
  return kOk;
}

// ---- hardness ------------------------------------------------------------

int cmd_hardness(const std::string& input, std::ostream& out) {
  const auto g = io::read_graph(input);
  const auto rep = hardness::verify_claims(g);
  const auto cut = hardness::densest_cut_bruteforce(g);
  auto claim = [](const hardness::ClaimCheck& c) {
    return json{{"passed", c.passed}, {"witness", c.witness}};
  };
  const double identity = 2.0 * g.edge_count() - g.vertex_count() * cut.ratio;
  json j{{"vertices", g.vertex_count()},
         {"edges", g.edge_count()},
         {"densest_cut", {{"ratio", cut.ratio},
                          {"crossing_edges", cut.crossing},
                          {"P", cut.best.p_side()},
                          {"Q", cut.best.q_side()}}},
         {"reduction_scale", hardness::reduction_scale(g.vertex_count())},
         {"ls_minimum", rep.ls_minimum},
         {"identity_value", identity},
         {"identity_error", std::abs(rep.ls_minimum - identity)},
         {"claims", {{"claim1", claim(rep.claim1)},
                     {"claim2", claim(rep.claim2)},
                     {"claim3", claim(rep.claim3)},
                     {"delta_bound", claim(rep.delta)}}},
         {"all_passed", rep.all_passed()}};
  out << j.dump(2) << "\n";
  return rep.all_passed() ? kOk : kError;
}

}  // namespace

int thread_budget() {
  const char* env = std::getenv("SPARSEDICT_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dictionary learning, constrained fitting, hardness checks and patch denoising",
               "sparsedict"};
  app.require_subcommand(1);

  LearnOptions lo;
  auto* learn = app.add_subcommand("learn", "Learn a dictionary (cases 1-4)");
  learn->add_option("--case", lo.case_id, "Constraint case")->required()->check(CLI::Range(1, 4));
  learn->add_option("--beta", lo.beta, "Frobenius bound (cases 1, 3; per-atom default for case 2)");
  learn->add_option("--betas", lo.betas, "Per-atom bounds, comma separated (case 2)")->delimiter(',');
  learn->add_option("--theta", lo.theta, "Per-atom L1 bound (case 4)");
  learn->add_option("--lambda", lo.lambda, "Sparsity weight")->check(CLI::NonNegativeNumber);
  learn->add_option("--k", lo.k, "Number of atoms (default: rows of Y)");
  learn->add_option("--input,input", lo.input, "Training matrix CSV")->required();
  learn->add_option("--out", lo.out, "Output directory");
  learn->add_option("--seed", lo.seed);
  learn->add_option("--max-iters", lo.max_iters)->check(CLI::PositiveNumber);
  learn->add_option("--tol", lo.tol, "Relative objective tolerance")->check(CLI::PositiveNumber);

  FitOptions fo;
  auto* fit = app.add_subcommand("constrained-fit", "min ||X||_1 s.t. fit <= alpha, ||A||_F^2 <= beta");
  fit->add_option("--alpha", fo.alpha, "Fit budget")->required()->check(CLI::PositiveNumber);
  fit->add_option("--beta", fo.beta, "Frobenius bound on A")->required()->check(CLI::PositiveNumber);
  fit->add_option("--k", fo.k, "Number of atoms (default: rows of Y)");
  fit->add_option("--input,input", fo.input, "Training matrix CSV")->required();
  fit->add_option("--out", fo.out, "Output directory");
  fit->add_option("--seed", fo.seed);
  fit->add_option("--max-iters", fo.max_iters)->check(CLI::PositiveNumber);
  fit->add_option("--tol", fo.tol)->check(CLI::PositiveNumber);

  DenoiseOptions dn;
  auto* den = app.add_subcommand("denoise", "Denoise a PGM image");
  den->add_option("--input,input", dn.input, "Clean PGM (noise is synthesized) or noisy PGM with --prenoised")
      ->required();
  den->add_option("--sigma", dn.sigma, "Noise standard deviation")->required();
  den->add_option("--learner", dn.learner)->check(CLI::IsMember({"alg2", "ksvd", "dct"}));
  den->add_option("--trials", dn.trials, "Monte Carlo trials (mean PSNR is reported)");
  den->add_option("--seed", dn.seed);
  den->add_option("--max-iters", dn.max_iters, "Learning iterations");
  den->add_flag("--prenoised", dn.prenoised, "Input already carries the noise");
  den->add_option("--reference", dn.reference, "Clean PGM for PSNR when --prenoised");
  den->add_flag("--keep-patch-mean", dn.keep_patch_mean, "Learn on raw patches");
  den->add_option("--out", dn.out, "Output directory");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "PSNR table over a sigma grid for all learners");
  bench->add_option("--input,input", bo.input, "Clean PGM (default: synthetic image)");
  bench->add_option("--sigma", bo.sigmas, "Sigma grid, comma separated")->delimiter(',');
  bench->add_option("--trials", bo.trials);
  bench->add_option("--seed", bo.seed);
  bench->add_option("--max-iters", bo.max_iters);
  bench->add_option("--size", bo.synthetic_size, "Synthetic image side")->check(CLI::Range(8, 4096));
  bench->add_flag("--keep-patch-mean", bo.keep_patch_mean);
  bench->add_option("--out", bo.out, "Also write bench.csv here");

  std::string graph;
  auto* hard = app.add_subcommand("hardness", "Densest-cut reduction checks on a small graph");
  hard->add_option("--input,input", graph, "Edge-list graph file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*learn) return cmd_learn(lo, out);
    if (*fit) return cmd_constrained_fit(fo, out);
    if (*den) return cmd_denoise(dn, out);
    if (*bench) return cmd_bench(bo, out);
    return cmd_hardness(graph, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace sparsedict::cli
