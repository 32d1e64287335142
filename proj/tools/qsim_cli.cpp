// Command-line harness: dataset generation, training, D sweeps, four-way
// ideal/noisy comparisons, gate-count reports, and ansatz reuse, all emitting
// CSV plus a run-manifest capturing the resolved configuration.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-validation
// failure.

#include "qsim/gates.hpp"
#include "qsim/model.hpp"
#include "qsim/noise.hpp"
#include "qsim/qcl.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qsim;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ManifestWriter {
  std::map<std::string, std::string> entries;

  void put(const std::string& key, const std::string& value) { entries[key] = value; }
  void put(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    entries[key] = buf;
  }
  void put(const std::string& key, long long value) { entries[key] = std::to_string(value); }

  void write(const fs::path& dir) const {
    std::ofstream os(dir / "run-manifest.txt");
    if (!os) throw std::runtime_error("cannot write run manifest in " + dir.string());
    for (const auto& [k, v] : entries) os << k << "=" << v << "\n";
  }
};

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> grid(int n) {
  std::vector<double> xs(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<size_t>(i)] = -1.0 + 2.0 * i / (n - 1);
  return xs;
}

// Expectation with optional projective sampling; each term draws its own
// deterministic stream so output is stable for a fixed seed.
double measure(const DensityMatrix& rho, const ObservableSum& obs, long shots,
               std::uint64_t seed) {
  if (shots <= 0) return expectation(rho, obs);
  double acc = 0;
  std::uint64_t s = seed;
  for (const auto& t : obs.terms) acc += sample_expectation(rho, t, shots, s++);
  return acc;
}

NoiseSpec make_noise(const std::string& name, double p, const std::string& placement,
                     const std::string& tpl) {
  NoiseSpec ns;
  ns.kind = channel_by_name(name, 0.0).kind;
  ns.p = p >= 0 ? p : default_noise_p(ns.kind);
  if (placement == "per-gate")
    ns.placement = NoiseSpec::Placement::PerGateOnTargets;
  else if (placement == "two-qubit-only")
    ns.placement = NoiseSpec::Placement::TwoQubitGatesOnly;
  else
    throw std::invalid_argument("unknown placement '" + placement + "'");
  if (tpl == "kak3")
    ns.r_template = RTemplate::Kak3;
  else if (tpl == "tally4")
    ns.r_template = RTemplate::Tally4;
  else
    throw std::invalid_argument("unknown braided-gate template '" + tpl + "'");
  return ns;
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v))
    throw std::range_error("non-finite value in " + what);
}

struct ComparisonWriter {
  std::ofstream os;

  explicit ComparisonWriter(const fs::path& path) : os(path) {
    if (!os) throw std::runtime_error("cannot open " + path.string());
    os << "x,d,observable,ideal_original,ideal_learned,noisy_original,noisy_learned,"
          "noise_kind,p,shots\n";
  }
  void row(double x, int d, const std::string& obs, double io, double il, double no,
           double nl, const std::string& kind, double p, long shots) {
    for (double v : {io, il, no, nl}) require_finite(v, "comparison row");
    os << fmt12(x) << ',' << d << ',' << obs << ',' << fmt12(io) << ',' << fmt12(il)
       << ',' << fmt12(no) << ',' << fmt12(nl) << ',' << kind << ',' << fmt12(p) << ','
       << shots << "\n";
  }
};

TrainedModel load_model_checked(const std::string& path, int L_flag, int d_flag,
                                double delta_flag) {
  TrainedModel m = load_model(path);
  if (L_flag > 0 && L_flag != m.config.L)
    throw std::invalid_argument("--L disagrees with the model file");
  if (d_flag > 0 && d_flag != m.d)
    throw std::invalid_argument("--d disagrees with the model file");
  if (delta_flag > 0 && std::abs(delta_flag - m.delta) > 1e-12)
    throw std::invalid_argument("--delta disagrees with the model file");
  return m;
}

// Shared training driver for cmd_train and cmd_sweep_D.
TrainedModel run_training(int L, int D, int d, double delta, std::uint64_t coupling_seed,
                          std::uint64_t restart_base, int restarts, double alpha5,
                          double ftol, long maxiter, double step, const Dataset& ds) {
  AnsatzConfig cfg = AnsatzConfig::make(L, D, coupling_seed);
  TrainOptions opts;
  opts.restarts = restarts;
  opts.seed = restart_base;
  opts.alpha = {2, 1, 1, 1, alpha5};
  opts.nm.ftol = ftol;
  opts.nm.maxiter = maxiter;
  opts.nm.step = step;
  opts.log_restarts = true;
  Dataset local = ds;
  local.L = L;
  local.d = d;
  local.delta = delta;
  return train(cfg, local, opts);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-chain circuit toolkit: exact small-chain evolution, shallow "
               "learned surrogates, and noise comparisons"};
  app.set_config("--config", "", "INI file with long-option keys; section per subcommand");
  app.fallthrough(); // let --config appear after the subcommand name
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  // One options instance per subcommand. Config files can carry sections for
  // several subcommands at once, and CLI11 fills the options of sections that
  // were not invoked too; separate instances keep those writes isolated.
  struct Opts {
    int L = 2, D = 2, d = 4, M = 200, grid_n = 41, restarts = 8, n_reps = 2;
    double delta = 0.1, p = -1.0, alpha5 = 3.0, ftol = 1e-6, step = 0.25;
    long maxiter = 20000, shots = 0;
    std::uint64_t coupling_seed = 12345, seed = 1000;
    std::string noise_name = "depolarizing", out_dir = ".", accounting = "template";
    std::string placement = "per-gate", r_template = "kak3";
    std::string dataset_path, model_path, out_name;
  };
  Opts og, ot, osw, ob, ogc, oru;

  auto add_chain = [](CLI::App* cmd, Opts& o) {
    cmd->add_option("--L", o.L, "chain length (2, 3, or even >= 4)");
    cmd->add_option("--delta", o.delta, "evolution-step parameter");
  };
  auto add_out = [](CLI::App* cmd, Opts& o) {
    cmd->add_option("--out-dir", o.out_dir, "output directory (created if missing)");
  };
  auto add_noise = [](CLI::App* cmd, Opts& o) {
    cmd->add_option("--noise", o.noise_name, "bitflip, depolarizing, ampdamp, phasedamp");
    cmd->add_option("--p", o.p, "channel strength; negative selects the channel default");
    cmd->add_option("--shots", o.shots, "projective-measurement shots; 0 means exact")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--placement", o.placement, "per-gate or two-qubit-only");
    cmd->add_option("--r-template", o.r_template,
                    "braided-gate decomposition for noisy runs: kak3 or tally4");
    cmd->add_option("--seed", o.seed, "sampling seed (shots > 0)");
  };
  auto add_train_opts = [](CLI::App* cmd, Opts& o) {
    cmd->add_option("--D", o.D, "ansatz layers")->check(CLI::PositiveNumber);
    cmd->add_option("--coupling-seed", o.coupling_seed, "frozen pair-coupling draw");
    cmd->add_option("--seed", o.seed, "restart stream base; restart r uses seed + r");
    cmd->add_option("--restarts", o.restarts, "random restarts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--alpha5", o.alpha5, "weight of the energy term")
        ->check(CLI::Range(2.0, 4.0));
    cmd->add_option("--ftol", o.ftol, "simplex value-spread tolerance");
    cmd->add_option("--maxiter", o.maxiter, "iteration cap per restart");
    cmd->add_option("--step", o.step, "initial simplex offset");
  };

  CLI::App* gen = app.add_subcommand("gen-data", "generate a training dataset CSV");
  add_chain(gen, og);
  gen->add_option("--d", og.d, "evolution steps for the dynamical target");
  gen->add_option("--M", og.M, "grid size")->check(CLI::Range(2, 100000));
  gen->add_option("--out", og.out_name, "file name (default dataset_L<L>_d<d>.csv)");
  add_out(gen, og);

  CLI::App* tr = app.add_subcommand("train", "train a shallow surrogate on a dataset");
  add_chain(tr, ot);
  tr->add_option("--dataset", ot.dataset_path, "dataset CSV from gen-data")->required();
  tr->add_option("--d", ot.d, "evolution steps the dataset was generated with");
  add_train_opts(tr, ot);
  tr->add_option("--out", ot.out_name,
                 "model file name (default model_L<L>_D<D>_d<d>.json)");
  add_out(tr, ot);

  CLI::App* sw = app.add_subcommand("sweep-D", "train D in {2,3,4} and keep the best");
  add_chain(sw, osw);
  sw->add_option("--dataset", osw.dataset_path, "dataset CSV from gen-data")->required();
  sw->add_option("--d", osw.d, "evolution steps the dataset was generated with");
  add_train_opts(sw, osw);
  sw->add_option("--out", osw.out_name, "best-model file name (default best_model.json)");
  add_out(sw, osw);

  CLI::App* bm = app.add_subcommand(
      "benchmark", "four-way ideal/noisy comparison of original vs learned circuits");
  bm->add_option("--model", ob.model_path, "trained model JSON")->required();
  add_chain(bm, ob);
  bm->add_option("--d", ob.d, "must match the model when given");
  bm->add_option("--grid", ob.grid_n, "number of x points")->check(CLI::Range(2, 100000));
  add_noise(bm, ob);
  bm->add_option("--out", ob.out_name, "CSV name (default benchmark.csv)");
  add_out(bm, ob);

  CLI::App* gc = app.add_subcommand("gatecount", "gate budgets and break-even depth");
  add_chain(gc, ogc);
  gc->add_option("--d", ogc.d, "evolution steps");
  gc->add_option("--D", ogc.D, "ansatz layers");
  gc->add_option("--accounting", ogc.accounting, "template or paper-tally")
      ->check(CLI::IsMember({"template", "paper-tally"}));

  CLI::App* ru = app.add_subcommand("reuse", "apply the trained ansatz n times");
  ru->add_option("--model", oru.model_path, "trained model JSON")->required();
  ru->add_option("--n", oru.n_reps, "ansatz applications")->check(CLI::PositiveNumber);
  ru->add_option("--grid", oru.grid_n, "number of x points")
      ->check(CLI::Range(2, 100000));
  add_noise(ru, oru);
  ru->add_option("--out", oru.out_name, "CSV name (default reuse.csv)");
  add_out(ru, oru);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Opts& o = *gen ? og : *tr ? ot : *sw ? osw : *bm ? ob : *gc ? ogc : oru;
    fs::create_directories(o.out_dir);
    ManifestWriter manifest;
    manifest.put("out_dir", o.out_dir);

    if (*gen) {
      ModelSpec spec{o.L, o.delta, 1.0};
      Dataset ds = gen_dataset(spec, o.d, o.M);
      if (o.out_name.empty())
        o.out_name =
            "dataset_L" + std::to_string(o.L) + "_d" + std::to_string(o.d) + ".csv";
      const fs::path path = fs::path(o.out_dir) / o.out_name;
      save_dataset(ds, path.string());
      std::printf("wrote %s: %d rows, x in [%.12g, %.12g]\n", path.string().c_str(), o.M,
                  ds.xs.front(), ds.xs.back());
      for (int k = 0; k < 5; ++k) {
        const auto& t = ds.targets[static_cast<size_t>(k)];
        double lo = t[0], hi = t[0], mean = 0;
        for (double v : t) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          mean += v;
        }
        std::printf("  y_%-4s mean %+.6f range [%+.6f, %+.6f]\n", kObservableNames[k],
                    mean / o.M, lo, hi);
      }
      manifest.put("command", std::string("gen-data"));
      manifest.put("L", (long long)o.L);
      manifest.put("delta", o.delta);
      manifest.put("d", (long long)o.d);
      manifest.put("M", (long long)o.M);
      manifest.put("dataset", path.string());
      manifest.put("dataset_hash", "0x" + [&] {
        char b[20];
        std::snprintf(b, sizeof b, "%016llx", (unsigned long long)ds.hash());
        return std::string(b);
      }());
    } else if (*tr || *sw) {
      Dataset ds = load_dataset(o.dataset_path);
      const bool sweeping = static_cast<bool>(*sw);
      std::vector<int> d_list =
          sweeping ? std::vector<int>{2, 3, 4} : std::vector<int>{o.D};
      TrainedModel best;
      double best_loss = 1e300;
      for (int dd : d_list) {
        TrainedModel m =
            run_training(o.L, dd, o.d, o.delta, o.coupling_seed, o.seed, o.restarts,
                         o.alpha5, o.ftol, o.maxiter, o.step, ds);
        std::printf("D=%d: final loss %.6e, a %.6f\n", dd, m.final_loss, m.a);
        if (m.final_loss < best_loss) {
          best_loss = m.final_loss;
          best = m;
        }
      }
      if (o.out_name.empty())
        o.out_name = sweeping ? "best_model.json"
                              : "model_L" + std::to_string(o.L) + "_D" +
                                    std::to_string(o.D) + "_d" + std::to_string(o.d) +
                                    ".json";
      const fs::path path = fs::path(o.out_dir) / o.out_name;
      save_model(best, path.string());
      std::printf("wrote %s (D=%d, loss %.6e)\n", path.string().c_str(), best.config.D,
                  best.final_loss);
      manifest.put("command", std::string(sweeping ? "sweep-D" : "train"));
      manifest.put("L", (long long)o.L);
      manifest.put("delta", o.delta);
      manifest.put("d", (long long)o.d);
      manifest.put("D", sweeping ? std::string("2,3,4") : std::to_string(o.D));
      manifest.put("dataset", o.dataset_path);
      manifest.put("coupling_seed", (long long)o.coupling_seed);
      manifest.put("restart_base", (long long)o.seed);
      manifest.put("restarts", (long long)o.restarts);
      manifest.put("alpha5", o.alpha5);
      manifest.put("ftol", o.ftol);
      manifest.put("maxiter", (long long)o.maxiter);
      manifest.put("step", o.step);
      manifest.put("model", path.string());
      manifest.put("final_loss", best.final_loss);
    } else if (*bm) {
      TrainedModel m = load_model_checked(o.model_path, bm->count("--L") ? o.L : 0,
                                          bm->count("--d") ? o.d : 0,
                                          bm->count("--delta") ? o.delta : 0.0);
      ModelSpec spec{m.config.L, m.delta, 1.0};
      NoiseSpec ns = make_noise(o.noise_name, o.p, o.placement, o.r_template);
      auto obs = loss_observables(spec);
      const auto xs = grid(o.grid_n);
      if (o.out_name.empty()) o.out_name = "benchmark.csv";
      const fs::path path = fs::path(o.out_dir) / o.out_name;
      ComparisonWriter csv(path);
      std::uint64_t sample_seed = o.seed;
      for (size_t xi = 0; xi < xs.size(); ++xi) {
        const double x = xs[xi];
        DensityMatrix ideal_orig =
            DensityMatrix::from_state(evolve_exact(spec, x, m.d));
        DensityMatrix ideal_learn = DensityMatrix::from_state(
            run_ideal(learned_circuit(m, x), StateVector::zero_state(spec.L)));
        DensityMatrix noisy_orig = run_noisy(original_circuit(spec, x, m.d),
                                             DensityMatrix::zero_state(spec.L), ns);
        DensityMatrix noisy_learn =
            run_noisy(learned_circuit(m, x), DensityMatrix::zero_state(spec.L), ns);
        for (int k = 0; k < 5; ++k) {
          const auto& term = obs[static_cast<size_t>(k)];
          csv.row(x, m.d, kObservableNames[k],
                  measure(ideal_orig, term, o.shots, sample_seed),
                  m.a * measure(ideal_learn, term, o.shots, sample_seed + 1),
                  measure(noisy_orig, term, o.shots, sample_seed + 2),
                  m.a * measure(noisy_learn, term, o.shots, sample_seed + 3),
                  channel_name(ns.kind), ns.p, o.shots);
          sample_seed += 4;
        }
      }
      std::printf("wrote %s (%d x points, noise %s p=%.12g, shots %ld)\n",
                  path.string().c_str(), o.grid_n, channel_name(ns.kind).c_str(), ns.p,
                  o.shots);
      manifest.put("command", std::string("benchmark"));
      manifest.put("model", o.model_path);
      manifest.put("L", (long long)m.config.L);
      manifest.put("delta", m.delta);
      manifest.put("d", (long long)m.d);
      manifest.put("grid", (long long)o.grid_n);
      manifest.put("noise", channel_name(ns.kind));
      manifest.put("p", ns.p);
      manifest.put("placement", o.placement);
      manifest.put("r_template", o.r_template);
      manifest.put("shots", (long long)o.shots);
      manifest.put("seed", (long long)o.seed);
      manifest.put("csv", path.string());
    } else if (*gc) {
      ModelSpec spec{o.L, o.delta, 1.0};
      Circuit step_c = o.L == 3 ? u3_step(o.delta) : trotter_step_even(spec);
      Circuit evo(o.L);
      for (int i = 0; i < o.d; ++i) evo.append(step_c);
      GateCounts tally = gate_counts_accounting(evo, Accounting::FixedTally);
      GateCounts tmpl = gate_counts_accounting(evo, Accounting::Template);
      AnsatzConfig cfg = AnsatzConfig::make(o.L, o.D, o.coupling_seed);
      Circuit ans = build_ansatz(cfg, std::vector<double>(cfg.theta_count(), 0.3));
      GateCounts ac = gate_counts(ans);
      std::printf("evolution circuit, %d steps of length-%d chain:\n", o.d, o.L);
      std::printf("  paper-tally accounting: %ld single-qubit, %ld CNOT\n",
                  tally.single_qubit, tally.cnot);
      std::printf("  template accounting:    %ld single-qubit, %ld CNOT\n",
                  tmpl.single_qubit, tmpl.cnot);
      std::printf("ansatz, D=%d: %ld single-qubit, %ld CNOT\n", o.D, ac.single_qubit,
                  ac.cnot);
      const long ans_total = ac.single_qubit + ac.cnot;
      const bool use_tally = o.accounting == "paper-tally";
      const long per_step =
          (use_tally ? tally.single_qubit + tally.cnot : tmpl.single_qubit + tmpl.cnot) /
          o.d;
      const long break_even = ans_total / per_step + 1;
      std::printf("break-even (%s accounting): ansatz is smaller from d=%ld\n",
                  o.accounting.c_str(), break_even);
      manifest.put("command", std::string("gatecount"));
      manifest.put("L", (long long)o.L);
      manifest.put("d", (long long)o.d);
      manifest.put("D", (long long)o.D);
      manifest.put("accounting", o.accounting);
      manifest.put("break_even_d", (long long)break_even);
    } else if (*ru) {
      TrainedModel m = load_model_checked(o.model_path, 0, 0, 0.0);
      ModelSpec spec{m.config.L, m.delta, 1.0};
      NoiseSpec ns = make_noise(o.noise_name, o.p, o.placement, o.r_template);
      Circuit ans = build_ansatz(m.config, m.theta);
      ObservableSum z1 = ObservableSum{}.add(make_pauli(m.config.L, {{0, 'Z'}}));
      const auto xs = grid(o.grid_n);
      if (o.out_name.empty()) o.out_name = "reuse.csv";
      const fs::path path = fs::path(o.out_dir) / o.out_name;
      ComparisonWriter csv(path);
      std::uint64_t sample_seed = o.seed;
      double dev_n = 0, dev_single = 0;
      for (size_t xi = 0; xi < xs.size(); ++xi) {
        const double x = xs[xi];
        // n-fold application: one encoding, the ansatz n times, scale once.
        Circuit reused(m.config.L);
        reused.append(input_encoding(x, m.config.L));
        for (int r = 0; r < o.n_reps; ++r) reused.append(ans);
        DensityMatrix ideal_learn = DensityMatrix::from_state(
            run_ideal(reused, StateVector::zero_state(m.config.L)));
        DensityMatrix ideal_orig =
            DensityMatrix::from_state(evolve_exact(spec, x, o.n_reps * m.d));
        DensityMatrix noisy_orig =
            run_noisy(original_circuit(spec, x, o.n_reps * m.d),
                      DensityMatrix::zero_state(m.config.L), ns);
        DensityMatrix noisy_learn =
            run_noisy(reused, DensityMatrix::zero_state(m.config.L), ns);
        const double io = measure(ideal_orig, z1, o.shots, sample_seed);
        const double il = m.a * measure(ideal_learn, z1, o.shots, sample_seed + 1);
        csv.row(x, o.n_reps * m.d, "Z1", io, il,
                measure(noisy_orig, z1, o.shots, sample_seed + 2),
                m.a * measure(noisy_learn, z1, o.shots, sample_seed + 3),
                channel_name(ns.kind), ns.p, o.shots);
        sample_seed += 4;
        dev_n += std::abs(il - io);

        const double single_exact = expectation(evolve_exact(spec, x, m.d), z1);
        const double single_pred = predict(m, x, z1);
        dev_single += std::abs(single_pred - single_exact);
      }
      dev_n /= static_cast<double>(xs.size());
      dev_single /= static_cast<double>(xs.size());
      std::printf("wrote %s\n", path.string().c_str());
      std::printf("mean abs deviation: n=%d application %.6f, single application %.6f\n",
                  o.n_reps, dev_n, dev_single);
      manifest.put("command", std::string("reuse"));
      manifest.put("model", o.model_path);
      manifest.put("n", (long long)o.n_reps);
      manifest.put("grid", (long long)o.grid_n);
      manifest.put("noise", channel_name(ns.kind));
      manifest.put("p", ns.p);
      manifest.put("shots", (long long)o.shots);
      manifest.put("seed", (long long)o.seed);
      manifest.put("csv", path.string());
      manifest.put("dev_n", dev_n);
      manifest.put("dev_single", dev_single);
      if (o.n_reps > 1 && dev_n >= 3 * dev_single) {
        manifest.write(o.out_dir);
        std::fprintf(stderr,
                     "reuse validation failed: n-fold deviation %.6f is not below 3x the "
                     "single-application deviation %.6f\n",
                     dev_n, dev_single);
        return kExitNumerical;
      }
    }

    manifest.write(o.out_dir);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::range_error& e) {
    std::fprintf(stderr, "numerical validation failed: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
