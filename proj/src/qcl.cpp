#include "qsim/qcl.hpp"

#include "qsim/kernels.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::pair<int, int>> pair_list(int L) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < L; ++j)
    for (int k = j + 1; k < L; ++k) pairs.emplace_back(j, k);
  return pairs;
}

Circuit evolution_step(const ModelSpec& spec) {
  if (spec.L == 3) return u3_step(spec.delta);
  return trotter_step_even(spec);
}

} // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

AnsatzConfig AnsatzConfig::make(int L, int D, std::uint64_t seed, double T) {
  if (L < 2 || D < 1) throw std::invalid_argument("AnsatzConfig: L >= 2, D >= 1 required");
  AnsatzConfig cfg;
  cfg.L = L;
  cfg.D = D;
  cfg.T = T;
  cfg.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  cfg.couplings.resize(static_cast<size_t>(cfg.pair_count()));
  for (auto& c : cfg.couplings) c = unit(rng);
  return cfg;
}

std::array<ObservableSum, 5> loss_observables(const ModelSpec& spec) {
  return {ObservableSum{}.add(make_pauli(spec.L, {{0, 'Z'}})),
          total_spin(spec.L, 'Z'),
          total_spin(spec.L, 'X'),
          total_spin(spec.L, 'Y'),
          xxx_hamiltonian(spec)};
}

Circuit input_encoding(double x, int L) {
  if (!(std::abs(x) <= 1.0))
    throw std::domain_error("input_encoding: x must lie in [-1, 1]");
  const double a = std::asin(x);
  const double b = std::acos(x * x);
  Circuit c(L);
  auto prep = [&](GateKind kind, int q, double th) {
    c.push({kind, {q}, {th}, "", true});
  };
  if (L == 3) {
    // Middle site takes an X-axis second rotation; this is the variant
    // that reproduces the chain-of-3 headline expectation values.
    prep(GateKind::RY, 0, a);
    prep(GateKind::RZ, 0, b);
    prep(GateKind::RY, 1, a);
    prep(GateKind::RX, 1, b);
    prep(GateKind::RY, 2, a);
    prep(GateKind::RZ, 2, b);
    return c;
  }
  if (L % 2 != 0)
    throw std::invalid_argument("input_encoding: odd chain lengths other than 3 unsupported");
  for (int q = 0; q < L; ++q) {
    // One-based site q+1: odd sites rotate about Y, even sites about X.
    prep(q % 2 == 0 ? GateKind::RY : GateKind::RX, q, a);
    prep(GateKind::RZ, q, b);
  }
  return c;
}

Circuit build_ansatz(const AnsatzConfig& config, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != config.theta_count())
    throw std::invalid_argument("build_ansatz: theta length must be 3*L*D");
  if (static_cast<int>(config.couplings.size()) != config.pair_count())
    throw std::invalid_argument("build_ansatz: coupling count must be L(L-1)/2");
  Circuit c(config.L);
  const auto pairs = pair_list(config.L);
  for (int dd = 0; dd < config.D; ++dd) {
    for (size_t pi = 0; pi < pairs.size(); ++pi)
      c.append(zz_block(config.couplings[pi] * config.T, pairs[pi].first,
                        pairs[pi].second, config.L));
    for (int q = 0; q < config.L; ++q) {
      const int base = 3 * (dd * config.L + q);
      c.rx(q, theta[base]).rz(q, theta[base + 1]).rx(q, theta[base + 2]);
    }
  }
  return c;
}

StateVector evolve_exact(const ModelSpec& spec, double x, int d) {
  StateVector psi = run_ideal(input_encoding(x, spec.L), StateVector::zero_state(spec.L));
  const Circuit step = evolution_step(spec);
  for (int i = 0; i < d; ++i) psi = run_ideal(step, psi);
  return psi;
}

Circuit original_circuit(const ModelSpec& spec, double x, int d) {
  Circuit c = input_encoding(x, spec.L);
  const Circuit step = evolution_step(spec);
  for (int i = 0; i < d; ++i) c.append(step);
  return c;
}

Circuit learned_circuit(const TrainedModel& model, double x) {
  Circuit c = input_encoding(x, model.config.L);
  c.append(build_ansatz(model.config, model.theta));
  return c;
}

Dataset gen_dataset(const ModelSpec& spec, int d, int M) {
  if (M < 2) throw std::invalid_argument("gen_dataset: M >= 2 required");
  Dataset ds;
  ds.L = spec.L;
  ds.d = d;
  ds.delta = spec.delta;
  ds.xs.resize(static_cast<size_t>(M));
  for (auto& t : ds.targets) t.resize(static_cast<size_t>(M));
  const auto obs = loss_observables(spec);
  for (int i = 0; i < M; ++i) {
    const double x = -1.0 + 2.0 * i / (M - 1);
    ds.xs[static_cast<size_t>(i)] = x;
    const StateVector psi_in = evolve_exact(spec, x, 0);
    const StateVector psi_out = evolve_exact(spec, x, d);
    ds.targets[0][static_cast<size_t>(i)] = expectation(psi_out, obs[0]);
    for (int k = 1; k < 5; ++k)
      ds.targets[static_cast<size_t>(k)][static_cast<size_t>(i)] =
          expectation(psi_in, obs[static_cast<size_t>(k)]);
  }
  return ds;
}

std::string Dataset::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "x,y_Z1,y_Ztot,y_Xtot,y_Ytot,y_H\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    os << xs[i];
    for (const auto& t : targets) os << ',' << t[i];
    os << '\n';
  }
  return os.str();
}

Dataset Dataset::from_text(const std::string& text) {
  Dataset ds;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "x,y_Z1,y_Ztot,y_Xtot,y_Ytot,y_H")
    throw std::invalid_argument("dataset: missing or bad header row");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::array<double, 6> vals{};
    for (int k = 0; k < 6; ++k) {
      if (!std::getline(ls, cell, ',')) throw std::invalid_argument("dataset: short row");
      vals[static_cast<size_t>(k)] = std::stod(cell);
    }
    ds.xs.push_back(vals[0]);
    for (int k = 0; k < 5; ++k)
      ds.targets[static_cast<size_t>(k)].push_back(vals[static_cast<size_t>(k + 1)]);
  }
  return ds;
}

std::uint64_t Dataset::hash() const { return fnv1a64(to_text()); }

AnsatzEvaluator::AnsatzEvaluator(const AnsatzConfig& config, const Dataset& ds, Exec ex)
    : config_(config), ds_(ds), exec_(ex) {
  if (ds.L != config.L)
    throw std::invalid_argument("AnsatzEvaluator: dataset chain length does not match the ansatz");
  for (const auto& t : ds.targets)
    if (t.size() != ds.xs.size())
      throw std::invalid_argument("AnsatzEvaluator: target column length does not match the grid");
  obs_ = loss_observables(ModelSpec{config.L, ds.delta, 1.0});
  psi_in_.reserve(ds_.xs.size());
  for (double x : ds_.xs)
    psi_in_.push_back(
        run_ideal(input_encoding(x, config_.L), StateVector::zero_state(config_.L))
            .amplitudes);
}

std::array<double, 5> AnsatzEvaluator::predictions(const std::vector<double>& theta,
                                                   int i) const {
  if (theta.size() != static_cast<size_t>(config_.theta_count()))
    throw std::invalid_argument("AnsatzEvaluator: wrong number of rotation angles");
  const int L = config_.L;
  Vec amps = psi_in_[static_cast<size_t>(i)];
  const auto pairs = pair_list(L);
  for (int dd = 0; dd < config_.D; ++dd) {
    for (size_t pi = 0; pi < pairs.size(); ++pi)
      apply_zz_phase(amps.data(), L, pairs[pi].first, pairs[pi].second,
                     config_.couplings[pi] * config_.T, Exec::Serial);
    for (int q = 0; q < L; ++q) {
      const int base = 3 * (dd * L + q);
      const Mat2 g = rotation_matrix('X', theta[static_cast<size_t>(base + 2)]) *
                     rotation_matrix('Z', theta[static_cast<size_t>(base + 1)]) *
                     rotation_matrix('X', theta[static_cast<size_t>(base)]);
      apply_1q(amps.data(), L, q, g, Exec::Serial);
    }
  }
  const StateVector psi{amps, L};
  std::array<double, 5> f{};
  for (int k = 0; k < 5; ++k)
    f[static_cast<size_t>(k)] = expectation(psi, obs_[static_cast<size_t>(k)]);
  return f;
}

double AnsatzEvaluator::loss(const std::vector<double>& theta, double a,
                             const std::array<double, 5>& alpha) const {
  // Validate before the parallel loop; a throw inside the omp region would
  // not propagate.
  if (theta.size() != static_cast<size_t>(config_.theta_count()))
    throw std::invalid_argument("AnsatzEvaluator: wrong number of rotation angles");
  const int M = grid_size();
  std::vector<std::array<double, 5>> res(static_cast<size_t>(M));
  if (exec_ == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) res[static_cast<size_t>(i)] = predictions(theta, i);
  } else {
    for (int i = 0; i < M; ++i) res[static_cast<size_t>(i)] = predictions(theta, i);
  }
  // Serial reduction in index order keeps results identical across modes.
  double total = 0.0;
  for (int k = 0; k < 5; ++k) {
    double sq = 0.0;
    for (int i = 0; i < M; ++i) {
      const double r = a * res[static_cast<size_t>(i)][static_cast<size_t>(k)] -
                       ds_.targets[static_cast<size_t>(k)][static_cast<size_t>(i)];
      sq += r * r;
    }
    total += alpha[static_cast<size_t>(k)] * sq / M;
  }
  return total;
}

double AnsatzEvaluator::loss_joint(const std::vector<double>& x,
                                   const std::array<double, 5>& alpha) const {
  std::vector<double> theta(x.begin(), x.end() - 1);
  return loss(theta, x.back(), alpha);
}

double loss(const std::vector<double>& theta, double a, const Dataset& ds,
            const std::array<double, 5>& alpha, const AnsatzConfig& config) {
  return AnsatzEvaluator(config, ds, default_exec()).loss(theta, a, alpha);
}

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                     const std::vector<double>& x0, const NmOptions& opts) {
  const size_t n = x0.size();
  if (n < 1) throw std::invalid_argument("nelder_mead: empty start point");
  auto eval = [&](const std::vector<double>& p) {
    const double v = objective(p);
    if (!std::isfinite(v))
      throw std::runtime_error("nelder_mead: objective returned a non-finite value");
    return v;
  };

  std::vector<std::vector<double>> pts;
  pts.reserve(n + 1);
  pts.push_back(x0);
  for (size_t i = 0; i < n; ++i) {
    auto p = x0;
    p[i] += opts.step;
    pts.push_back(std::move(p));
  }
  std::vector<double> vals(n + 1);
  for (size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  auto sort_simplex = [&] {
    std::vector<size_t> order(n + 1);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (size_t i = 0; i <= n; ++i) {
      p2[i] = std::move(pts[order[i]]);
      v2[i] = vals[order[i]];
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  NmResult res;
  res.reason = "maxiter";
  long it = 0;
  while (it < opts.maxiter) {
    sort_simplex();
    if (std::abs(vals[n] - vals[0]) < opts.ftol) {
      res.reason = "ftol";
      break;
    }
    ++it;
    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
    auto blend = [&](double w) {
      // centroid + w * (centroid - worst)
      std::vector<double> p(n);
      for (size_t k = 0; k < n; ++k) p[k] = centroid[k] + w * (centroid[k] - pts[n][k]);
      return p;
    };
    const auto xr = blend(1.0);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      const auto xe = blend(2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      const auto xc = fr < vals[n] ? blend(0.5) : blend(-0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (size_t i = 1; i <= n; ++i) {
          for (size_t k = 0; k < n; ++k) pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  sort_simplex();
  res.x = pts[0];
  res.value = vals[0];
  res.iterations = it;
  return res;
}

TrainedModel train(const AnsatzConfig& config, const Dataset& ds, const TrainOptions& opts) {
  if (config.L != ds.L)
    throw std::invalid_argument("train: config and dataset disagree on L");
  const AnsatzEvaluator eval(config, ds, Exec::Serial);
  const int n = config.theta_count();

  struct RestartResult {
    NmResult nm;
  };
  std::vector<RestartResult> results(static_cast<size_t>(opts.restarts));

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::vector<double> x0(static_cast<size_t>(n) + 1);
    for (int i = 0; i < n; ++i) x0[static_cast<size_t>(i)] = angle(rng);
    x0.back() = 1.0;
    auto objective = [&](const std::vector<double>& p) {
      return eval.loss_joint(p, opts.alpha);
    };
    results[static_cast<size_t>(r)].nm = nelder_mead(objective, x0, opts.nm);
  }

  int best = 0;
  for (int r = 1; r < opts.restarts; ++r)
    if (results[static_cast<size_t>(r)].nm.value < results[static_cast<size_t>(best)].nm.value)
      best = r;
  if (opts.log_restarts) {
    for (int r = 0; r < opts.restarts; ++r)
      std::cerr << "restart " << r << ": loss " << results[static_cast<size_t>(r)].nm.value
                << " (" << results[static_cast<size_t>(r)].nm.reason << ", "
                << results[static_cast<size_t>(r)].nm.iterations << " iterations)\n";
  }

  const auto& win = results[static_cast<size_t>(best)].nm;
  TrainedModel model;
  model.config = config;
  model.theta.assign(win.x.begin(), win.x.end() - 1);
  model.a = win.x.back();
  model.d = ds.d;
  model.delta = ds.delta;
  model.final_loss = win.value;
  model.alpha = opts.alpha;
  model.dataset_hash = ds.hash();
  std::ostringstream os;
  os << "nelder-mead restarts=" << opts.restarts << " seed=" << opts.seed
     << " ftol=" << opts.nm.ftol << " maxiter=" << opts.nm.maxiter
     << " step=" << opts.nm.step;
  model.optimizer_settings = os.str();
  if (model.a < 0.9 || model.a > 1.1)
    std::cerr << "warning: trained scale factor a = " << model.a
              << " lies outside [0.9, 1.1]\n";
  return model;
}

double predict(const TrainedModel& model, double x, const ObservableSum& obs) {
  const StateVector psi =
      run_ideal(learned_circuit(model, x), StateVector::zero_state(model.config.L));
  return model.a * expectation(psi, obs);
}

double predict_noisy(const TrainedModel& model, double x, const ObservableSum& obs,
                     const NoiseSpec& noise) {
  const DensityMatrix rho = run_noisy(learned_circuit(model, x),
                                      DensityMatrix::zero_state(model.config.L), noise);
  return model.a * expectation(rho, obs);
}

double fidelity_vs_exact(const TrainedModel& model, double x, int d, double delta) {
  const ModelSpec spec{model.config.L, delta, 1.0};
  const StateVector exact = evolve_exact(spec, x, d);
  const StateVector out =
      run_ideal(learned_circuit(model, x), StateVector::zero_state(model.config.L));
  return fidelity_overlap(out, exact);
}

namespace {

constexpr int kModelFormatVersion = 1;

std::string hash_to_hex(std::uint64_t h) {
  std::ostringstream os;
  os << "0x" << std::hex << h;
  return os.str();
}

std::uint64_t hex_to_hash(const std::string& s) {
  if (s.rfind("0x", 0) != 0) throw std::invalid_argument("model: bad dataset_hash");
  return std::stoull(s.substr(2), nullptr, 16);
}

} // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["L"] = model.config.L;
  j["D"] = model.config.D;
  j["d"] = model.d;
  j["delta"] = model.delta;
  j["T"] = model.config.T;
  j["seed"] = model.config.seed;
  j["couplings"] = model.config.couplings;
  j["theta"] = model.theta;
  j["a"] = model.a;
  j["final_loss"] = model.final_loss;
  j["alpha"] = model.alpha;
  j["dataset_hash"] = hash_to_hex(model.dataset_hash);
  j["optimizer_settings"] = model.optimizer_settings;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_model: cannot open " + path);
  os << j.dump(2) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_model: cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_model: parse error in " + path + ": " + e.what());
  }
  if (!j.contains("format_version") || !j["format_version"].is_number_integer())
    throw std::runtime_error("load_model: missing format_version");
  if (j["format_version"].get<int>() != kModelFormatVersion)
    throw std::runtime_error("load_model: unsupported format version " +
                             std::to_string(j["format_version"].get<int>()));
  TrainedModel m;
  m.config.L = j.at("L").get<int>();
  m.config.D = j.at("D").get<int>();
  m.config.T = j.at("T").get<double>();
  m.config.seed = j.at("seed").get<std::uint64_t>();
  m.config.couplings = j.at("couplings").get<std::vector<double>>();
  m.theta = j.at("theta").get<std::vector<double>>();
  m.a = j.at("a").get<double>();
  m.d = j.at("d").get<int>();
  m.delta = j.at("delta").get<double>();
  m.final_loss = j.at("final_loss").get<double>();
  m.alpha = j.at("alpha").get<std::array<double, 5>>();
  m.dataset_hash = hex_to_hash(j.at("dataset_hash").get<std::string>());
  m.optimizer_settings = j.value("optimizer_settings", "");
  if (static_cast<int>(m.theta.size()) != m.config.theta_count())
    throw std::runtime_error("load_model: theta length does not match 3*L*D");
  if (static_cast<int>(m.config.couplings.size()) != m.config.pair_count())
    throw std::runtime_error("load_model: coupling count does not match L(L-1)/2");
  if (m.a < 0.9 || m.a > 1.1)
    std::cerr << "warning: loaded scale factor a = " << m.a << " lies outside [0.9, 1.1]\n";
  return m;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_dataset: cannot open " + path);
  os << ds.to_text();
}

Dataset load_dataset(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_dataset: cannot open " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return Dataset::from_text(buf.str());
}

} // namespace qsim
