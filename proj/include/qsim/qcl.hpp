#pragma once

#include "qsim/kernels.hpp"
#include "qsim/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace qsim {

struct AnsatzConfig {
  int L = 2;
  int D = 2;
  std::vector<double> couplings; // pair order (0,1),(0,2),...,(j,k) j<k lexicographic
  double T = 1.0;
  std::uint64_t seed = 0;

  // Draws L(L-1)/2 couplings i.i.d. uniform from [-1, 1]; they stay fixed,
  // only the rotation angles and the scale factor are trained.
  static AnsatzConfig make(int L, int D, std::uint64_t seed, double T = 1.0);
  int pair_count() const { return L * (L - 1) / 2; }
  int theta_count() const { return 3 * L * D; }
};

struct TrainedModel {
  AnsatzConfig config;
  std::vector<double> theta;
  double a = 1.0;
  int d = 0;
  double delta = 0.1;
  double final_loss = 0.0;
  std::array<double, 5> alpha{2, 1, 1, 1, 3};
  std::uint64_t dataset_hash = 0;
  std::string optimizer_settings;
};

// Targets ordered Z1, Ztot, Xtot, Ytot, H.
struct Dataset {
  std::vector<double> xs;
  std::array<std::vector<double>, 5> targets;
  int L = 2;
  int d = 0;
  double delta = 0.1;

  std::string to_text() const;
  static Dataset from_text(const std::string& text);
  std::uint64_t hash() const;
};

inline constexpr std::array<const char*, 5> kObservableNames = {"Z1", "Ztot", "Xtot",
                                                                "Ytot", "H"};

// The five loss observables for a chain of length L.
std::array<ObservableSum, 5> loss_observables(const ModelSpec& spec);

// Angle-embedding circuit; all gates are marked as state preparation.
Circuit input_encoding(double x, int L);

Circuit build_ansatz(const AnsatzConfig& config, const std::vector<double>& theta);

// Encoded input evolved by d steps of the chain's evolution layer.
StateVector evolve_exact(const ModelSpec& spec, double x, int d);

// Deep reference circuit: encoding followed by d evolution layers.
Circuit original_circuit(const ModelSpec& spec, double x, int d);

// Shallow surrogate: encoding followed by the trained ansatz.
Circuit learned_circuit(const TrainedModel& model, double x);

Dataset gen_dataset(const ModelSpec& spec, int d, int M);

// Grid-parallel evaluator used by the loss, train and the CLI sweeps.
class AnsatzEvaluator {
 public:
  AnsatzEvaluator(const AnsatzConfig& config, const Dataset& ds, Exec ex = Exec::Serial);

  // Raw expectations of the five observables at grid point i.
  std::array<double, 5> predictions(const std::vector<double>& theta, int i) const;
  double loss(const std::vector<double>& theta, double a,
              const std::array<double, 5>& alpha) const;
  // Joint vector layout: [theta..., a].
  double loss_joint(const std::vector<double>& x,
                    const std::array<double, 5>& alpha) const;
  int grid_size() const { return static_cast<int>(ds_.xs.size()); }

 private:
  AnsatzConfig config_;
  Dataset ds_;
  std::array<ObservableSum, 5> obs_;
  std::vector<Vec> psi_in_;
  Exec exec_;
};

double loss(const std::vector<double>& theta, double a, const Dataset& ds,
            const std::array<double, 5>& alpha, const AnsatzConfig& config);

struct NmOptions {
  double ftol = 1e-6;
  long maxiter = 20000;
  double step = 0.25; // initial simplex offset per coordinate
};

struct NmResult {
  std::vector<double> x;
  double value = 0.0;
  long iterations = 0;
  std::string reason; // "ftol" or "maxiter"
};

// Simplex search with coefficients: reflect 1, expand 2, contract 0.5,
// shrink 0.5. Stops when max-min value spread inside the simplex drops
// below ftol.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                     const std::vector<double>& x0, const NmOptions& opts);

struct TrainOptions {
  int restarts = 8;
  std::uint64_t seed = 1000; // restart r uses stream seed + r
  NmOptions nm;
  std::array<double, 5> alpha{2, 1, 1, 1, 3};
  bool log_restarts = false;
};

TrainedModel train(const AnsatzConfig& config, const Dataset& ds, const TrainOptions& opts);

double predict(const TrainedModel& model, double x, const ObservableSum& obs);
double predict_noisy(const TrainedModel& model, double x, const ObservableSum& obs,
                     const NoiseSpec& noise);

double fidelity_vs_exact(const TrainedModel& model, double x, int d, double delta);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace qsim
