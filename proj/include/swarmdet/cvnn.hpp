#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmdet/datagen.hpp"
#include "swarmdet/signal.hpp"

namespace swarmdet {

// Hybrid real/complex autoencoder: complex linear layer -> modReLU ->
// real-part projection -> real linear layer -> sigmoid. Input and output
// both span the m range bins of a profile.
struct NetworkParams {
  std::size_t m = 0;       // profile length (input and output width)
  std::size_t hidden = 0;  // complex hidden units

  std::vector<cplx> w1;              // hidden x m, row-major
  std::vector<cplx> b1;              // hidden
  std::vector<double> modrelu_bias;  // hidden
  std::vector<double> w2;            // m x hidden, row-major
  std::vector<double> b2;            // m
};

// Gaussian init: complex entries get independent re/im with std 1/sqrt(2*fan_in),
// the real layer std 1/sqrt(fan_in); biases start at zero.
NetworkParams init_params(std::size_t m, std::size_t hidden, std::uint64_t seed);

// ReLU(|z| + bias) * z/|z|; zero in the dead region and at z == 0.
cplx modrelu(cplx z, double bias);

struct ForwardCache {
  std::vector<cplx> x;    // input
  std::vector<cplx> z;    // w1*x + b1
  std::vector<double> r;  // Re(modrelu(z))
  std::vector<double> y;  // sigmoid output
};

void forward(const NetworkParams& p, std::span<const cplx> x, ForwardCache& cache);
void forward(const NetworkParams& p, std::span<const cplxf> x, ForwardCache& cache);

// (1/m) * sum_i w_i * (y_i - label_i)^2 with w_i = positive_weight on target bins.
double weighted_mse(std::span<const double> y, std::span<const std::uint8_t> labels,
                    double positive_weight);

struct Gradients {
  std::size_t m = 0;
  std::size_t hidden = 0;
  std::vector<cplx> w1;
  std::vector<cplx> b1;
  std::vector<double> modrelu_bias;
  std::vector<double> w2;
  std::vector<double> b2;

  static Gradients zeros_like(const NetworkParams& p);
};

// Exact gradients of weighted_mse under the convention that complex parameter
// gradients are conjugate Wirtinger derivatives, i.e. the re/im parts are the
// plain real gradients, so a step against them descends. The modReLU dead
// zone and the |z|+bias kink both propagate zero.
void backward(const NetworkParams& p, const ForwardCache& cache,
              std::span<const std::uint8_t> labels, double positive_weight,
              Gradients& out);

// Flat real-valued views over parameters or gradients, in declaration order
// (complex entries expose re,im consecutively). Used by Adam and by the
// finite-difference checks.
std::vector<std::span<double>> param_views(NetworkParams& p);
std::vector<std::span<double>> grad_views(Gradients& g);
std::size_t dof_count(const NetworkParams& p);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<double> m1;  // one slot per real degree of freedom
  std::vector<double> m2;

  static AdamState for_params(const NetworkParams& p);
};

void adam_step(AdamState& state, NetworkParams& p, Gradients& g, double lr);

struct TrainConfig {
  std::uint32_t epochs = 100;
  std::uint32_t batch = 512;
  double lr0 = 1e-3;
  std::uint32_t lr_half_every = 20;  // epochs between halvings
  double pos_weight = 10.0;
  double threshold = 0.5;
  std::uint32_t hidden_width = 256;
  std::uint64_t seed = 1;
  std::uint32_t exclusion_window = 199;  // for validation pd/pfa
  int threads = 0;
};

struct EpochStats {
  double lr = 0.0;
  double train_loss = 0.0;
  std::optional<double> valid_loss;
  std::optional<double> valid_pd;
  std::optional<double> valid_pfa;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_valid_epoch = static_cast<std::size_t>(-1);
};

// Mini-batch Adam over the shuffled training set; the learning rate halves
// every lr_half_every epochs. Deterministic for a fixed config, including
// across thread counts. valid may be null.
NetworkParams train(const Dataset& train_set, const Dataset* valid, const TrainConfig& cfg,
                    TrainHistory* history = nullptr);

std::vector<std::uint8_t> detect(const NetworkParams& p, std::span<const cplxf> x,
                                 double threshold);

// "RPNN" checkpoint container; bit-exact round-trip.
void save_model(const std::string& path, const NetworkParams& p);
NetworkParams load_model(const std::string& path);

}  // namespace swarmdet
