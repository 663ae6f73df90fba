#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uamcts/rng.hpp"

namespace uamcts::nn {

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // row-major, outputs x inputs
  std::vector<double> biases;

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out)
      : inputs(in), outputs(out), weights(in * out, 0.0), biases(out, 0.0) {}

  double& w(std::size_t o, std::size_t i) { return weights[o * inputs + i]; }
  double w(std::size_t o, std::size_t i) const { return weights[o * inputs + i]; }

  bool operator==(const DenseLayer&) const = default;
};

// Fully connected network: ReLU on hidden layers, identity on the output.
// With no hidden layers it is a plain affine map.
class DenseNetwork {
 public:
  DenseNetwork() = default;
  // All parameters zero.
  explicit DenseNetwork(std::vector<std::size_t> sizes);
  // He-style scaled uniform initialization: U(-sqrt(6/fan_in), sqrt(6/fan_in)), zero biases.
  DenseNetwork(std::vector<std::size_t> sizes, Rng& rng);

  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t parameter_count() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  std::vector<double> forward(std::span<const double> input) const;

  // Flat view in layer order: weights then biases per layer.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);

  bool operator==(const DenseNetwork&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<DenseLayer> layers_;
};

// Gradient storage with the same shapes as the network.
struct Gradients {
  std::vector<DenseLayer> layers;

  std::vector<double> flat() const;
};

struct Sample {
  std::vector<double> input;
  std::vector<double> target;
};

struct LossAndGradients {
  double loss = 0.0;
  Gradients gradients;
};

// loss = mean over the batch of the squared error summed over output dims.
LossAndGradients mse_loss_and_gradients(const DenseNetwork& net, std::span<const Sample> batch);
double mse_loss(const DenseNetwork& net, std::span<const Sample> batch);

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  bool update_biases = true;  // false keeps every bias at its current value
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  AdamState() = default;
  AdamState(const DenseNetwork& net, double lr);
};

void adam_step(DenseNetwork& net, const Gradients& grads, AdamState& state);

// Append-only regression buffer.
using RegressionBuffer = std::vector<Sample>;

// `steps` Adam updates, each on a batch drawn without replacement (the whole
// buffer when it holds fewer than batch_size samples).
void train(DenseNetwork& net, AdamState& adam, const RegressionBuffer& buffer, int steps,
           std::size_t batch_size, Rng& rng);

// Binary format: one JSON header line {"format":"uamcts-dense","version":1,"sizes":[...]}
// followed by little-endian float64 parameters in layer order (weights
// row-major, then biases).
void save(const DenseNetwork& net, std::ostream& out);
DenseNetwork load(std::istream& in);

}  // namespace uamcts::nn
