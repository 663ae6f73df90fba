#include "uamcts/neuralnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace uamcts::nn {

namespace {

void check_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("network needs input and output sizes");
  for (auto s : sizes) {
    if (s == 0) throw std::invalid_argument("layer sizes must be positive");
  }
}

struct Cache {
  // activations[0] is the input; activations[l+1] is the output of layer l
  // (post-ReLU for hidden layers).
  std::vector<std::vector<double>> activations;
};

void layer_forward(const DenseLayer& layer, const std::vector<double>& in, std::vector<double>& out,
                   bool relu, std::vector<std::size_t>& nonzero) {
  nonzero.clear();
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] != 0.0) nonzero.push_back(i);
  }
  out.assign(layer.outputs, 0.0);
  for (std::size_t o = 0; o < layer.outputs; ++o) {
    const double* row = &layer.weights[o * layer.inputs];
    double acc = layer.biases[o];
    for (auto i : nonzero) acc += row[i] * in[i];
    out[o] = relu && acc < 0.0 ? 0.0 : acc;
  }
}

Cache forward_cached(const DenseNetwork& net, std::span<const double> input) {
  if (input.size() != net.input_size()) {
    throw std::invalid_argument("forward: expected input of size " + std::to_string(net.input_size()) +
                                ", got " + std::to_string(input.size()));
  }
  Cache cache;
  const auto& layers = net.layers();
  cache.activations.resize(layers.size() + 1);
  cache.activations[0].assign(input.begin(), input.end());
  std::vector<std::size_t> nonzero;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const bool hidden = l + 1 < layers.size();
    layer_forward(layers[l], cache.activations[l], cache.activations[l + 1], hidden, nonzero);
  }
  return cache;
}

Gradients zero_gradients(const DenseNetwork& net) {
  Gradients g;
  for (const auto& layer : net.layers()) g.layers.emplace_back(layer.inputs, layer.outputs);
  return g;
}

std::uint64_t to_le(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return r;
  }
  return x;
}

}  // namespace

DenseNetwork::DenseNetwork(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  check_sizes(sizes_);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) layers_.emplace_back(sizes_[l], sizes_[l + 1]);
}

DenseNetwork::DenseNetwork(std::vector<std::size_t> sizes, Rng& rng) : DenseNetwork(std::move(sizes)) {
  for (auto& layer : layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs));
    for (auto& w : layer.weights) w = (2.0 * rng.uniform() - 1.0) * limit;
  }
}

std::size_t DenseNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

std::vector<double> DenseNetwork::forward(std::span<const double> input) const {
  return std::move(forward_cached(*this, input).activations.back());
}

std::vector<double> DenseNetwork::parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& l : layers_) {
    flat.insert(flat.end(), l.weights.begin(), l.weights.end());
    flat.insert(flat.end(), l.biases.begin(), l.biases.end());
  }
  return flat;
}

void DenseNetwork::set_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("set_parameters: size mismatch");
  std::size_t k = 0;
  for (auto& l : layers_) {
    for (auto& w : l.weights) w = flat[k++];
    for (auto& b : l.biases) b = flat[k++];
  }
}

std::vector<double> Gradients::flat() const {
  std::vector<double> out;
  for (const auto& l : layers) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.biases.begin(), l.biases.end());
  }
  return out;
}

LossAndGradients mse_loss_and_gradients(const DenseNetwork& net, std::span<const Sample> batch) {
  if (batch.empty()) throw std::invalid_argument("mse: empty batch");
  LossAndGradients result{0.0, zero_gradients(net)};
  const auto& layers = net.layers();
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::vector<double> delta;
  std::vector<double> delta_in;

  for (const auto& sample : batch) {
    if (sample.target.size() != net.output_size()) {
      throw std::invalid_argument("mse: target size mismatch");
    }
    const Cache cache = forward_cached(net, sample.input);
    const auto& out = cache.activations.back();
    delta.assign(out.size(), 0.0);
    for (std::size_t o = 0; o < out.size(); ++o) {
      const double r = out[o] - sample.target[o];
      result.loss += r * r * scale;
      delta[o] = 2.0 * r * scale;
    }
    for (std::size_t l = layers.size(); l-- > 0;) {
      const auto& layer = layers[l];
      const auto& in = cache.activations[l];
      auto& g = result.gradients.layers[l];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        g.biases[o] += d;
        double* grow = &g.weights[o * layer.inputs];
        for (std::size_t i = 0; i < layer.inputs; ++i) grow[i] += d * in[i];
      }
      if (l == 0) break;
      delta_in.assign(layer.inputs, 0.0);
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* row = &layer.weights[o * layer.inputs];
        for (std::size_t i = 0; i < layer.inputs; ++i) delta_in[i] += row[i] * d;
      }
      // ReLU derivative of the previous hidden layer (its stored output is
      // post-activation; zero output means inactive).
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        if (in[i] <= 0.0) delta_in[i] = 0.0;
      }
      delta.swap(delta_in);
    }
  }
  return result;
}

double mse_loss(const DenseNetwork& net, std::span<const Sample> batch) {
  if (batch.empty()) throw std::invalid_argument("mse: empty batch");
  double loss = 0.0;
  for (const auto& s : batch) {
    const auto out = net.forward(s.input);
    if (s.target.size() != out.size()) throw std::invalid_argument("mse: target size mismatch");
    for (std::size_t o = 0; o < out.size(); ++o) {
      const double r = out[o] - s.target[o];
      loss += r * r;
    }
  }
  return loss / static_cast<double>(batch.size());
}

AdamState::AdamState(const DenseNetwork& net, double lr)
    : learning_rate(lr), first_moment(net.parameter_count(), 0.0), second_moment(net.parameter_count(), 0.0) {}

void adam_step(DenseNetwork& net, const Gradients& grads, AdamState& state) {
  const std::size_t n = net.parameter_count();
  if (state.first_moment.empty()) {
    state.first_moment.assign(n, 0.0);
    state.second_moment.assign(n, 0.0);
  }
  if (state.first_moment.size() != n || grads.layers.size() != net.layers().size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  std::size_t k = 0;
  auto update = [&](double& param, double g) {
    double& m = state.first_moment[k];
    double& v = state.second_moment[k];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g * g;
    const double m_hat = m / bc1;
    const double v_hat = v / bc2;
    param -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    ++k;
  };
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    auto& layer = net.layers()[l];
    const auto& g = grads.layers[l];
    if (g.weights.size() != layer.weights.size() || g.biases.size() != layer.biases.size()) {
      throw std::invalid_argument("adam_step: shape mismatch");
    }
    for (std::size_t i = 0; i < layer.weights.size(); ++i) update(layer.weights[i], g.weights[i]);
    for (std::size_t i = 0; i < layer.biases.size(); ++i) update(layer.biases[i], state.update_biases ? g.biases[i] : 0.0);
  }
}

void train(DenseNetwork& net, AdamState& adam, const RegressionBuffer& buffer, int steps,
           std::size_t batch_size, Rng& rng) {
  if (steps <= 0) return;
  if (buffer.empty()) throw std::invalid_argument("train: empty buffer");
  if (batch_size == 0) throw std::invalid_argument("train: batch size must be positive");
  const std::size_t n = buffer.size();
  const std::size_t k = std::min(batch_size, n);
  std::vector<std::size_t> picked;
  std::vector<Sample> batch(k);
  for (int s = 0; s < steps; ++s) {
    // Floyd's algorithm: k distinct indices in O(k^2) without touching the buffer.
    picked.clear();
    for (std::size_t j = n - k; j < n; ++j) {
      const std::size_t t = rng.below(j + 1);
      const bool seen = std::find(picked.begin(), picked.end(), t) != picked.end();
      picked.push_back(seen ? j : t);
    }
    for (std::size_t i = 0; i < k; ++i) batch[i] = buffer[picked[i]];
    const auto lg = mse_loss_and_gradients(net, batch);
    adam_step(net, lg.gradients, adam);
  }
}

void save(const DenseNetwork& net, std::ostream& out) {
  nlohmann::json header;
  header["format"] = "uamcts-dense";
  header["version"] = 1;
  header["sizes"] = net.sizes();
  out << header.dump() << '\n';
  for (double p : net.parameters()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &p, sizeof bits);
    bits = to_le(bits);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  if (!out) throw std::runtime_error("save: write failed");
}

DenseNetwork load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load: missing header");
  const auto header = nlohmann::json::parse(line);
  if (header.value("format", "") != "uamcts-dense" || header.value("version", 0) != 1) {
    throw std::runtime_error("load: unsupported format");
  }
  DenseNetwork net(header.at("sizes").get<std::vector<std::size_t>>());
  std::vector<double> flat(net.parameter_count());
  for (auto& p : flat) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), sizeof bits);
    if (!in) throw std::runtime_error("load: truncated parameter block");
    bits = to_le(bits);
    std::memcpy(&p, &bits, sizeof p);
  }
  net.set_parameters(flat);
  return net;
}

}  // namespace uamcts::nn
