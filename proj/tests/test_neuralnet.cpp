#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "uamcts/neuralnet.hpp"

using namespace uamcts;
using namespace uamcts::nn;

namespace {

std::vector<Sample> random_batch(Rng& rng, std::size_t n, std::size_t in, std::size_t out) {
  std::vector<Sample> b(n);
  for (auto& s : b) {
    s.input.resize(in);
    s.target.resize(out);
    for (auto& x : s.input) x = 2.0 * rng.uniform() - 1.0;
    for (auto& y : s.target) y = 2.0 * rng.uniform() - 1.0;
  }
  return b;
}

// Largest relative error between analytic and central-difference gradients.
double gradient_error(DenseNetwork net, std::span<const Sample> batch) {
  const auto analytic = mse_loss_and_gradients(net, batch).gradients.flat();
  auto p = net.parameters();
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double keep = p[i];
    p[i] = keep + h;
    net.set_parameters(p);
    const double up = mse_loss(net, batch);
    p[i] = keep - h;
    net.set_parameters(p);
    const double down = mse_loss(net, batch);
    p[i] = keep;
    net.set_parameters(p);
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
    worst = std::max(worst, std::abs(numeric - analytic[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("forward") {
  SUBCASE("zero network") {
    DenseNetwork net({3, 5, 2});
    const auto y = net.forward(std::vector<double>{1.0, -2.0, 3.0});
    CHECK(y == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("no hidden layer is affine") {
    DenseNetwork net({2, 2});
    auto& l = net.layers()[0];
    l.w(0, 0) = 1.0;
    l.w(0, 1) = 2.0;
    l.w(1, 0) = -1.0;
    l.w(1, 1) = 0.5;
    l.biases = {0.25, -1.0};
    const auto y = net.forward(std::vector<double>{3.0, 4.0});
    CHECK(y[0] == 11.25);
    CHECK(y[1] == -2.0);
  }
  SUBCASE("relu blocks negative pre-activations") {
    DenseNetwork net({1, 1, 1});
    net.layers()[0].w(0, 0) = 1.0;
    net.layers()[1].w(0, 0) = 1.0;
    CHECK(net.forward(std::vector<double>{-2.0})[0] == 0.0);
    CHECK(net.forward(std::vector<double>{2.0})[0] == 2.0);
  }
  SUBCASE("shape mismatch") {
    DenseNetwork net({3, 1});
    CHECK_THROWS_AS(net.forward(std::vector<double>{1.0}), std::invalid_argument);
  }
  SUBCASE("initialization range") {
    Rng rng(1);
    DenseNetwork net({24, 16, 1}, rng);
    const double bound = std::sqrt(6.0 / 24.0);
    for (double w : net.layers()[0].weights) CHECK(std::abs(w) <= bound);
    for (double b : net.layers()[0].biases) CHECK(b == 0.0);
    CHECK(net.parameter_count() == 24 * 16 + 16 + 16 + 1);
  }
}

TEST_CASE("gradients match central differences") {
  Rng rng(2024);
  for (const auto& sizes : std::vector<std::vector<std::size_t>>{{4, 8, 1}, {4, 8, 8, 1}, {5, 3}, {3, 6, 2}}) {
    for (int rep = 0; rep < 10; ++rep) {
      DenseNetwork net(sizes, rng);
      for (auto& l : net.layers()) {
        for (auto& b : l.biases) b = 0.2 * rng.uniform() - 0.1;
      }
      const auto batch = random_batch(rng, 8, sizes.front(), sizes.back());
      CHECK(gradient_error(net, batch) < 1e-4);
    }
  }
}

TEST_CASE("loss properties") {
  Rng rng(5);
  DenseNetwork net({3, 4, 2}, rng);
  auto batch = random_batch(rng, 6, 3, 2);
  SUBCASE("perfect targets") {
    for (auto& s : batch) s.target = net.forward(s.input);
    const auto lg = mse_loss_and_gradients(net, batch);
    CHECK(lg.loss == 0.0);
    for (double g : lg.gradients.flat()) CHECK(g == 0.0);
  }
  SUBCASE("doubling residuals quadruples the loss") {
    auto doubled = batch;
    for (auto& s : doubled) {
      const auto y = net.forward(s.input);
      for (std::size_t j = 0; j < y.size(); ++j) s.target[j] = y[j] + 2.0 * (s.target[j] - y[j]);
    }
    CHECK(mse_loss(net, doubled) == doctest::Approx(4.0 * mse_loss(net, batch)).epsilon(1e-12));
  }
  SUBCASE("non-negative and mean over the batch") {
    CHECK(mse_loss(net, batch) >= 0.0);
    std::vector<Sample> twice = batch;
    twice.insert(twice.end(), batch.begin(), batch.end());
    CHECK(mse_loss(net, twice) == doctest::Approx(mse_loss(net, batch)).epsilon(1e-12));
  }
  SUBCASE("empty batch") { CHECK_THROWS(mse_loss_and_gradients(net, std::span<const Sample>{})); }
}

TEST_CASE("adam") {
  SUBCASE("zero gradient") {
    Rng rng(3);
    DenseNetwork net({2, 3, 1}, rng);
    const auto before = net.parameters();
    AdamState st(net, 1e-3);
    st.first_moment.assign(st.first_moment.size(), 0.5);
    st.second_moment.assign(st.second_moment.size(), 0.5);
    Gradients g = mse_loss_and_gradients(net, random_batch(rng, 1, 2, 1)).gradients;
    for (auto& l : g.layers) {
      std::fill(l.weights.begin(), l.weights.end(), 0.0);
      std::fill(l.biases.begin(), l.biases.end(), 0.0);
    }
    // Parameters move only through the decaying first moment; with it zero they stay.
    AdamState fresh(net, 1e-3);
    adam_step(net, g, fresh);
    CHECK(net.parameters() == before);
    CHECK(fresh.step == 1);
    adam_step(net, g, st);
    CHECK(st.first_moment[0] == doctest::Approx(0.45));
    CHECK(st.second_moment[0] == doctest::Approx(0.4995));
  }
  SUBCASE("first step is lr times the gradient sign") {
    Rng rng(4);
    DenseNetwork net({3, 2}, rng);
    const auto batch = random_batch(rng, 4, 3, 2);
    const auto g = mse_loss_and_gradients(net, batch).gradients.flat();
    const auto before = net.parameters();
    AdamState st(net, 1e-3);
    adam_step(net, mse_loss_and_gradients(net, batch).gradients, st);
    const auto after = net.parameters();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double expected = -1e-3 * g[i] / (std::abs(g[i]) + 1e-8);
      CHECK(std::abs((after[i] - before[i]) - expected) < 1e-9);
    }
  }
  SUBCASE("quadratic bowl") {
    // f(w) = w.w as a one-output linear net: output = b, target 0, single zero input.
    DenseNetwork net({1, 1});
    net.layers()[0].biases[0] = 0.3;
    const std::vector<Sample> batch{{{0.0}, {0.0}}};
    AdamState st(net, 1e-3);
    const double start = 0.3;
    double prev = start;
    for (int i = 0; i < 500; ++i) {
      adam_step(net, mse_loss_and_gradients(net, batch).gradients, st);
      const double now = std::abs(net.layers()[0].biases[0]);
      if (i > 10) CHECK(now <= prev);
      prev = now;
    }
    CHECK(prev < 0.1 * start);
  }
}

TEST_CASE("train") {
  SUBCASE("zero steps leave the network alone") {
    Rng rng(1);
    DenseNetwork net({2, 4, 1}, rng);
    const auto copy = net;
    AdamState st(net, 1e-3);
    train(net, st, random_batch(rng, 10, 2, 1), 0, 4, rng);
    CHECK(net == copy);
  }
  SUBCASE("xor with eight hidden units") {
    const RegressionBuffer xor_data{{{0, 0}, {0}}, {{0, 1}, {1}}, {{1, 0}, {1}}, {{1, 1}, {0}}};
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      DenseNetwork net({2, 8, 1}, rng);
      AdamState st(net, 1e-2);
      train(net, st, xor_data, 5000, 4, rng);
      solved += mse_loss(net, xor_data) < 1e-2;
    }
    CHECK(solved == 10);
  }
  SUBCASE("one-hot linear target is fitted exactly") {
    RegressionBuffer data;
    for (int i = 0; i < 6; ++i) {
      Sample s{std::vector<double>(6, 0.0), {0.5 * i - 1.0}};
      s.input[static_cast<std::size_t>(i)] = 1.0;
      data.push_back(s);
    }
    Rng rng(7);
    DenseNetwork net({6, 1}, rng);
    AdamState st(net, 1e-2);
    train(net, st, data, 5000, 4, rng);
    CHECK(mse_loss(net, data) < 1e-6);
  }
  SUBCASE("deterministic for a seed") {
    auto run = [] {
      Rng rng(9);
      DenseNetwork net({3, 5, 1}, rng);
      AdamState st(net, 1e-3);
      const auto data = random_batch(rng, 50, 3, 1);
      train(net, st, data, 300, 16, rng);
      return net;
    };
    CHECK(run() == run());
  }
}

TEST_CASE("save and load") {
  Rng rng(6);
  DenseNetwork net({4, 3, 2}, rng);
  std::stringstream buf;
  save(net, buf);
  std::string header;
  std::getline(std::istringstream(buf.str()) >> std::ws, header);
  CHECK(header.find("\"format\":\"uamcts-dense\"") != std::string::npos);
  CHECK(header.find("\"sizes\":[4,3,2]") != std::string::npos);
  CHECK(buf.str().size() == header.size() + 1 + 8 * net.parameter_count());
  const DenseNetwork back = load(buf);
  CHECK(back == net);

  std::stringstream broken("{\"format\":\"other\"}\n");
  CHECK_THROWS(load(broken));
}
