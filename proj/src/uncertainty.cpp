#include "uamcts/uncertainty.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace uamcts {

double true_uncertainty(const DeterministicModel& truth, const DeterministicModel& model,
                        const State& state, int action) {
  if (truth.feature_size() != model.feature_size()) {
    throw std::invalid_argument("true_uncertainty: feature length mismatch between models");
  }
  const State predicted = model.step(state, action).next;
  const State actual = truth.step(state, action).next;
  return model.feature_distance_sq(predicted, actual);
}

OracleUncertainty::OracleUncertainty(const DeterministicModel& truth, const DeterministicModel& model,
                                     bool per_dimension)
    : truth_(truth), model_(model), scale_(1.0) {
  if (truth.feature_size() != model.feature_size()) {
    throw std::invalid_argument("oracle uncertainty: feature length mismatch between models");
  }
  if (per_dimension) scale_ = 1.0 / static_cast<double>(model.feature_size());
}

double OracleUncertainty::query(const State& state, int action) const {
  return scale_ * true_uncertainty(truth_, model_, state, action);
}

std::size_t encoded_size(std::size_t feature_size, int num_actions, InputEncoding encoding) {
  const auto a = static_cast<std::size_t>(num_actions);
  return encoding == InputEncoding::concat ? feature_size + a : feature_size * a;
}

std::vector<double> encode_input(std::span<const double> features, int action, int num_actions,
                                 InputEncoding encoding) {
  if (action < 0 || action >= num_actions) throw std::out_of_range("encode_input: bad action");
  std::vector<double> x(encoded_size(features.size(), num_actions, encoding), 0.0);
  if (encoding == InputEncoding::concat) {
    std::copy(features.begin(), features.end(), x.begin());
    x[features.size() + static_cast<std::size_t>(action)] = 1.0;
  } else {
    std::copy(features.begin(), features.end(),
              x.begin() + static_cast<std::ptrdiff_t>(features.size() * static_cast<std::size_t>(action)));
  }
  return x;
}

namespace {

std::vector<std::size_t> layer_sizes(std::size_t in, const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

}  // namespace

LearnedUncertainty::LearnedUncertainty(const DeterministicModel& model, LearnedUncertaintyOptions options,
                                       Rng& init_rng)
    : model_(model),
      options_(std::move(options)),
      net_(options_.hidden.empty()
               ? nn::DenseNetwork(layer_sizes(encoded_size(model.feature_size(), model.num_actions(), options_.encoding), {}))
               : nn::DenseNetwork(layer_sizes(encoded_size(model.feature_size(), model.num_actions(), options_.encoding),
                                              options_.hidden),
                                  init_rng)),
      adam_(net_, options_.learning_rate) {
  adam_.update_biases = options_.fit_bias;
}

double LearnedUncertainty::query_features(std::span<const double> features, int action) const {
  const auto x = encode_input(features, action, model_.num_actions(), options_.encoding);
  return std::max(0.0, net_.forward(x)[0]);
}

double LearnedUncertainty::query(const State& state, int action) const {
  return query_features(model_.features(state), action);
}

void LearnedUncertainty::record(TransitionSample sample) {
  if (sample.target < 0.0) throw std::invalid_argument("record: negative uncertainty target");
  nn::Sample s;
  s.input = encode_input(sample.state, sample.action, model_.num_actions(), options_.encoding);
  s.target = {sample.target};
  buffer_.push_back(std::move(s));
  samples_.push_back(std::move(sample));
}

void LearnedUncertainty::train(int steps, Rng& rng) {
  if (steps <= 0 || buffer_.empty()) return;
  nn::train(net_, adam_, buffer_, steps, options_.batch_size, rng);
  ++rounds_;
}

double LearnedUncertainty::buffer_loss() const {
  return buffer_.empty() ? 0.0 : nn::mse_loss(net_, buffer_);
}

void LearnedUncertainty::export_csv(std::ostream& out) const {
  const std::size_t n = model_.feature_size();
  for (std::size_t i = 0; i < n; ++i) out << 's' << i << ',';
  out << "action,target\n";
  out << std::setprecision(9);
  for (const auto& s : samples_) {
    for (double f : s.state) out << f << ',';
    out << s.action << ',' << s.target << '\n';
  }
}

TauSchedule::TauSchedule(double initial, double floor) : initial_(initial), floor_(floor), tau_(initial) {
  if (!(floor > 0.0) || !(initial >= floor)) throw std::invalid_argument("tau schedule: need initial >= floor > 0");
}

void TauSchedule::decay() { tau_ = std::max(floor_, tau_ / 10.0); }

bool on_env_step(LearnedUncertainty& estimator, TauSchedule& tau, std::int64_t step_counter,
                 const TrainingSchedule& schedule, Rng& rng) {
  if (schedule.period <= 0 || step_counter <= 0 || step_counter % schedule.period != 0) return false;
  estimator.train(schedule.steps, rng);
  tau.decay();
  return true;
}

}  // namespace uamcts
