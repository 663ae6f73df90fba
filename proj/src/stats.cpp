#include "uamcts/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace uamcts::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty series");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

std::vector<double> moving_average(std::span<const double> xs, std::size_t window) {
  if (window == 0) throw std::invalid_argument("moving average window must be positive");
  std::vector<double> out;
  if (xs.size() < window) return out;
  out.reserve(xs.size() - window + 1);
  for (std::size_t i = window - 1; i < xs.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = i + 1 - window; j <= i; ++j) s += xs[j];
    out.push_back(s / static_cast<double>(window));
  }
  return out;
}

PairedTest paired_t_greater(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired test: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("paired test: need at least two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  PairedTest r;
  r.n = n;
  r.mean_difference = mean(d);
  double ss = 0.0;
  for (double x : d) ss += (x - r.mean_difference) * (x - r.mean_difference);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) {
    r.t = r.mean_difference > 0 ? INFINITY : (r.mean_difference < 0 ? -INFINITY : 0.0);
    r.p_value = r.mean_difference > 0 ? 0.0 : 1.0;
    return r;
  }
  r.t = r.mean_difference / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t dist(static_cast<double>(n - 1));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.t));
  return r;
}

}  // namespace uamcts::stats
