#pragma once

#include <span>
#include <vector>

namespace uamcts::stats {

double mean(std::span<const double> xs);
// Population standard deviation.
double stddev(std::span<const double> xs);

// Trailing box average; out[i] is the mean of xs[i-window+1..i] and is only
// defined from index window-1 on, so the result has xs.size()-window+1 entries
// (empty when the series is shorter than the window).
std::vector<double> moving_average(std::span<const double> xs, std::size_t window);

struct PairedTest {
  double mean_difference = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// One-sided paired t-test of H1: mean(a - b) > 0. With zero variance of the
// differences the p-value is 0 for a positive mean difference and 1 otherwise.
PairedTest paired_t_greater(std::span<const double> a, std::span<const double> b);

}  // namespace uamcts::stats
