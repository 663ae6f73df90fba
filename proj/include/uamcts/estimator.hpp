#pragma once

#include "uamcts/model.hpp"

namespace uamcts {

// Maps a transition (s, a) to an estimated uncertainty U^(s, a) >= 0.
class UncertaintyEstimator {
 public:
  virtual ~UncertaintyEstimator() = default;
  virtual double query(const State& state, int action) const = 0;
};

class ZeroUncertainty final : public UncertaintyEstimator {
 public:
  double query(const State&, int) const override { return 0.0; }
};

}  // namespace uamcts
