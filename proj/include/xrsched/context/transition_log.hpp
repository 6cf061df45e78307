#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <deque>

#include "xrsched/nets/gaussian.hpp"

namespace xrsched {

// Rolling store of encoder inputs (s, a, s') with stable global indices, plus
// a per-transition cache of the factor net's output under the collection
// snapshot of the encoder parameters. Old entries are dropped by compact();
// indices keep counting from the start of the run.
class TransitionLog {
 public:
  std::int64_t append(Eigen::VectorXd encoder_input);

  std::int64_t end() const { return base_ + static_cast<std::int64_t>(entries_.size()); }
  std::int64_t begin() const { return base_; }

  const Eigen::VectorXd& input(std::int64_t index) const;

  bool has_cached(std::int64_t index) const;
  void set_cached(std::int64_t index, GaussianFactor factor);
  const GaussianFactor& cached(std::int64_t index) const;
  void invalidate_cache();  // encoder snapshot changed

  // Keep only the newest keep_last transitions.
  void compact(std::int64_t keep_last);

 private:
  struct Entry {
    Eigen::VectorXd input;
    GaussianFactor factor;
    bool cached = false;
  };
  Entry& at(std::int64_t index);
  const Entry& at(std::int64_t index) const;

  std::deque<Entry> entries_;
  std::int64_t base_ = 0;
};

}  // namespace xrsched
