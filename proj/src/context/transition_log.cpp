#include "xrsched/context/transition_log.hpp"

#include <stdexcept>

namespace xrsched {

std::int64_t TransitionLog::append(Eigen::VectorXd encoder_input) {
  Entry e;
  e.input = std::move(encoder_input);
  entries_.push_back(std::move(e));
  return end() - 1;
}

TransitionLog::Entry& TransitionLog::at(std::int64_t index) {
  if (index < base_ || index >= end()) {
    throw std::out_of_range("transition log: index outside retained range");
  }
  return entries_[static_cast<std::size_t>(index - base_)];
}

const TransitionLog::Entry& TransitionLog::at(std::int64_t index) const {
  return const_cast<TransitionLog*>(this)->at(index);
}

const Eigen::VectorXd& TransitionLog::input(std::int64_t index) const {
  return at(index).input;
}

bool TransitionLog::has_cached(std::int64_t index) const { return at(index).cached; }

void TransitionLog::set_cached(std::int64_t index, GaussianFactor factor) {
  Entry& e = at(index);
  e.factor = std::move(factor);
  e.cached = true;
}

const GaussianFactor& TransitionLog::cached(std::int64_t index) const {
  const Entry& e = at(index);
  if (!e.cached) throw std::logic_error("transition log: factor not cached");
  return e.factor;
}

void TransitionLog::invalidate_cache() {
  for (auto& e : entries_) e.cached = false;
}

void TransitionLog::compact(std::int64_t keep_last) {
  while (static_cast<std::int64_t>(entries_.size()) > keep_last) {
    entries_.pop_front();
    ++base_;
  }
}

}  // namespace xrsched
