#include "xrsched/env/queue.hpp"

#include <algorithm>
#include <stdexcept>

namespace xrsched {

UserQueue::UserQueue(int deadline) {
  if (deadline < 1) throw std::invalid_argument("queue: deadline must be >= 1");
  slots.resize(static_cast<std::size_t>(deadline));
}

std::int64_t UserQueue::backlog_bits() const {
  std::int64_t total = 0;
  for (const auto& s : slots) total += s.remaining_bits;
  return total;
}

ServiceOutcome queue_step(UserQueue& q, std::int64_t budget_bits,
                          std::int64_t arrival_bits) {
  if (budget_bits < 0 || arrival_bits < 0) {
    throw std::invalid_argument("queue: negative bits");
  }
  ServiceOutcome out;
  // Serve in arrival order: oldest slot first.
  std::int64_t budget = budget_bits;
  for (auto it = q.slots.rbegin(); it != q.slots.rend() && budget > 0; ++it) {
    const std::int64_t take = std::min(it->remaining_bits, budget);
    it->remaining_bits -= take;
    budget -= take;
    out.served_bits += take;
  }
  // Age the ledger; the oldest entry exits.
  PacketSlot expired = q.slots.back();
  out.packet_exited = expired.size_bits > 0;
  out.dropped_bits = expired.remaining_bits;
  out.dropout = expired.remaining_bits > 0;
  for (std::size_t i = q.slots.size() - 1; i > 0; --i) q.slots[i] = q.slots[i - 1];
  q.slots[0] = PacketSlot{arrival_bits, arrival_bits};
  return out;
}

}  // namespace xrsched
