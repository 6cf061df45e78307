#pragma once

#include <cstdint>
#include <vector>

namespace xrsched {

// One ledger slot: the packet admitted some number of slots ago. size_bits is
// the original length, remaining_bits what is still unserved. Both zero marks
// an empty slot (no arrival that timeslot). Bits are integers so conservation
// (served + dropped + backlog) holds exactly.
struct PacketSlot {
  std::int64_t size_bits = 0;
  std::int64_t remaining_bits = 0;
};

// Per-user delay ledger: index is packet age, slots[0] the newest arrival,
// slots[deadline-1] the one that expires next.
struct UserQueue {
  explicit UserQueue(int deadline);
  std::vector<PacketSlot> slots;
  std::int64_t backlog_bits() const;
};

struct ServiceOutcome {
  std::int64_t served_bits = 0;
  std::int64_t dropped_bits = 0;
  bool dropout = false;        // a real packet expired with bits unserved
  bool packet_exited = false;  // a real packet reached its deadline this slot
};

// One timeslot of queue dynamics: serve up to budget_bits in arrival order
// (oldest slot first), then age the ledger by one slot (the oldest entry
// exits; unserved bits there count as a dropout), then admit the arrival
// (0 bits = no packet).
ServiceOutcome queue_step(UserQueue& q, std::int64_t budget_bits,
                          std::int64_t arrival_bits);

}  // namespace xrsched
