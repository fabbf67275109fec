#pragma once

#include <cstdint>

#include "ccsim/sim_time.hpp"

namespace ccsim {

inline constexpr uint32_t kDefaultMss = 1500;

struct Packet {
  int flow_id = 0;
  uint64_t seq = 0;
  uint32_t size_bytes = kDefaultMss;
  SimTime sent_time;
  bool is_retransmission = false;
  // Sender's cumulative delivered counter when this copy departed; basis for
  // delivery-rate samples.
  uint64_t delivered_at_send = 0;
  bool app_limited_at_send = false;
};

}  // namespace ccsim
