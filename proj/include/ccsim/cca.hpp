#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ccsim/packet.hpp"
#include "ccsim/rtt_estimator.hpp"
#include "ccsim/sim_time.hpp"

namespace ccsim {

struct BandwidthSample {
  double bytes_per_sec = 0;
  // Delivered bytes over the sampled packet's flight; the volume analog of
  // the rate sample.
  uint64_t delivered_delta = 0;
  bool app_limited = false;
};

struct AckEvent {
  SimTime now;
  uint64_t newly_acked_bytes = 0;
  std::optional<Duration> rtt_sample;
  std::optional<BandwidthSample> bw_sample;
  uint32_t losses_declared = 0;
  bool round_start = false;
};

// Read-only flow context handed to every controller callback.
struct FlowState {
  SimTime now;
  uint64_t inflight_bytes = 0;
  uint64_t delivered_bytes = 0;
  uint64_t round_count = 0;
  double loss_rate_curr_round = 0;
  double loss_rate_prev_round = 0;
  uint32_t losses_prev_round = 0;
  uint32_t mss = kDefaultMss;
  const RttEstimator* rtt = nullptr;
};

struct CcaTelemetry {
  std::string state = "-";
  double pacing_gain = 1.0;
  double btlbw_bytes_per_sec = 0;
  Duration rtprop{};
  std::string probe_bw_mode = "-";
  double minrtt_curr_cruise_ms = 0;
  double max4rtt_jitter_ms = 0;
  double compensated_bdp_bytes = 0;
};

struct CcaConfig {
  std::map<std::string, double> params;
  uint64_t seed = 1;
  uint32_t mss = kDefaultMss;

  double get(const std::string& key, double dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  }
};

// Controller contract. The transport invokes the callbacks and reads
// cwnd/pacing after each event; outputs must stay positive.
class CongestionController {
 public:
  virtual ~CongestionController() = default;
  virtual std::string_view name() const = 0;

  virtual void on_packet_sent(const Packet&, const FlowState&) {}
  virtual void on_ack(const AckEvent&, const FlowState&) = 0;
  virtual void on_loss_declared(SimTime, uint64_t /*lost_bytes*/, const FlowState&) {}
  virtual void on_rto(SimTime, const FlowState&) {}
  virtual void on_round_start(const FlowState&) {}

  virtual uint64_t cwnd_bytes() const = 0;
  virtual double pacing_bytes_per_sec() const = 0;
  virtual CcaTelemetry telemetry() const = 0;
};

// Known names: "cubic" | "bbr" | "bbr2" | "bbr2plus". Throws on unknown name.
std::unique_ptr<CongestionController> make_controller(std::string_view name, const CcaConfig& cfg);

}  // namespace ccsim
