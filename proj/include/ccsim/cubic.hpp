#pragma once

#include <cmath>

#include "ccsim/cca.hpp"

namespace ccsim {

// Cubic with slow start and the cubic growth function. The TCP-friendly
// (Reno-emulation) region is omitted: at the operating points exercised here
// the cubic region dominates.
class Cubic : public CongestionController {
 public:
  explicit Cubic(const CcaConfig& cfg);

  std::string_view name() const override { return "cubic"; }
  void on_ack(const AckEvent& ev, const FlowState& fs) override;
  void on_loss_declared(SimTime now, uint64_t lost_bytes, const FlowState& fs) override;
  void on_rto(SimTime now, const FlowState& fs) override;
  uint64_t cwnd_bytes() const override;
  double pacing_bytes_per_sec() const override;
  CcaTelemetry telemetry() const override;

  // W(t) = C*(t-K)^3 + w_max, in packets, floored at 2.
  static double window_at(double w_max_pkts, double c, double beta, double t_since_epoch_s);
  static double epoch_k_seconds(double w_max_pkts, double c, double beta);

  double cwnd_packets() const { return cwnd_pkts_; }
  double w_max_packets() const { return w_max_pkts_; }
  bool in_slow_start() const { return in_slow_start_; }

 private:
  void reduce_on_loss(SimTime now);

  uint32_t mss_;
  double c_ = 0.4;
  double beta_ = 0.7;
  double cwnd_pkts_ = 10.0;
  double ssthresh_pkts_ = 1e12;
  double w_max_pkts_ = 0.0;
  bool in_slow_start_ = true;
  bool epoch_valid_ = false;
  SimTime epoch_start_;
  SimTime last_reduction_;
  bool has_reduction_ = false;
  Duration srtt_hint_ = Duration::millis(100);
};

}  // namespace ccsim
