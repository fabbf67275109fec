#pragma once

#include <algorithm>

#include "ccsim/sim_time.hpp"
#include "ccsim/windowed_filter.hpp"

namespace ccsim {

// SRTT/RTTVAR with Jacobson gains (1/8, 1/4), a windowed min-RTT filter, and
// round-scoped minima. A "round" is delimited by the transport (an ACK for
// data sent after the previous round's end marker).
class RttEstimator {
 public:
  explicit RttEstimator(Duration min_rtt_window = Duration::seconds(10))
      : min_window_(min_rtt_window.ns()) {}

  // rtt <= 0 is rejected and the sample dropped.
  bool on_sample(Duration rtt, SimTime now) {
    if (rtt <= Duration()) return false;
    latest_ = rtt;
    if (!has_sample_) {
      srtt_ = rtt;
      rttvar_ = Duration::nanos(rtt.ns() / 2);
      has_sample_ = true;
    } else {
      // RFC 6298 ordering: rttvar before srtt.
      int64_t err = std::abs(srtt_.ns() - rtt.ns());
      rttvar_ = Duration::nanos((3 * rttvar_.ns() + err) / 4);
      srtt_ = Duration::nanos((7 * srtt_.ns() + rtt.ns()) / 8);
    }
    min_window_.update(rtt.ns(), now.ns());
    if (!has_round_min_ || rtt < min_curr_round_) {
      min_curr_round_ = rtt;
      has_round_min_ = true;
    }
    return true;
  }

  void on_round_start() {
    if (has_round_min_) {
      min_prev_round_ = min_curr_round_;
      has_prev_round_min_ = true;
    }
    has_round_min_ = false;
  }

  bool has_sample() const { return has_sample_; }
  Duration latest() const { return latest_; }
  Duration srtt() const { return srtt_; }
  Duration rttvar() const { return rttvar_; }
  Duration windowed_min_rtt() const { return Duration::nanos(min_window_.current()); }

  bool has_min_current_round() const { return has_round_min_; }
  Duration min_rtt_current_round() const { return min_curr_round_; }
  bool has_min_previous_round() const { return has_prev_round_min_; }
  Duration min_rtt_previous_round() const { return min_prev_round_; }

 private:
  MinFilter<int64_t> min_window_;
  Duration latest_;
  Duration srtt_;
  Duration rttvar_;
  Duration min_curr_round_;
  Duration min_prev_round_;
  bool has_sample_ = false;
  bool has_round_min_ = false;
  bool has_prev_round_min_ = false;
};

}  // namespace ccsim
