#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ccsim/cca.hpp"
#include "ccsim/packet.hpp"
#include "ccsim/rtt_estimator.hpp"

namespace ccsim {

// Cumulative ACK plus the sequence whose arrival triggered it.
struct AckInfo {
  int flow_id = 0;
  uint64_t cum_seq = 0;     // next expected in-order seq
  uint64_t sacked_seq = 0;  // the packet that just arrived
};

struct FlowCounters {
  uint64_t bytes_sent = 0;  // includes retransmissions
  uint64_t bytes_acked = 0;
  uint64_t bytes_retransmitted = 0;
  uint64_t packets_sent = 0;  // includes retransmissions
  uint64_t packets_retransmitted = 0;
  uint64_t packets_declared_lost = 0;
  uint64_t stale_acks = 0;
  uint64_t rto_fires = 0;
};

// Reliable in-order packet stream: pacing, cwnd enforcement, dup-ACK and RTO
// loss detection, retransmission, RTT and delivery-rate sampling. Holds both
// sender and receiver endpoint state; the simulator moves packets between
// them. Single-threaded.
class TransportFlow {
 public:
  TransportFlow(int id, std::unique_ptr<CongestionController> cca,
                uint32_t mss = kDefaultMss,
                Duration min_rtt_window = Duration::seconds(10));

  // Emits as many departures as pacing and cwnd allow at `now`.
  // Retransmissions take priority over new data.
  std::vector<Packet> maybe_send(SimTime now);

  // Next instant maybe_send could emit (pacing gate), or SimTime::max() when
  // blocked on cwnd/app data (an ACK will unblock).
  SimTime next_send_opportunity(SimTime now) const;

  void on_ack(const AckInfo& ack, SimTime now);

  std::optional<SimTime> rto_deadline() const;
  void on_rto_timer(SimTime now);

  // Receiver endpoint: per-packet ACKs, no delayed ACK.
  AckInfo receiver_on_data(const Packet& pkt);

  // Application model: sender is backlogged by default.
  void set_app_backlog_bytes(uint64_t bytes) { app_backlog_ = bytes; }
  void add_app_backlog_bytes(uint64_t bytes) { app_backlog_ += bytes; }

  double loss_rate_current_round() const;

  // bytes_sent == bytes_acked + inflight + lost-not-yet-retransmitted.
  void check_conservation() const;

  int id() const { return id_; }
  uint32_t mss() const { return mss_; }
  uint64_t inflight_bytes() const { return inflight_; }
  uint64_t delivered_bytes() const { return delivered_; }
  uint64_t lost_unretransmitted_bytes() const { return lost_unretx_bytes_; }
  uint64_t round_count() const { return round_count_; }
  uint64_t receiver_unique_bytes() const { return rx_unique_bytes_; }
  const FlowCounters& counters() const { return counters_; }
  CongestionController& cca() { return *cca_; }
  const CongestionController& cca() const { return *cca_; }
  const RttEstimator& rtt() const { return rtt_; }
  Duration current_rto() const;
  size_t sent_log_size() const { return sent_.size(); }

  FlowState flow_state(SimTime now) const;

 private:
  enum class PktState { Inflight, Lost, Acked };
  struct SentMeta {
    uint32_t size = 0;
    SimTime first_sent;
    SimTime last_sent;
    uint64_t delivered_at_send = 0;
    bool app_limited_at_send = false;
    bool retransmitted_ever = false;
    bool fast_retx_done = false;
    PktState state = PktState::Inflight;
  };

  void mark_delivered(uint64_t seq, SentMeta& meta);
  void declare_lost(uint64_t seq, SentMeta& meta, SimTime now);
  void start_round();
  Packet emit_packet(uint64_t seq, SentMeta& meta, bool retx, SimTime now);

  int id_;
  uint32_t mss_;
  std::unique_ptr<CongestionController> cca_;
  RttEstimator rtt_;

  // sender
  std::map<uint64_t, SentMeta> sent_;  // unacked (inflight or lost) seqs
  std::deque<uint64_t> retx_queue_;
  std::set<uint64_t> sacked_above_cum_;
  uint64_t next_seq_ = 0;
  uint64_t snd_una_ = 0;  // lowest unacked seq
  uint64_t inflight_ = 0;
  uint64_t delivered_ = 0;
  uint64_t lost_unretx_bytes_ = 0;
  uint64_t app_backlog_ = UINT64_MAX;
  uint64_t app_limited_marker_ = 0;  // delivered+inflight when app ran dry
  SimTime next_send_time_;
  uint64_t last_cum_seen_ = 0;
  uint32_t dup_ack_count_ = 0;
  uint32_t rto_backoff_ = 1;

  // rounds
  uint64_t round_count_ = 0;
  uint64_t next_round_delivered_ = 0;
  uint64_t delivered_pkts_round_ = 0;
  uint64_t lost_pkts_round_ = 0;
  double loss_rate_prev_round_ = 0;
  uint32_t losses_prev_round_ = 0;
  bool round_started_this_ack_ = false;

  // receiver
  uint64_t rcv_next_ = 0;
  std::set<uint64_t> rx_ooo_;
  uint64_t rx_unique_bytes_ = 0;

  FlowCounters counters_;
};

}  // namespace ccsim
