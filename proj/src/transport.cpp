#include "ccsim/transport.hpp"

#include <algorithm>

namespace ccsim {

namespace {
constexpr Duration kRtoFloor = Duration::millis(200);
constexpr Duration kRtoNoSample = Duration::seconds(1);
constexpr uint32_t kFastRetxDupThreshold = 3;
}  // namespace

TransportFlow::TransportFlow(int id, std::unique_ptr<CongestionController> cca,
                             uint32_t mss, Duration min_rtt_window)
    : id_(id), mss_(mss), cca_(std::move(cca)), rtt_(min_rtt_window) {}

FlowState TransportFlow::flow_state(SimTime now) const {
  FlowState fs;
  fs.now = now;
  fs.inflight_bytes = inflight_;
  fs.delivered_bytes = delivered_;
  fs.round_count = round_count_;
  fs.loss_rate_curr_round = loss_rate_current_round();
  fs.loss_rate_prev_round = loss_rate_prev_round_;
  fs.losses_prev_round = losses_prev_round_;
  fs.mss = mss_;
  fs.rtt = &rtt_;
  return fs;
}

double TransportFlow::loss_rate_current_round() const {
  uint64_t total = delivered_pkts_round_ + lost_pkts_round_;
  if (total == 0) return 0.0;
  return static_cast<double>(lost_pkts_round_) / static_cast<double>(total);
}

void TransportFlow::check_conservation() const {
  uint64_t rhs = delivered_ + inflight_ + lost_unretx_bytes_;
  if (counters_.bytes_sent != rhs)
    throw std::logic_error("transport conservation violated: sent=" +
                           std::to_string(counters_.bytes_sent) + " acked+inflight+lost=" +
                           std::to_string(rhs));
}

Packet TransportFlow::emit_packet(uint64_t seq, SentMeta& meta, bool retx, SimTime now) {
  Packet pkt;
  pkt.flow_id = id_;
  pkt.seq = seq;
  pkt.size_bytes = meta.size;
  pkt.sent_time = now;
  pkt.is_retransmission = retx;
  pkt.delivered_at_send = delivered_;
  pkt.app_limited_at_send = app_limited_marker_ != 0;

  meta.last_sent = now;
  meta.delivered_at_send = delivered_;
  meta.app_limited_at_send = pkt.app_limited_at_send;
  meta.state = PktState::Inflight;
  inflight_ += meta.size;
  counters_.bytes_sent += meta.size;
  counters_.packets_sent++;
  if (retx) {
    meta.retransmitted_ever = true;
    counters_.bytes_retransmitted += meta.size;
    counters_.packets_retransmitted++;
  }
  return pkt;
}

std::vector<Packet> TransportFlow::maybe_send(SimTime now) {
  std::vector<Packet> out;
  for (;;) {
    if (next_send_time_ > now) break;

    // Retransmissions first. Entries may have been acked since queueing.
    while (!retx_queue_.empty()) {
      auto it = sent_.find(retx_queue_.front());
      if (it == sent_.end() || it->second.state != PktState::Lost) {
        retx_queue_.pop_front();
        continue;
      }
      break;
    }

    uint64_t cwnd = cca_->cwnd_bytes();
    if (!retx_queue_.empty()) {
      auto it = sent_.find(retx_queue_.front());
      SentMeta& meta = it->second;
      if (inflight_ + meta.size > cwnd) break;
      retx_queue_.pop_front();
      lost_unretx_bytes_ -= meta.size;
      Packet pkt = emit_packet(it->first, meta, true, now);
      out.push_back(pkt);
      cca_->on_packet_sent(pkt, flow_state(now));
    } else {
      if (app_backlog_ == 0) {
        // Application has nothing queued: flag subsequent samples app-limited.
        if (inflight_ > 0) app_limited_marker_ = delivered_ + inflight_;
        break;
      }
      uint32_t size = static_cast<uint32_t>(std::min<uint64_t>(mss_, app_backlog_));
      if (inflight_ + size > cwnd) break;
      uint64_t seq = next_seq_++;
      SentMeta meta;
      meta.size = size;
      meta.first_sent = now;
      SentMeta& stored = sent_.emplace(seq, meta).first->second;
      if (app_backlog_ != UINT64_MAX) app_backlog_ -= size;
      Packet pkt = emit_packet(seq, stored, false, now);
      out.push_back(pkt);
      cca_->on_packet_sent(pkt, flow_state(now));
    }

    double rate = std::max(cca_->pacing_bytes_per_sec(), 1.0);
    Duration gap = Duration::from_seconds(static_cast<double>(out.back().size_bytes) / rate);
    next_send_time_ = now + gap;
  }
  check_conservation();
  return out;
}

SimTime TransportFlow::next_send_opportunity(SimTime now) const {
  bool has_retx = false;
  for (uint64_t seq : retx_queue_) {
    auto it = sent_.find(seq);
    if (it != sent_.end() && it->second.state == PktState::Lost) {
      has_retx = true;
      break;
    }
  }
  bool has_data = has_retx || app_backlog_ > 0;
  if (!has_data) return SimTime::max();
  uint32_t next_size = mss_;
  if (inflight_ + next_size > cca_->cwnd_bytes()) return SimTime::max();
  return std::max(next_send_time_, now);
}

void TransportFlow::mark_delivered(uint64_t seq, SentMeta& meta) {
  if (meta.state == PktState::Inflight) {
    inflight_ -= meta.size;
  } else if (meta.state == PktState::Lost) {
    lost_unretx_bytes_ -= meta.size;  // loss declaration was spurious
  } else {
    return;
  }
  meta.state = PktState::Acked;
  delivered_ += meta.size;
  counters_.bytes_acked += meta.size;
  delivered_pkts_round_++;
  if (app_limited_marker_ != 0 && delivered_ > app_limited_marker_) app_limited_marker_ = 0;
  if (seq >= last_cum_seen_) sacked_above_cum_.insert(seq);
}

void TransportFlow::declare_lost(uint64_t seq, SentMeta& meta, SimTime) {
  if (meta.state != PktState::Inflight) return;
  meta.state = PktState::Lost;
  inflight_ -= meta.size;
  lost_unretx_bytes_ += meta.size;
  lost_pkts_round_++;
  counters_.packets_declared_lost++;
  retx_queue_.push_back(seq);
}

void TransportFlow::start_round() {
  round_count_++;
  next_round_delivered_ = delivered_;
  loss_rate_prev_round_ = loss_rate_current_round();
  losses_prev_round_ = static_cast<uint32_t>(lost_pkts_round_);
  delivered_pkts_round_ = 0;
  lost_pkts_round_ = 0;
  rtt_.on_round_start();
  round_started_this_ack_ = true;
}

void TransportFlow::on_ack(const AckInfo& ack, SimTime now) {
  round_started_this_ack_ = false;

  auto sack_it = sent_.find(ack.sacked_seq);
  bool sack_new = sack_it != sent_.end() && sack_it->second.state != PktState::Acked;
  bool cum_advances = ack.cum_seq > snd_una_;
  if (!sack_new && !cum_advances) {
    counters_.stale_acks++;
    return;
  }
  rto_backoff_ = 1;

  AckEvent ev;
  ev.now = now;
  uint64_t acked_before = counters_.bytes_acked;
  uint32_t losses_before = static_cast<uint32_t>(counters_.packets_declared_lost);

  SentMeta sack_meta_copy{};
  bool have_sample_basis = false;
  uint64_t max_delivered_at_send = 0;
  bool any_newly_acked = false;
  if (sack_new) {
    sack_meta_copy = sack_it->second;
    have_sample_basis = !sack_it->second.retransmitted_ever;
    max_delivered_at_send = sack_meta_copy.delivered_at_send;
    any_newly_acked = true;
    mark_delivered(ack.sacked_seq, sack_it->second);
  }

  // Cumulative advance.
  if (cum_advances) {
    auto it = sent_.begin();
    while (it != sent_.end() && it->first < ack.cum_seq) {
      if (it->second.state != PktState::Acked) {
        any_newly_acked = true;
        max_delivered_at_send = std::max(max_delivered_at_send, it->second.delivered_at_send);
        mark_delivered(it->first, it->second);
      }
      it = sent_.erase(it);
    }
    snd_una_ = std::max(snd_una_, ack.cum_seq);
    while (!sacked_above_cum_.empty() && *sacked_above_cum_.begin() < snd_una_)
      sacked_above_cum_.erase(sacked_above_cum_.begin());
  }

  // An ACK for data sent after the previous round's marker ends the round.
  // Deliveries above were counted toward the completed round.
  if (any_newly_acked && max_delivered_at_send >= next_round_delivered_) start_round();

  // Classic dup-ACK bookkeeping (the sack-count rule below is the trigger).
  if (ack.cum_seq == last_cum_seen_ && sack_new && ack.sacked_seq > ack.cum_seq) {
    dup_ack_count_++;
  } else if (ack.cum_seq > last_cum_seen_) {
    dup_ack_count_ = 0;
  }
  last_cum_seen_ = std::max(last_cum_seen_, ack.cum_seq);

  // RTT and delivery-rate samples from the arriving packet, unless its seq
  // was ever retransmitted (Karn's rule).
  if (sack_new && have_sample_basis) {
    Duration rtt = now - sack_meta_copy.first_sent;
    if (rtt_.on_sample(rtt, now)) ev.rtt_sample = rtt;
    Duration elapsed = now - sack_meta_copy.first_sent;
    uint64_t delivered_delta = delivered_ - sack_meta_copy.delivered_at_send;
    if (elapsed > Duration() && delivered_delta > 0) {
      BandwidthSample bw;
      bw.bytes_per_sec = static_cast<double>(delivered_delta) / elapsed.to_seconds();
      bw.delivered_delta = delivered_delta;
      bw.app_limited = sack_meta_copy.app_limited_at_send;
      ev.bw_sample = bw;
    }
  }

  // Loss detection: a seq is declared lost once >= 3 sacked seqs lie above it
  // (the 3-dup-ACK rule generalized to burst gaps).
  if (sacked_above_cum_.size() >= kFastRetxDupThreshold) {
    auto thr_it = sacked_above_cum_.end();
    for (uint32_t i = 0; i < kFastRetxDupThreshold; ++i) --thr_it;
    uint64_t threshold = *thr_it;
    for (auto it = sent_.begin(); it != sent_.end() && it->first < threshold; ++it) {
      if (it->second.state == PktState::Inflight && !it->second.fast_retx_done) {
        it->second.fast_retx_done = true;
        declare_lost(it->first, it->second, now);
      }
    }
  }

  ev.newly_acked_bytes = counters_.bytes_acked - acked_before;
  ev.losses_declared = static_cast<uint32_t>(counters_.packets_declared_lost) - losses_before;
  ev.round_start = round_started_this_ack_;

  FlowState fs = flow_state(now);
  if (round_started_this_ack_) cca_->on_round_start(fs);
  if (ev.losses_declared > 0)
    cca_->on_loss_declared(now, static_cast<uint64_t>(ev.losses_declared) * mss_, fs);
  cca_->on_ack(ev, fs);
  check_conservation();
}

Duration TransportFlow::current_rto() const {
  Duration base = kRtoNoSample;
  if (rtt_.has_sample()) {
    base = rtt_.srtt() + rtt_.rttvar() * 4.0;
    if (base < kRtoFloor) base = kRtoFloor;
  }
  return base * static_cast<double>(rto_backoff_);
}

std::optional<SimTime> TransportFlow::rto_deadline() const {
  // Oldest inflight packet anchors the timer.
  for (const auto& [seq, meta] : sent_) {
    if (meta.state == PktState::Inflight) return meta.last_sent + current_rto();
  }
  return std::nullopt;
}

void TransportFlow::on_rto_timer(SimTime now) {
  auto deadline = rto_deadline();
  if (!deadline || *deadline > now) return;  // stale timer
  for (auto& [seq, meta] : sent_) {
    if (meta.state == PktState::Inflight) {
      declare_lost(seq, meta, now);
      break;
    }
  }
  counters_.rto_fires++;
  rto_backoff_ *= 2;
  cca_->on_rto(now, flow_state(now));
  check_conservation();
}

AckInfo TransportFlow::receiver_on_data(const Packet& pkt) {
  bool seen = pkt.seq < rcv_next_ || rx_ooo_.count(pkt.seq) > 0;
  if (!seen) rx_unique_bytes_ += pkt.size_bytes;
  if (pkt.seq == rcv_next_) {
    rcv_next_++;
    while (!rx_ooo_.empty() && *rx_ooo_.begin() == rcv_next_) {
      rx_ooo_.erase(rx_ooo_.begin());
      rcv_next_++;
    }
  } else if (pkt.seq > rcv_next_) {
    rx_ooo_.insert(pkt.seq);
  }
  return AckInfo{id_, rcv_next_, pkt.seq};
}

}  // namespace ccsim
