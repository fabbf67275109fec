#pragma once

#include <cstdint>
#include <deque>

namespace ccsim {

// Windowed extremum filter over (value, time) samples. Entries are kept in a
// monotonic deque, so current() is the exact extremum over all samples whose
// age is < window_len as of the last update. Time is an integer in whatever
// unit the caller tracks (nanoseconds, RTT rounds, probe cycles).
//
// window_len == 0 degenerates to "always the latest sample".
template <typename Value, typename Compare>
class WindowedFilter {
 public:
  explicit WindowedFilter(int64_t window_len) : window_len_(window_len) {}

  void update(Value v, int64_t now) {
    latest_ = v;
    latest_time_ = now;
    has_latest_ = true;
    if (window_len_ == 0) {
      entries_.clear();
      entries_.push_back({v, now});
      return;
    }
    while (!entries_.empty() && !cmp_(entries_.back().value, v)) entries_.pop_back();
    entries_.push_back({v, now});
    while (now - entries_.front().time >= window_len_) entries_.pop_front();
  }

  // Discards the best (front) entry. With a single entry, falls back to the
  // most recent raw sample. Empty filter: no-op.
  void expire_oldest() {
    if (entries_.empty()) return;
    if (entries_.size() > 1) {
      entries_.pop_front();
    } else {
      entries_.front() = {latest_, latest_time_};
    }
  }

  Value current() const { return entries_.empty() ? Value{} : entries_.front().value; }
  Value latest() const { return latest_; }
  bool empty() const { return entries_.empty(); }
  bool has_sample() const { return has_latest_; }
  size_t size() const { return entries_.size(); }
  int64_t window_len() const { return window_len_; }

  void reset() {
    entries_.clear();
    has_latest_ = false;
    latest_ = Value{};
  }

 private:
  struct Entry {
    Value value;
    int64_t time;
  };
  std::deque<Entry> entries_;
  int64_t window_len_;
  Value latest_{};
  int64_t latest_time_ = 0;
  bool has_latest_ = false;
  Compare cmp_{};
};

template <typename Value>
using MaxFilter = WindowedFilter<Value, std::greater<Value>>;
template <typename Value>
using MinFilter = WindowedFilter<Value, std::less<Value>>;

}  // namespace ccsim
