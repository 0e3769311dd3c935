#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "itmsim/errors.hpp"
#include "itmsim/rng.hpp"
#include "itmsim/types.hpp"

namespace itmsim {

template <typename Payload>
struct BasicEvent {
  SimTime fire_at = 0;
  EventId seq = 0;  // insertion sequence; doubles as the event id
  NodeId target = kNoNode;
  Payload payload;
};

/**
 * Deterministic discrete-event engine.
 *
 * Events are dispatched strictly in (fire_at, seq) order, so ties resolve
 * FIFO by scheduling order regardless of heap internals. The engine owns
 * the run's single Rng; every module draws through it, which makes draw
 * order part of the deterministic contract. One engine is confined to one
 * thread; independent engines may run concurrently.
 */
template <typename Payload>
class EngineT {
 public:
  using Event = BasicEvent<Payload>;
  using Handler = std::function<void(const Event&)>;

  explicit EngineT(std::uint64_t seed) : rng_(seed) {}

  void set_handler(Handler h) { handler_ = std::move(h); }

  SimTime now() const { return now_; }
  Rng& rng() { return rng_; }

  EventId schedule(SimTime delay, NodeId target, Payload payload) {
    if (finished_) throw SimError(Errc::EngineFinished, "schedule after finish");
    Event ev;
    ev.fire_at = now_ + delay;
    ev.seq = next_seq_++;
    ev.target = target;
    ev.payload = std::move(payload);
    const EventId id = ev.seq;
    heap_.push_back(std::move(ev));
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    ++scheduled_;
    return id;
  }

  /// Dispatches every event with fire_at <= until, then advances the clock
  /// to `until`. Reusable until finish() is called.
  RunSummary run(SimTime until) {
    if (finished_) throw SimError(Errc::EngineFinished, "run after finish");
    if (until < now_) throw SimError(Errc::InvalidArgument, "run until < now");
    std::uint64_t n = 0;
    while (!heap_.empty() && heap_.front().fire_at <= until) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      Event ev = std::move(heap_.back());
      heap_.pop_back();
      now_ = ev.fire_at;
      ++dispatched_;
      ++n;
      if (handler_) handler_(ev);
    }
    now_ = until;
    return RunSummary{n, now_};
  }

  void finish() { finished_ = true; }
  bool finished() const { return finished_; }

  std::size_t pending_count() const { return heap_.size(); }
  std::uint64_t scheduled_count() const { return scheduled_; }
  std::uint64_t dispatched_count() const { return dispatched_; }

  /// Post-run inspection of queued events (reconciliation tests, in-flight
  /// packet counting). Order of visitation is unspecified.
  template <typename F>
  void for_each_pending(F&& f) const {
    for (const Event& ev : heap_) f(ev);
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  std::vector<Event> heap_;
  Handler handler_;
  Rng rng_;
  SimTime now_ = 0;
  EventId next_seq_ = 1;
  std::uint64_t scheduled_ = 0;
  std::uint64_t dispatched_ = 0;
  bool finished_ = false;
};

}  // namespace itmsim
