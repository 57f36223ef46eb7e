#pragma once

// Discrete-event queue. Entries pop in (time, tiebreak) order, where the
// tiebreak is a counter assigned at push, so equal-time events run in push
// order. The queue also owns the run's only random number generator.

#include "l5/error.hpp"

#include <cstdint>
#include <queue>
#include <random>
#include <string>
#include <vector>

namespace l5::simnet {

using Micros = std::uint64_t;

template <class Payload>
class EventQueue {
 public:
  struct Entry {
    Micros time = 0;
    std::uint64_t tiebreak = 0;
    Payload payload;
  };

  explicit EventQueue(std::uint64_t seed = 0)
    : m_rng(seed)
  {
  }

  /// Throws Error{CausalityViolation} for a time before now().
  std::uint64_t push(Micros at, Payload payload)
  {
    if (at < m_now)
      throw Error(ErrorCode::CausalityViolation, "event at " + std::to_string(at) +
                                                     " scheduled from " + std::to_string(m_now));
    std::uint64_t tb = m_next_tiebreak++;
    m_heap.push(Entry{at, tb, std::move(payload)});
    return tb;
  }

  /// Throws Error{EmptyQueue}.
  Entry pop()
  {
    if (m_heap.empty())
      throw Error(ErrorCode::EmptyQueue, "no event to pop");
    Entry e = std::move(const_cast<Entry&>(m_heap.top()));
    m_heap.pop();
    m_now = e.time;
    return e;
  }

  const Entry& top() const
  {
    if (m_heap.empty())
      throw Error(ErrorCode::EmptyQueue, "no event to inspect");
    return m_heap.top();
  }

  bool empty() const noexcept { return m_heap.empty(); }
  std::size_t size() const noexcept { return m_heap.size(); }
  Micros now() const noexcept { return m_now; }

  std::mt19937_64& rng() noexcept { return m_rng; }
  /// One draw, true with probability p. p <= 0 consumes nothing.
  bool bernoulli(double p)
  {
    if (p <= 0)
      return false;
    // 53 high bits give a uniform double on [0, 1)
    double u = static_cast<double>(m_rng() >> 11) * 0x1.0p-53;
    return u < p;
  }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const noexcept
    {
      if (a.time != b.time)
        return a.time > b.time;
      return a.tiebreak > b.tiebreak;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> m_heap;
  std::mt19937_64 m_rng;
  Micros m_now = 0;
  std::uint64_t m_next_tiebreak = 0;
};

}  // namespace l5::simnet
