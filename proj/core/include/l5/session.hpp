#pragma once

// Reliable multipath L5 transport. The sender paces segments on each path at
// the rate the allocator assigned and retransmits on timeout; the receiver
// runs selective repeat and answers every data segment with a cumulative +
// selective acknowledgement.

#include "l5/addressing.hpp"
#include "l5/pathfinder.hpp"
#include "l5/rational.hpp"
#include "l5/wire.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace l5::session {

using SessionId = std::uint64_t;
using Seq = std::uint64_t;
using Micros = std::uint64_t;
using pathfinder::L5Path;
using pathfinder::PathId;

inline constexpr std::size_t max_payload_bytes = 8192;
inline constexpr std::size_t max_sack_ranges = 32;

/// Shared, immutable slice of a byte buffer. Copies are cheap.
class Payload {
 public:
  Payload() = default;
  Payload(std::shared_ptr<const std::vector<std::uint8_t>> buffer, std::size_t offset,
          std::size_t length);
  static Payload copy_of(std::span<const std::uint8_t> bytes);

  std::span<const std::uint8_t> bytes() const noexcept;
  std::size_t size() const noexcept { return m_length; }
  bool empty() const noexcept { return m_length == 0; }

 private:
  std::shared_ptr<const std::vector<std::uint8_t>> m_buffer;
  std::size_t m_offset = 0;
  std::size_t m_length = 0;
};

enum class SegmentKind : std::uint8_t { Data = 0, Ack = 1 };

struct SackRange {
  Seq begin = 0;  ///< inclusive
  Seq end = 0;    ///< exclusive
  friend bool operator==(const SackRange&, const SackRange&) = default;
};

struct Segment {
  SegmentKind kind = SegmentKind::Data;
  SessionId session_id = 0;
  Seq seq = 0;  ///< data: own seq; ack: the seq that triggered it
  PathId path_id = 0;
  std::string tag;
  L3Locator l3_dest;
  Payload payload;
  bool is_retransmit = false;  ///< ack: echoes the data segment's flag
  Seq cumulative_ack = 0;      ///< ack: every seq below this has arrived
  std::vector<SackRange> sacks;

  bool is_data() const noexcept { return kind == SegmentKind::Data; }
};

/// Canonical encoding: kind, session id, seq, path id, flags, tag,
/// l3_dest (domain, attachment), cumulative ack, sack ranges, payload.
/// Big-endian integers, u32-length-prefixed strings and payload.
void encode(wire::Writer& out, const Segment& segment);
std::vector<std::uint8_t> encode(const Segment& segment);

enum class SessionMode : std::uint8_t { Unicast, PubSub };

struct SessionDescriptor {
  SessionId id = 0;
  L5Address src;
  L5Address dst;
  SessionMode mode = SessionMode::Unicast;
  std::string tag;
  std::vector<L5Path> paths;
};

struct ScheduledSegment {
  Segment segment;
  Micros emit_time = 0;
};

/// Per-path transmit accounting, for rate-compliance checks.
struct PathStats {
  std::uint64_t segments = 0;
  std::uint64_t retransmits = 0;
  std::uint64_t bytes = 0;
  std::optional<Micros> first_emit;
  Rational busy_until{0};  ///< nominal end of the last emission's pacing slot
};

/// Round-trip guess used before the first sample on a path: twice the path
/// latency plus one max-size serialization per hop, plus 1 ms.
std::uint64_t initial_rtt_us(const L5Path& path);

class SessionSender {
 public:
  SessionSender(SessionDescriptor descriptor, const std::map<PathId, Rational>& rates,
                const ResolverTable& resolver);

  const SessionDescriptor& descriptor() const noexcept { return m_descriptor; }
  SessionId id() const noexcept { return m_descriptor.id; }

  /// Appends one segment's worth of data (1..max_payload_bytes).
  void enqueue(Payload chunk);
  /// Appends a byte stream, cut into max_payload_bytes segments.
  void enqueue_stream(std::shared_ptr<const std::vector<std::uint8_t>> bytes);
  void close() noexcept { m_closed = true; }
  bool closed() const noexcept { return m_closed; }
  bool complete() const noexcept { return m_closed && m_acked_prefix == m_chunks.size(); }

  /// Segments due in [now, until), in emission order. Expired retransmissions
  /// go first; new data goes to the path with the earliest free slot (ties
  /// to the lowest path id). Every emission advances that path's slot by
  /// payload_bits / rate.
  std::vector<ScheduledSegment> schedule(Micros now, Micros until);
  std::vector<ScheduledSegment> schedule(Micros now) { return schedule(now, now + 1); }

  void on_ack(const Segment& ack, Micros now);

  /// Earliest time at which schedule() may emit something, if any.
  std::optional<Micros> next_wakeup(Micros now) const;

  /// Throws Error{MissingRate} unless every current path has a rate.
  void set_rates(const std::map<PathId, Rational>& rates, Micros now);
  /// Swaps the path set (fresh path ids expected). In-flight segments keep
  /// their deadlines and are retransmitted on the new paths.
  void replace_paths(std::vector<L5Path> paths, const std::map<PathId, Rational>& rates,
                     const ResolverTable& resolver, Micros now);

  std::size_t segment_count() const noexcept { return m_chunks.size(); }
  std::size_t in_flight() const noexcept { return m_in_flight.size(); }
  std::size_t pending_retransmits() const noexcept { return m_retransmit.size(); }
  bool acked(Seq seq) const { return seq < m_acked.size() && m_acked[seq]; }
  Seq next_new_seq() const noexcept { return m_next_new; }
  std::uint64_t bytes_enqueued() const noexcept { return m_bytes_enqueued; }

  double rtt_estimate(PathId path) const;
  Rational rate(PathId path) const;
  const PathStats& path_stats(PathId path) const;
  /// bits emitted / integral of allocated rate over [first emit, busy until].
  /// 0 when nothing was sent.
  double rate_compliance(PathId path) const;
  const L3Locator& first_hop(PathId path) const;
  std::vector<PathId> path_ids() const;

 private:
  struct PathSlot {
    L5Path path;
    L3Locator first_hop;
    Rational rate{0};
    Rational next_free{0};
    double srtt = 0;
    bool has_sample = false;
    PathStats stats;
    std::vector<std::pair<Micros, Rational>> rate_history;  ///< (from, rate)
  };

  struct InFlight {
    PathId path = 0;
    Micros sent_at = 0;
    Micros deadline = 0;
    bool retransmitted = false;
  };

  PathSlot& slot(PathId path);
  const PathSlot& slot(PathId path) const;
  void add_path(const L5Path& path, const Rational& rate, const ResolverTable& resolver,
                Micros now);
  void expire(Micros at);
  void mark_acked(Seq seq, std::vector<std::pair<Seq, InFlight>>& newly);

  SessionDescriptor m_descriptor;
  std::map<PathId, PathSlot> m_paths;
  std::map<PathId, PathSlot> m_retired;
  std::vector<Payload> m_chunks;
  std::vector<bool> m_acked;
  Seq m_acked_prefix = 0;
  Seq m_next_new = 0;
  std::map<Seq, InFlight> m_in_flight;
  std::set<Seq> m_retransmit;
  std::uint64_t m_bytes_enqueued = 0;
  bool m_closed = false;
};

/// Throws Error{NoPaths} for an empty path list and Error{MissingRate} when a
/// path has no rate.
SessionSender open_session(SessionId id, const L5Address& src, const L5Address& dst,
                           const std::string& tag, std::vector<L5Path> paths,
                           const std::map<PathId, Rational>& rates, const ResolverTable& resolver,
                           SessionMode mode = SessionMode::Unicast);

class SessionReceiver {
 public:
  struct Result {
    std::vector<Segment> delivered;  ///< maximal new in-order run
    std::vector<Segment> acks;
  };

  /// `reverse_hops` maps each path id to the locator ACKs are sent to.
  SessionReceiver(SessionId id, std::string tag, std::map<PathId, L3Locator> reverse_hops);

  /// Throws Error{SessionMismatch} for another session's segment.
  Result on_receive(const Segment& segment, Micros now);

  void set_reverse_hop(PathId path, L3Locator locator) { m_reverse[path] = std::move(locator); }

  SessionId id() const noexcept { return m_id; }
  Seq next_expected() const noexcept { return m_next_expected; }
  std::uint64_t bytes_delivered() const noexcept { return m_bytes_delivered; }
  std::uint64_t duplicates() const noexcept { return m_duplicates; }
  std::size_t buffered() const noexcept { return m_reorder.size(); }
  /// FNV-1a over every delivered byte, in order.
  std::uint64_t delivered_digest() const noexcept { return m_digest.digest(); }
  std::optional<Micros> last_delivery() const noexcept { return m_last_delivery; }

 private:
  Segment make_ack(const Segment& data) const;

  SessionId m_id;
  std::string m_tag;
  std::map<PathId, L3Locator> m_reverse;
  Seq m_next_expected = 0;
  std::map<Seq, Segment> m_reorder;
  std::uint64_t m_bytes_delivered = 0;
  std::uint64_t m_duplicates = 0;
  wire::Fnv1a64 m_digest;
  std::optional<Micros> m_last_delivery;
};

}  // namespace l5::session
