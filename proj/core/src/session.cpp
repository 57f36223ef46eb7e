#include "l5/session.hpp"

#include "l5/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace l5::session {

Payload::Payload(std::shared_ptr<const std::vector<std::uint8_t>> buffer, std::size_t offset,
                 std::size_t length)
  : m_buffer(std::move(buffer))
  , m_offset(offset)
  , m_length(length)
{
  if (!m_buffer ? length != 0 : offset + length > m_buffer->size())
    throw std::out_of_range("payload slice exceeds its buffer");
}

Payload
Payload::copy_of(std::span<const std::uint8_t> bytes)
{
  auto buf = std::make_shared<const std::vector<std::uint8_t>>(bytes.begin(), bytes.end());
  return Payload(buf, 0, bytes.size());
}

std::span<const std::uint8_t>
Payload::bytes() const noexcept
{
  if (!m_buffer)
    return {};
  return std::span(m_buffer->data() + m_offset, m_length);
}

void
encode(wire::Writer& out, const Segment& s)
{
  out.u8(static_cast<std::uint8_t>(s.kind));
  out.u64(s.session_id);
  out.u64(s.seq);
  out.u32(s.path_id);
  out.u8(s.is_retransmit ? 1 : 0);
  out.str(s.tag);
  out.str(s.l3_dest.domain_id);
  out.str(s.l3_dest.attachment_id);
  out.u64(s.cumulative_ack);
  out.u16(static_cast<std::uint16_t>(s.sacks.size()));
  for (const auto& r : s.sacks) {
    out.u64(r.begin);
    out.u64(r.end);
  }
  out.bytes(s.payload.bytes());
}

std::vector<std::uint8_t>
encode(const Segment& segment)
{
  wire::Writer out;
  encode(out, segment);
  return std::move(out).take();
}

std::uint64_t
initial_rtt_us(const L5Path& path)
{
  std::uint64_t links = path.hops.size() > 1 ? path.hops.size() - 1 : 0;
  double serialization = 0;
  if (path.min_capacity_mbps > 0)
    serialization = static_cast<double>(max_payload_bytes * 8) / path.min_capacity_mbps;
  return 2 * path.metric_us + links * static_cast<std::uint64_t>(std::ceil(serialization)) + 1000;
}

SessionSender::SessionSender(SessionDescriptor descriptor, const std::map<PathId, Rational>& rates,
                             const ResolverTable& resolver)
  : m_descriptor(std::move(descriptor))
{
  if (m_descriptor.paths.empty())
    throw Error(ErrorCode::NoPaths, "session " + std::to_string(m_descriptor.id) + " has no path");
  for (const auto& p : m_descriptor.paths) {
    auto it = rates.find(p.path_id);
    if (it == rates.end())
      throw Error(ErrorCode::MissingRate, "session " + std::to_string(m_descriptor.id) +
                                              " has no rate for path " + std::to_string(p.path_id));
    add_path(p, it->second, resolver, 0);
  }
}

void
SessionSender::add_path(const L5Path& path, const Rational& rate, const ResolverTable& resolver,
                        Micros now)
{
  if (m_paths.contains(path.path_id) || m_retired.contains(path.path_id))
    throw std::invalid_argument("duplicate path id " + std::to_string(path.path_id));
  PathSlot s;
  s.path = path;
  s.first_hop = pathfinder::first_hop_locator(path, resolver);
  s.rate = rate;
  s.next_free = Rational(now);
  s.srtt = static_cast<double>(initial_rtt_us(path));
  s.rate_history.emplace_back(now, rate);
  m_paths.emplace(path.path_id, std::move(s));
}

SessionSender::PathSlot&
SessionSender::slot(PathId path)
{
  if (auto it = m_paths.find(path); it != m_paths.end())
    return it->second;
  if (auto it = m_retired.find(path); it != m_retired.end())
    return it->second;
  throw std::out_of_range("unknown path id " + std::to_string(path));
}

const SessionSender::PathSlot&
SessionSender::slot(PathId path) const
{
  return const_cast<SessionSender*>(this)->slot(path);
}

void
SessionSender::enqueue(Payload chunk)
{
  if (chunk.empty() || chunk.size() > max_payload_bytes)
    throw std::invalid_argument("segment payload must be 1.." + std::to_string(max_payload_bytes) +
                                " bytes");
  m_bytes_enqueued += chunk.size();
  m_chunks.push_back(std::move(chunk));
  m_acked.push_back(false);
}

void
SessionSender::enqueue_stream(std::shared_ptr<const std::vector<std::uint8_t>> bytes)
{
  for (std::size_t off = 0; off < bytes->size(); off += max_payload_bytes)
    enqueue(Payload(bytes, off, std::min(max_payload_bytes, bytes->size() - off)));
}

void
SessionSender::expire(Micros at)
{
  for (auto it = m_in_flight.begin(); it != m_in_flight.end();) {
    if (it->second.deadline <= at) {
      m_retransmit.insert(it->first);
      it = m_in_flight.erase(it);
    }
    else {
      ++it;
    }
  }
}

std::vector<ScheduledSegment>
SessionSender::schedule(Micros now, Micros until)
{
  std::vector<ScheduledSegment> out;
  while (true) {
    PathSlot* best = nullptr;
    Micros best_time = 0;
    for (auto& [id, p] : m_paths) {
      if (p.rate <= 0)
        continue;
      Micros t = std::max(now, ceil_to_u64(p.next_free));
      if (!best || t < best_time) {
        best = &p;
        best_time = t;
      }
    }
    if (!best || best_time >= until)
      break;

    expire(best_time);
    Seq seq;
    bool retransmit;
    if (!m_retransmit.empty()) {
      seq = *m_retransmit.begin();
      m_retransmit.erase(m_retransmit.begin());
      retransmit = true;
    }
    else if (m_next_new < m_chunks.size()) {
      seq = m_next_new++;
      retransmit = false;
    }
    else {
      break;
    }

    const Payload& payload = m_chunks[seq];
    Segment seg;
    seg.kind = SegmentKind::Data;
    seg.session_id = m_descriptor.id;
    seg.seq = seq;
    seg.path_id = best->path.path_id;
    seg.tag = m_descriptor.tag;
    seg.l3_dest = best->first_hop;
    seg.payload = payload;
    seg.is_retransmit = retransmit;

    Rational start = std::max(best->next_free, Rational(now));
    best->next_free = start + Rational(payload.size() * 8) / best->rate;

    auto& st = best->stats;
    ++st.segments;
    st.bytes += payload.size();
    if (retransmit)
      ++st.retransmits;
    if (!st.first_emit)
      st.first_emit = best_time;
    st.busy_until = best->next_free;

    auto timeout = static_cast<Micros>(std::ceil(2.0 * best->srtt));
    m_in_flight[seq] = InFlight{best->path.path_id, best_time, best_time + timeout, retransmit};
    out.push_back({std::move(seg), best_time});
  }
  return out;
}

void
SessionSender::mark_acked(Seq seq, std::vector<std::pair<Seq, InFlight>>& newly)
{
  if (seq >= m_acked.size() || m_acked[seq])
    return;
  m_acked[seq] = true;
  if (auto it = m_in_flight.find(seq); it != m_in_flight.end()) {
    newly.emplace_back(seq, it->second);
    m_in_flight.erase(it);
  }
  m_retransmit.erase(seq);
}

void
SessionSender::on_ack(const Segment& ack, Micros now)
{
  if (ack.session_id != m_descriptor.id)
    throw Error(ErrorCode::SessionMismatch, "ack for session " + std::to_string(ack.session_id) +
                                                " delivered to session " +
                                                std::to_string(m_descriptor.id));
  std::vector<std::pair<Seq, InFlight>> newly;
  Seq cumulative = std::min<Seq>(ack.cumulative_ack, m_chunks.size());
  for (Seq s = m_acked_prefix; s < cumulative; ++s)
    mark_acked(s, newly);
  for (const auto& r : ack.sacks)
    for (Seq s = r.begin; s < r.end && s < m_chunks.size(); ++s)
      mark_acked(s, newly);
  // the triggering seq itself, in case it fell outside the reported ranges
  mark_acked(ack.seq, newly);
  while (m_acked_prefix < m_acked.size() && m_acked[m_acked_prefix])
    ++m_acked_prefix;

  for (const auto& [seq, entry] : newly) {
    if (seq != ack.seq || entry.retransmitted || ack.is_retransmit)
      continue;  // Karn: only unambiguous samples
    auto it = m_paths.find(entry.path);
    if (it == m_paths.end())
      continue;
    double sample = static_cast<double>(now - entry.sent_at);
    auto& p = it->second;
    if (!p.has_sample) {
      p.srtt = sample;
      p.has_sample = true;
    }
    else {
      p.srtt = 0.875 * p.srtt + 0.125 * sample;
    }
  }
}

std::optional<Micros>
SessionSender::next_wakeup(Micros now) const
{
  std::optional<Micros> slot_time;
  for (const auto& [id, p] : m_paths) {
    if (p.rate <= 0)
      continue;
    Micros t = std::max(now, ceil_to_u64(p.next_free));
    if (!slot_time || t < *slot_time)
      slot_time = t;
  }
  if (!slot_time)
    return std::nullopt;
  if (!m_retransmit.empty() || m_next_new < m_chunks.size())
    return slot_time;
  if (m_in_flight.empty())
    return std::nullopt;
  Micros earliest_deadline = m_in_flight.begin()->second.deadline;
  for (const auto& [seq, f] : m_in_flight)
    earliest_deadline = std::min(earliest_deadline, f.deadline);
  return std::max(earliest_deadline, *slot_time);
}

void
SessionSender::set_rates(const std::map<PathId, Rational>& rates, Micros now)
{
  for (const auto& [id, p] : m_paths)
    if (!rates.contains(id))
      throw Error(ErrorCode::MissingRate, "no rate for path " + std::to_string(id));
  for (auto& [id, p] : m_paths) {
    const Rational& r = rates.at(id);
    if (r == p.rate)
      continue;
    p.rate = r;
    p.rate_history.emplace_back(now, r);
  }
}

void
SessionSender::replace_paths(std::vector<L5Path> paths, const std::map<PathId, Rational>& rates,
                             const ResolverTable& resolver, Micros now)
{
  if (paths.empty())
    throw Error(ErrorCode::NoPaths, "session " + std::to_string(m_descriptor.id) + " has no path");
  for (const auto& p : paths)
    if (!rates.contains(p.path_id))
      throw Error(ErrorCode::MissingRate, "no rate for path " + std::to_string(p.path_id));
  for (auto& [id, p] : m_paths) {
    p.rate_history.emplace_back(now, Rational(0));
    p.rate = 0;
    m_retired.emplace(id, std::move(p));
  }
  m_paths.clear();
  for (const auto& p : paths)
    add_path(p, rates.at(p.path_id), resolver, now);
  m_descriptor.paths = std::move(paths);
}

double
SessionSender::rtt_estimate(PathId path) const
{
  return slot(path).srtt;
}

Rational
SessionSender::rate(PathId path) const
{
  return slot(path).rate;
}

const PathStats&
SessionSender::path_stats(PathId path) const
{
  return slot(path).stats;
}

const L3Locator&
SessionSender::first_hop(PathId path) const
{
  return slot(path).first_hop;
}

std::vector<PathId>
SessionSender::path_ids() const
{
  std::vector<PathId> ids;
  for (const auto& [id, p] : m_retired)
    ids.push_back(id);
  for (const auto& [id, p] : m_paths)
    ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

double
SessionSender::rate_compliance(PathId path) const
{
  const auto& s = slot(path);
  if (!s.stats.first_emit || s.stats.bytes == 0)
    return 0;
  Rational begin(*s.stats.first_emit);
  Rational end = s.stats.busy_until;
  Rational allowance = 0;
  for (std::size_t i = 0; i < s.rate_history.size(); ++i) {
    Rational from(s.rate_history[i].first);
    Rational to = i + 1 < s.rate_history.size() ? Rational(s.rate_history[i + 1].first) : end;
    Rational lo = std::max(from, begin);
    Rational hi = std::min(to, end);
    if (hi > lo)
      allowance += s.rate_history[i].second * (hi - lo);
  }
  if (allowance <= 0)
    return std::numeric_limits<double>::infinity();
  return to_double(Rational(s.stats.bytes * 8) / allowance);
}

SessionSender
open_session(SessionId id, const L5Address& src, const L5Address& dst, const std::string& tag,
             std::vector<L5Path> paths, const std::map<PathId, Rational>& rates,
             const ResolverTable& resolver, SessionMode mode)
{
  SessionDescriptor d;
  d.id = id;
  d.src = src;
  d.dst = dst;
  d.mode = mode;
  d.tag = tag;
  d.paths = std::move(paths);
  return SessionSender(std::move(d), rates, resolver);
}

SessionReceiver::SessionReceiver(SessionId id, std::string tag,
                                 std::map<PathId, L3Locator> reverse_hops)
  : m_id(id)
  , m_tag(std::move(tag))
  , m_reverse(std::move(reverse_hops))
{
}

Segment
SessionReceiver::make_ack(const Segment& data) const
{
  Segment ack;
  ack.kind = SegmentKind::Ack;
  ack.session_id = m_id;
  ack.seq = data.seq;
  ack.path_id = data.path_id;
  ack.tag = m_tag;
  auto it = m_reverse.find(data.path_id);
  if (it == m_reverse.end())
    throw Error(ErrorCode::UnknownEndpoint,
                "no reverse hop for path " + std::to_string(data.path_id));
  ack.l3_dest = it->second;
  ack.is_retransmit = data.is_retransmit;
  ack.cumulative_ack = m_next_expected;
  for (auto it2 = m_reorder.begin(); it2 != m_reorder.end() && ack.sacks.size() < max_sack_ranges;) {
    Seq begin = it2->first;
    Seq end = begin + 1;
    ++it2;
    while (it2 != m_reorder.end() && it2->first == end) {
      ++end;
      ++it2;
    }
    ack.sacks.push_back({begin, end});
  }
  return ack;
}

SessionReceiver::Result
SessionReceiver::on_receive(const Segment& segment, Micros now)
{
  if (segment.session_id != m_id)
    throw Error(ErrorCode::SessionMismatch, "segment for session " +
                                                std::to_string(segment.session_id) +
                                                " delivered to session " + std::to_string(m_id));
  Result result;
  if (!segment.is_data())
    return result;

  if (segment.seq < m_next_expected || m_reorder.contains(segment.seq)) {
    ++m_duplicates;
  }
  else {
    m_reorder.emplace(segment.seq, segment);
    while (!m_reorder.empty() && m_reorder.begin()->first == m_next_expected) {
      auto node = m_reorder.extract(m_reorder.begin());
      Segment& s = node.mapped();
      m_digest.update(s.payload.bytes());
      m_bytes_delivered += s.payload.size();
      m_last_delivery = now;
      ++m_next_expected;
      result.delivered.push_back(std::move(s));
    }
  }
  result.acks.push_back(make_ack(segment));
  return result;
}

}  // namespace l5::session
