#include "l5/error.hpp"
#include "l5/session.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace l5;
using namespace l5::session;

namespace {

struct Fixture {
  ResolverTable resolver;
  std::vector<L5Path> paths;
  std::map<PathId, L3Locator> reverse;

  explicit Fixture(std::size_t n, std::uint64_t latency = 1000)
  {
    std::set<L3Locator> universe{{"d", "src"}};
    for (std::size_t i = 0; i < n; ++i)
      universe.insert({"d", "r" + std::to_string(i)});
    resolver = ResolverTable(universe).registered(parse_address("src"), {"d", "src"});
    for (std::size_t i = 0; i < n; ++i) {
      auto relay = parse_address("r" + std::to_string(i));
      resolver = resolver.registered(relay, {"d", "r" + std::to_string(i)});
      L5Path p;
      p.hops = {parse_address("src"), relay, parse_address("dst")};
      p.link_domains = {"d", "d"};
      p.path_id = static_cast<PathId>(i);
      p.metric_us = latency * (i + 1);
      p.min_capacity_mbps = 100;
      paths.push_back(p);
      reverse[p.path_id] = {"d", "r" + std::to_string(i)};
    }
  }

  SessionSender sender(std::map<PathId, Rational> rates)
  {
    return open_session(9, parse_address("src"), parse_address("dst"), "atlas", paths, rates, resolver);
  }
};

std::shared_ptr<const std::vector<std::uint8_t>>
content(std::size_t n, std::uint64_t key = 3)
{
  return std::make_shared<const std::vector<std::uint8_t>>(wire::synthetic_bytes(key, n));
}

}  // namespace

TEST(Sender, CutsStreamsIntoSegments)
{
  Fixture f(1);
  auto tx = f.sender({{0, 10}});
  tx.enqueue_stream(content(20000));
  EXPECT_EQ(tx.segment_count(), 3u);
  EXPECT_EQ(tx.bytes_enqueued(), 20000u);
  EXPECT_THROW(tx.enqueue(Payload()), std::invalid_argument);
}

TEST(Sender, OpenErrors)
{
  Fixture f(1);
  try {
    open_session(1, parse_address("src"), parse_address("dst"), "t", {}, {}, f.resolver);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoPaths);
  }
  try {
    f.sender({});
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingRate);
  }
}

TEST(Sender, PacesAtTheAllocatedRate)
{
  // 65536 bits per segment at 8 Mbps = 8192 us per slot; long path so nothing times out
  Fixture f(1, 100000);
  auto tx = f.sender({{0, 8}});
  tx.enqueue_stream(content(8192 * 5));
  auto out = tx.schedule(0, 100000);
  ASSERT_EQ(out.size(), 5u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].emit_time, 8192 * i);
    EXPECT_EQ(out[i].segment.seq, i);
    EXPECT_EQ(out[i].segment.l3_dest, (L3Locator{"d", "r0"}));
    EXPECT_FALSE(out[i].segment.is_retransmit);
  }
}

TEST(Sender, FractionalSlotsRoundUp)
{
  Fixture f(1, 100000);
  auto tx = f.sender({{0, 3}});
  tx.enqueue_stream(content(8192 * 3));
  auto out = tx.schedule(0, 100000);
  ASSERT_EQ(out.size(), 3u);
  // 65536 / 3 = 21845.33..; slots start at 0, ceil(21845.33), ceil(43690.67)
  EXPECT_EQ(out[1].emit_time, 21846u);
  EXPECT_EQ(out[2].emit_time, 43691u);
}

TEST(Sender, ZeroRatePathIsIdle)
{
  Fixture f(2);
  auto tx = f.sender({{0, 0}, {1, 8}});
  tx.enqueue_stream(content(8192 * 2));
  for (const auto& s : tx.schedule(0, 100000))
    EXPECT_EQ(s.segment.path_id, 1u);
  EXPECT_EQ(tx.path_stats(0).segments, 0u);
}

TEST(Sender, TimeoutRetransmitsAndKarnSkipsAmbiguousSamples)
{
  Fixture f(1);
  auto tx = f.sender({{0, 100}});
  tx.enqueue_stream(content(100));
  auto first = tx.schedule(0);
  ASSERT_EQ(first.size(), 1u);
  double rtt0 = tx.rtt_estimate(0);
  auto wake = tx.next_wakeup(1);
  ASSERT_TRUE(wake);
  EXPECT_EQ(*wake, static_cast<Micros>(std::ceil(2 * rtt0)));
  auto again = tx.schedule(*wake);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_TRUE(again[0].segment.is_retransmit);

  SessionReceiver rx(9, "atlas", f.reverse);
  auto res = rx.on_receive(again[0].segment, *wake + 10);
  tx.on_ack(res.acks.at(0), *wake + 10);
  EXPECT_TRUE(tx.acked(0));
  EXPECT_DOUBLE_EQ(tx.rtt_estimate(0), rtt0);
  tx.close();
  EXPECT_TRUE(tx.complete());
}

TEST(Sender, SmoothedRttFromCleanSamples)
{
  Fixture f(1);
  auto tx = f.sender({{0, 100}});
  tx.enqueue_stream(content(8192 * 3));
  SessionReceiver rx(9, "atlas", f.reverse);
  auto out = tx.schedule(0, 100000);
  ASSERT_EQ(out.size(), 3u);
  std::vector<Micros> acked_at{out[0].emit_time + 800, out[1].emit_time + 1600, out[2].emit_time + 800};
  double want = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    auto res = rx.on_receive(out[i].segment, acked_at[i]);
    tx.on_ack(res.acks[0], acked_at[i]);
    double sample = static_cast<double>(acked_at[i] - out[i].emit_time);
    want = i == 0 ? sample : 0.875 * want + 0.125 * sample;
  }
  EXPECT_DOUBLE_EQ(tx.rtt_estimate(0), want);
}

TEST(Receiver, ReordersAndSacks)
{
  Fixture f(1);
  auto tx = f.sender({{0, 1000}});
  tx.enqueue_stream(content(8192 * 4));
  auto out = tx.schedule(0, 1000000);
  ASSERT_EQ(out.size(), 4u);
  SessionReceiver rx(9, "atlas", f.reverse);
  auto r2 = rx.on_receive(out[2].segment, 1);
  EXPECT_TRUE(r2.delivered.empty());
  ASSERT_EQ(r2.acks.size(), 1u);
  EXPECT_EQ(r2.acks[0].cumulative_ack, 0u);
  ASSERT_EQ(r2.acks[0].sacks.size(), 1u);
  EXPECT_EQ(r2.acks[0].sacks[0], (SackRange{2, 3}));
  EXPECT_EQ(r2.acks[0].l3_dest, (L3Locator{"d", "r0"}));
  EXPECT_EQ(rx.buffered(), 1u);
  auto r0 = rx.on_receive(out[0].segment, 2);
  EXPECT_EQ(r0.delivered.size(), 1u);
  auto r1 = rx.on_receive(out[1].segment, 3);
  ASSERT_EQ(r1.delivered.size(), 2u);
  EXPECT_EQ(r1.delivered[1].seq, 2u);
  EXPECT_EQ(rx.next_expected(), 3u);
  rx.on_receive(out[1].segment, 4);
  EXPECT_EQ(rx.duplicates(), 1u);
  rx.on_receive(out[3].segment, 5);
  EXPECT_EQ(rx.delivered_digest(), wire::fnv1a64(*content(8192 * 4)));
}

TEST(Receiver, RejectsOtherSessions)
{
  SessionReceiver rx(1, "t", {});
  Segment s;
  s.session_id = 2;
  try {
    rx.on_receive(s, 0);
    FAIL();
  }
  catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SessionMismatch);
  }
}

TEST(Segment, EncodingLayout)
{
  Segment s;
  s.session_id = 1;
  s.tag = "cms";
  s.l3_dest = {"d", "x"};
  s.payload = Payload::copy_of(std::vector<std::uint8_t>{1, 2, 3});
  auto bytes = encode(s);
  EXPECT_EQ(bytes.size(), 1 + 8 + 8 + 4 + 1 + (4 + 3) + (4 + 1) + (4 + 1) + 8 + 2 + (4 + 3));
  EXPECT_EQ(bytes.back(), 3);
  wire::Fnv1a64 h;
  wire::Writer w(h);
  encode(w, s);
  EXPECT_EQ(h.digest(), wire::fnv1a64(bytes));
}

TEST(Loopback, LosslessDeliveryIsExact)
{
  Fixture f(2);
  auto tx = f.sender({{0, 40}, {1, 60}});
  auto data = content(300000, 11);
  tx.enqueue_stream(data);
  tx.close();
  SessionReceiver rx(9, "atlas", f.reverse);
  oracle::Loopback lb;
  lb.pipes = {{0, {2000, 0}}, {1, {5000, 0}}};
  lb.run(tx, rx);
  EXPECT_TRUE(tx.complete());
  EXPECT_EQ(rx.delivered_digest(), wire::fnv1a64(*data));
  EXPECT_EQ(rx.duplicates(), 0u);
  for (const auto& e : lb.emissions)
    EXPECT_FALSE(e.retransmit);
}

TEST(Loopback, LossyMultipathIsReliableAndPaced)
{
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    Fixture f(3);
    std::map<PathId, Rational> rates{{0, 50}, {1, 30}, {2, 20}};
    auto tx = f.sender(rates);
    auto data = content(1 << 20, seed);
    tx.enqueue_stream(data);
    tx.close();
    SessionReceiver rx(9, "atlas", f.reverse);
    oracle::Loopback lb;
    lb.seed = seed;
    lb.pipes = {{0, {1500, 0.1}}, {1, {7000, 0.1}}, {2, {20000, 0.1}}};
    lb.run(tx, rx);
    ASSERT_TRUE(tx.complete()) << "seed " << seed;
    EXPECT_EQ(rx.delivered_digest(), wire::fnv1a64(*data));
    for (const auto& [id, rate] : rates) {
      EXPECT_LE(lb.bucket_excess(id, to_double(rate)), 1.0) << "path " << id;
      EXPECT_LE(lb.measured_mbps(id, to_double(rate)), to_double(rate) * 1.01);
      EXPECT_LE(tx.rate_compliance(id), 1.01);
    }
  }
}

TEST(Sender, ReplacePathsRetransmitsOnTheNewSet)
{
  Fixture f(2);
  auto tx = open_session(9, parse_address("src"), parse_address("dst"), "atlas", {f.paths[0]},
                         {{0, 100}}, f.resolver);
  tx.enqueue_stream(content(8192 * 2));
  auto out = tx.schedule(0, 10);
  ASSERT_EQ(out.size(), 1u);
  auto fresh = f.paths[1];
  fresh.path_id = 5;
  tx.replace_paths({fresh}, {{5, 100}}, f.resolver, 20);
  EXPECT_EQ(tx.rate(0), 0);
  auto later = tx.schedule(1000000, 1000001 + 100000);
  ASSERT_FALSE(later.empty());
  for (const auto& s : later) {
    EXPECT_EQ(s.segment.path_id, 5u);
    EXPECT_EQ(s.segment.l3_dest, (L3Locator{"d", "r1"}));
  }
  EXPECT_EQ(tx.path_ids(), (std::vector<PathId>{0, 5}));
}
