// Copyright 2026 The fleetd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "fleet/core/ipv6.hpp"
#include "fleet/core/record_log.hpp"
#include "fleet/core/rng.hpp"
#include "fleet/core/strings.hpp"
#include "fleet/core/value.hpp"

using namespace fleet;

TEST(Value, RoundTrip) {
  EXPECT_EQ(Value::parse("true").kind(), Value::Kind::Bool);
  EXPECT_EQ(Value::parse("-42").as_int(), -42);
  EXPECT_EQ(Value::parse("hello").as_string(), "hello");
  const Value d(Digest::of("abc"));
  EXPECT_EQ(Value::parse(d.to_string()), d);
  // Strings that look like nothing else stay strings.
  EXPECT_TRUE(Value::parse("12abc").is_string());
}

TEST(Value, DigestHexRoundTrip) {
  Digest d = Digest::of("some layer");
  Digest parsed;
  ASSERT_TRUE(Digest::parse_hex(d.hex(), parsed));
  EXPECT_EQ(parsed, d);
}

TEST(RecordLog, RoundTripAndCorruption) {
  std::string buf;
  record_log::append(buf, "first");
  record_log::append(buf, "second record");
  auto decoded = record_log::decode_all(buf);
  ASSERT_TRUE(decoded.ok());
  ASSERT_EQ(decoded.value().size(), 2u);
  EXPECT_EQ(decoded.value()[0], "first");
  EXPECT_EQ(decoded.value()[1], "second record");

  // One flipped payload byte fails the checksum.
  std::string corrupt = buf;
  corrupt[14] ^= 0x01;
  auto bad = record_log::decode_all(corrupt);
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.code(), Errc::IntegrityError);

  // Truncation is detected, not silently accepted.
  auto truncated = record_log::decode_all(std::string_view(buf).substr(0, buf.size() - 3));
  ASSERT_FALSE(truncated.ok());
}

TEST(Rng, DeterministicStreams) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(42), d(43);
  EXPECT_NE(c.next(), d.next());
}

TEST(Ipv6, CanonicalFormatting) {
  auto addr = Ipv6::parse("fd00:0:0:0:5:0:c:0");
  ASSERT_TRUE(addr.ok());
  EXPECT_EQ(addr.value().to_string(), "fd00::5:0:c:0");
  EXPECT_EQ(Ipv6::parse("fd00::").value().to_string(), "fd00::");
  EXPECT_EQ(Ipv6::parse("::1").value().to_string(), "::1");
  EXPECT_EQ(Ipv6::parse("fd00::200:0:0:1").value().to_string(), "fd00::200:0:0:1");
  EXPECT_FALSE(Ipv6::parse("fd00::1::2").ok());
  EXPECT_FALSE(Ipv6::parse("fd00:1").ok());
}

TEST(Ipv6, PrefixAndMac) {
  auto prefix = Ipv6Prefix::parse("fd00::/64");
  ASSERT_TRUE(prefix.ok());
  EXPECT_EQ(prefix.value().bytes[0], 0xfd);
  EXPECT_FALSE(Ipv6Prefix::parse("fd00::/48").ok());

  auto mac = Mac48::parse("02:00:00:00:00:01");
  ASSERT_TRUE(mac.ok());
  EXPECT_EQ(mac.value().to_string(), "02:00:00:00:00:01");
  EXPECT_FALSE(Mac48::parse("02:00:00").ok());
}

TEST(FieldLines, ParseAndErrors) {
  auto lines = parse_field_lines("node id=n1 chassis=0 port=7 # comment\n\nfault kind=crash\n");
  ASSERT_TRUE(lines.ok());
  ASSERT_EQ(lines.value().size(), 2u);
  EXPECT_EQ(lines.value()[0].keyword, "node");
  EXPECT_EQ(lines.value()[0].get("id"), "n1");
  EXPECT_EQ(lines.value()[1].get("kind"), "crash");

  EXPECT_FALSE(parse_field_lines("x a=1 a=2").ok());
}
