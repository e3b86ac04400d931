// tests/feature-io-test.cc

// Copyright 2026  The audkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "aud/feature-io.h"
#include "test-util.h"

namespace aud {
namespace {

using testing::fnv1a;
using testing::slurp;
using testing::spit;
using testing::TempDir;

// Hand-rolled AUDF encoder for constructing invalid archives.
struct RawArchive {
  std::string bytes;
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f64(double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f32(float f) { u32(std::bit_cast<std::uint32_t>(f)); }
  void header(std::uint32_t n_utts) {
    bytes += "AUDF";
    u32(1);
    f64(10.0);
    u32(n_utts);
  }
  void utt(const std::string &id, std::uint32_t rows, std::uint32_t cols, float fill) {
    u32(static_cast<std::uint32_t>(id.size()));
    bytes += id;
    u32(rows);
    u32(cols);
    for (std::uint32_t i = 0; i < rows * cols; ++i) f32(fill);
  }
};

FeatureArchive decode(const std::string &bytes) {
  std::istringstream is(bytes);
  return read_feature_archive(is);
}

std::string encode(const FeatureArchive &a) {
  std::ostringstream os;
  write_feature_archive(a, os);
  return os.str();
}

TEST_CASE("AUDF round trip of a small archive is bit exact") {
  TempDir dir;
  FeatureArchive a;
  RowMatrixXf m(3, 2);
  m << 0, 0, 1, 1, 2, 2;
  a.add({"u1", m});
  write_feature_archive(a, dir / "a.audf");
  const FeatureArchive b = read_feature_archive(dir / "a.audf");
  CHECK(b == a);
  CHECK(b.at("u1").values == m);
  CHECK(b.frame_shift_ms() == 10.0);
}

TEST_CASE("AUDF layout is little endian with the documented header") {
  FeatureArchive a(12.5);
  RowMatrixXf m(1, 1);
  m << 1.0f;
  a.add({"ab", m});
  RawArchive expected;
  expected.bytes += "AUDF";
  expected.u32(1);
  expected.f64(12.5);
  expected.u32(1);
  expected.utt("ab", 1, 1, 1.0f);
  CHECK(encode(a) == expected.bytes);
  // 1.0f = 0x3F800000, stored low byte first.
  const std::string tail = encode(a).substr(encode(a).size() - 4);
  CHECK(tail == std::string("\x00\x00\x80\x3F", 4));
}

TEST_CASE("AUDF reader rejects malformed input") {
  CHECK_THROWS_AS(decode(""), FormatError);
  CHECK_THROWS_AS(decode("AUD"), FormatError);
  CHECK_THROWS_AS(decode("XUDF\x01\x00\x00\x00"), FormatError);

  RawArchive bad_version;
  bad_version.bytes += "AUDF";
  bad_version.u32(2);
  bad_version.f64(10.0);
  bad_version.u32(0);
  CHECK_THROWS_AS(decode(bad_version.bytes), FormatError);

  RawArchive truncated;
  truncated.header(1);
  truncated.utt("u", 2, 2, 1.0f);
  truncated.bytes.pop_back();
  CHECK_THROWS_AS(decode(truncated.bytes), FormatError);

  RawArchive trailing;
  trailing.header(0);
  trailing.bytes += "x";
  CHECK_THROWS_AS(decode(trailing.bytes), FormatError);

  RawArchive dims;
  dims.header(2);
  dims.utt("a", 2, 40, 0.5f);
  dims.utt("b", 2, 39, 0.5f);
  CHECK_THROWS_AS(decode(dims.bytes), DimensionError);

  RawArchive nan;
  nan.header(1);
  nan.utt("a", 1, 2, std::numeric_limits<float>::quiet_NaN());
  CHECK_THROWS_AS(decode(nan.bytes), DataError);

  RawArchive dup;
  dup.header(2);
  dup.utt("a", 1, 1, 0.f);
  dup.utt("a", 1, 1, 0.f);
  CHECK_THROWS_AS(decode(dup.bytes), FormatError);

  RawArchive empty_utt;
  empty_utt.header(1);
  empty_utt.utt("a", 0, 3, 0.f);
  CHECK_THROWS_AS(decode(empty_utt.bytes), DimensionError);
}

TEST_CASE("AUDF round trip of 100 random utterances") {
  std::mt19937_64 gen(7);
  const FeatureArchive a = testing::random_archive(gen, 100, 13);
  const FeatureArchive b = decode(encode(a));
  CHECK(b == a);
  REQUIRE(b.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].utt_id == a[i].utt_id);
}

TEST_CASE("empty archive round trips") {
  FeatureArchive a;
  const std::string bytes = encode(a);
  CHECK(bytes.size() == 20);
  const FeatureArchive b = decode(bytes);
  CHECK(b.empty());
  CHECK(b.dim() == 0);
}

TEST_CASE("writing the same archive twice gives identical files") {
  TempDir dir;
  std::mt19937_64 gen(11);
  const FeatureArchive a = testing::random_archive(gen, 20, 5);
  write_feature_archive(a, dir / "1.audf");
  write_feature_archive(a, dir / "2.audf");
  CHECK(fnv1a(slurp(dir / "1.audf")) == fnv1a(slurp(dir / "2.audf")));
  CHECK(slurp(dir / "1.audf") == slurp(dir / "2.audf"));
}

TEST_CASE("unwritable path is an IoError") {
  FeatureArchive a;
  CHECK_THROWS_AS(write_feature_archive(a, "/nonexistent-dir/x/a.audf"), IoError);
  CHECK_THROWS_AS(read_feature_archive("/nonexistent-dir/a.audf"), IoError);
}

TEST_CASE("FeatureArchive keeps insertion order and rejects bad utterances") {
  FeatureArchive a;
  a.add({"z", RowMatrixXf::Zero(2, 3)});
  a.add({"a", RowMatrixXf::Zero(1, 3)});
  CHECK(a[0].utt_id == "z");
  CHECK(a[1].utt_id == "a");
  CHECK(a.total_frames() == 3);
  CHECK_THROWS_AS(a.add({"b", RowMatrixXf::Zero(1, 4)}), DimensionError);
  CHECK_THROWS_AS(a.add({"z", RowMatrixXf::Zero(1, 3)}), FormatError);
  RowMatrixXf inf = RowMatrixXf::Zero(1, 3);
  inf(0, 1) = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(a.add({"c", inf}), DataError);
  CHECK_THROWS_AS(a.at("nope"), KeyError);
}

std::vector<Alignment> parse(const std::string &text, const FrameCounts *expected = nullptr) {
  std::istringstream is(text);
  return parse_alignments(is, expected);
}

std::string write(const std::vector<Alignment> &a) {
  std::ostringstream os;
  write_alignments(a, os);
  return os.str();
}

TEST_CASE("alignment parsing") {
  const auto a = parse("u1 0 3 a\nu1 3 5 b\n");
  REQUIRE(a.size() == 1);
  CHECK(a[0] == Alignment{"u1", {{0, 3, "a"}, {3, 5, "b"}}});

  CHECK_THROWS_AS(parse("u1 0 3 a\nu1 4 5 b\n"), ContiguityError);
  CHECK_THROWS_AS(parse("u1 0 3 a\nu1 2 5 b\n"), ContiguityError);
  CHECK_THROWS_AS(parse("u1 1 3 a\n"), ContiguityError);

  FrameCounts expected{{"u1", 6}};
  CHECK_THROWS_AS(parse("u1 0 3 a\nu1 3 5 b\n", &expected), CoverageError);
  FrameCounts two{{"u1", 5}, {"u2", 4}};
  CHECK_THROWS_AS(parse("u1 0 3 a\nu1 3 5 b\n", &two), CoverageError);
  FrameCounts exact{{"u1", 5}};
  CHECK(parse("u1 0 3 a\nu1 3 5 b\n", &exact).size() == 1);
}

TEST_CASE("alignment parser reports malformed lines with their number") {
  try {
    parse("# header\nu1 0 3 a\nu1 3 x b\n");
    FAIL("expected FormatError");
  } catch (const FormatError &e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("u1 0 3\n"), FormatError);
  CHECK_THROWS_AS(parse("u1 0 3 a b\n"), FormatError);
  CHECK_THROWS_AS(parse("u1  0 3 a\n"), FormatError);
  CHECK_THROWS_AS(parse("u1 0 3 a \n"), FormatError);
  CHECK_THROWS_AS(parse("u1 0 3 a\r\n"), FormatError);
  CHECK_THROWS_AS(parse("u1 3 3 a\n"), FormatError);
  CHECK_THROWS_AS(parse("u1 -1 3 a\n"), FormatError);
  CHECK_THROWS_AS(parse("u1 0 3 a\nu2 0 3 a\nu1 3 4 a\n"), FormatError);
}

TEST_CASE("comments and blank lines are skipped") {
  const auto a = parse("# c\n\nu1 0 2 x\n#u1 2 3 y\nu2 0 1 y\n");
  REQUIRE(a.size() == 2);
  CHECK(a[0].n_frames() == 2);
}

TEST_CASE("alignment round trip of 50 random alignments and deterministic output") {
  std::mt19937_64 gen(3);
  std::vector<Alignment> alis;
  for (int i = 0; i < 50; ++i) alis.push_back(testing::random_alignment(gen, "utt" + std::to_string(i), 6));
  const std::string text = write(alis);
  CHECK(parse(text) == alis);
  CHECK(fnv1a(write(alis)) == fnv1a(text));

  TempDir dir;
  serialize_alignment(alis, dir / "a.ali");
  serialize_alignment(alis, dir / "b.ali");
  CHECK(slurp(dir / "a.ali") == slurp(dir / "b.ali"));
  CHECK(parse_alignment_file(dir / "a.ali") == alis);
}

TEST_CASE("alignment writer rejects unrepresentable values") {
  CHECK_THROWS_AS(write({Alignment{"u1", {{0, 2, "a b"}}}}), FormatError);
  CHECK_THROWS_AS(write({Alignment{"u 1", {{0, 2, "a"}}}}), FormatError);
  CHECK_THROWS_AS(write({Alignment{"#u1", {{0, 2, "a"}}}}), FormatError);
  CHECK_THROWS_AS(write({Alignment{"u1", {{0, 2, ""}}}}), FormatError);
  CHECK_THROWS_AS(write({Alignment{"u1", {{0, 2, "a"}}}, Alignment{"u1", {{0, 2, "a"}}}}),
                  FormatError);
  CHECK_THROWS_AS(write({Alignment{"u1", {{0, 2, "a"}, {3, 4, "b"}}}}), ContiguityError);
}

// Every mutation of a valid file that breaks an invariant must be rejected.
TEST_CASE("parser rejects mutated alignment files") {
  std::mt19937_64 gen(99);
  int rejected = 0, total = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Alignment a = testing::random_alignment(gen, "u", 4, 8, 6);
    if (a.entries.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, a.entries.size() - 1);
    const std::size_t i = pick(gen);
    Alignment m = a;
    switch (trial % 5) {
      case 0:  // shift a start
        m.entries[i].start += (m.entries[i].start == 0 ? 1 : -1);
        break;
      case 1:  // drop an entry that is not last
        m.entries.erase(m.entries.begin() + static_cast<std::ptrdiff_t>(std::min(i, m.entries.size() - 2)));
        break;
      case 2:  // swap two entries
        std::swap(m.entries[0], m.entries[1]);
        break;
      case 3:  // empty interval
        m.entries[i].end = m.entries[i].start;
        break;
      case 4:  // duplicate an entry
        m.entries.insert(m.entries.begin() + static_cast<std::ptrdiff_t>(i), m.entries[i]);
        break;
    }
    std::string text;
    for (const auto &e : m.entries)
      text += "u " + std::to_string(e.start) + " " + std::to_string(e.end) + " " + e.label + "\n";
    ++total;
    try {
      parse(text);
    } catch (const Error &) {
      ++rejected;
    }
  }
  CHECK(total > 200);
  CHECK(rejected == total);
}

}  // namespace
}  // namespace aud
