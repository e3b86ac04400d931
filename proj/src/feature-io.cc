// aud/feature-io.cc

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

#include "aud/feature-io.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <set>
#include <ostream>
#include <sstream>

namespace aud {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

bool FrameMatrix::operator==(const FrameMatrix &other) const {
  if (utt_id != other.utt_id || values.rows() != other.values.rows() ||
      values.cols() != other.values.cols())
    return false;
  // Bitwise comparison so that -0.0f and 0.0f are distinguished.
  return values.size() == 0 ||
         std::memcmp(values.data(), other.values.data(),
                     sizeof(float) * values.size()) == 0;
}

FeatureArchive::FeatureArchive(double frame_shift_ms) {
  set_frame_shift_ms(frame_shift_ms);
}

void FeatureArchive::set_frame_shift_ms(double ms) {
  if (!(ms > 0.0) || !std::isfinite(ms))
    throw FormatError("frame shift must be a positive finite number");
  frame_shift_ms_ = ms;
}

void FeatureArchive::add(FrameMatrix utt) {
  if (utt.utt_id.empty()) throw FormatError("empty utterance id");
  if (index_.count(utt.utt_id)) throw FormatError("duplicate utterance id " + utt.utt_id);
  if (utt.n_frames() < 1 || utt.dim() < 1)
    throw DimensionError("utterance " + utt.utt_id + " has an empty feature matrix");
  if (!utts_.empty() && utt.dim() != dim())
    throw DimensionError("utterance " + utt.utt_id + " has dimension " +
                         std::to_string(utt.dim()) + ", archive has " +
                         std::to_string(dim()));
  if (!utt.values.allFinite())
    throw DataError("utterance " + utt.utt_id + " contains non-finite values");
  index_.emplace(utt.utt_id, utts_.size());
  utts_.push_back(std::move(utt));
}

const FrameMatrix *FeatureArchive::find(std::string_view utt_id) const {
  auto it = index_.find(std::string(utt_id));
  return it == index_.end() ? nullptr : &utts_[it->second];
}

const FrameMatrix &FeatureArchive::at(std::string_view utt_id) const {
  const FrameMatrix *m = find(utt_id);
  if (m == nullptr) throw KeyError("no utterance " + std::string(utt_id) + " in archive");
  return *m;
}

FrameIndex FeatureArchive::total_frames() const {
  FrameIndex total = 0;
  for (const auto &u : utts_) total += u.n_frames();
  return total;
}

bool FeatureArchive::operator==(const FeatureArchive &other) const {
  return std::bit_cast<std::uint64_t>(frame_shift_ms_) ==
             std::bit_cast<std::uint64_t>(other.frame_shift_ms_) &&
         utts_ == other.utts_;
}

namespace {

template <typename UInt>
void put_le(std::string &out, UInt v) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class ByteReader {
 public:
  explicit ByteReader(std::string bytes) : bytes_(std::move(bytes)) {}

  template <typename UInt>
  UInt get_le(const char *what) {
    need(sizeof(UInt), what);
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
      v |= static_cast<UInt>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += sizeof(UInt);
    return v;
  }

  std::string get_bytes(std::size_t n, const char *what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char *what) {
    if (remaining() < n)
      throw FormatError(std::string("truncated archive while reading ") + what);
  }

  std::string bytes_;
  std::size_t pos_ = 0;
};

std::string encode_archive(const FeatureArchive &archive) {
  std::string out;
  out.append("AUDF");
  put_le<std::uint32_t>(out, kAudfVersion);
  put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(archive.frame_shift_ms()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(archive.size()));
  for (const FrameMatrix &utt : archive) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(utt.utt_id.size()));
    out.append(utt.utt_id);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(utt.n_frames()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(utt.dim()));
    const float *p = utt.values.data();
    for (Eigen::Index i = 0; i < utt.values.size(); ++i)
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(p[i]));
  }
  return out;
}

std::string read_all(std::istream &is) {
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace

FeatureArchive read_feature_archive(std::istream &is) {
  ByteReader in(read_all(is));
  if (in.remaining() < 4 || in.get_bytes(4, "magic") != "AUDF")
    throw FormatError("bad magic, not an AUDF archive");
  const auto version = in.get_le<std::uint32_t>("version");
  if (version != kAudfVersion)
    throw FormatError("unsupported AUDF version " + std::to_string(version));
  const double shift = std::bit_cast<double>(in.get_le<std::uint64_t>("frame shift"));
  if (!(shift > 0.0) || !std::isfinite(shift)) throw FormatError("invalid frame shift");
  FeatureArchive archive(shift);
  const auto n_utts = in.get_le<std::uint32_t>("utterance count");
  for (std::uint32_t u = 0; u < n_utts; ++u) {
    FrameMatrix utt;
    const auto id_len = in.get_le<std::uint32_t>("utterance id length");
    utt.utt_id = in.get_bytes(id_len, "utterance id");
    const auto rows = in.get_le<std::uint32_t>("frame count");
    const auto cols = in.get_le<std::uint32_t>("dimension");
    const std::uint64_t n = static_cast<std::uint64_t>(rows) * cols;
    if (n * 4 > in.remaining()) throw FormatError("truncated archive in " + utt.utt_id);
    utt.values.resize(rows, cols);
    float *p = utt.values.data();
    for (std::uint64_t i = 0; i < n; ++i)
      p[i] = std::bit_cast<float>(in.get_le<std::uint32_t>("values"));
    archive.add(std::move(utt));
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes after last utterance");
  return archive;
}

FeatureArchive read_feature_archive(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_feature_archive(is);
}

void write_feature_archive(const FeatureArchive &archive, std::ostream &os) {
  const std::string bytes = encode_archive(archive);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed");
}

void write_feature_archive(const FeatureArchive &archive,
                           const std::filesystem::path &path) {
  internal::write_file_atomically(path, encode_archive(archive));
}

void internal::write_file_atomically(const std::filesystem::path &path,
                                     std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os.flush();
    if (!os) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

// Alignments.

void validate_alignment(const Alignment &ali) {
  if (ali.utt_id.empty()) throw FormatError("alignment with empty utterance id");
  if (ali.entries.empty()) throw FormatError("alignment for " + ali.utt_id + " is empty");
  if (ali.entries.front().start != 0)
    throw ContiguityError("alignment for " + ali.utt_id + " does not start at frame 0");
  for (std::size_t i = 0; i < ali.entries.size(); ++i) {
    const AlignmentEntry &e = ali.entries[i];
    if (e.start >= e.end)
      throw FormatError("alignment for " + ali.utt_id + " has an empty interval at frame " +
                        std::to_string(e.start));
    if (i > 0 && ali.entries[i - 1].end != e.start)
      throw ContiguityError("alignment for " + ali.utt_id + " has a gap or overlap at frame " +
                            std::to_string(e.start));
  }
}

FrameCounts frame_counts(const FeatureArchive &archive) {
  FrameCounts counts;
  for (const auto &u : archive) counts.emplace(u.utt_id, u.n_frames());
  return counts;
}

namespace {

bool parse_frame(std::string_view s, FrameIndex &out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && out >= 0;
}

bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return false;
  return true;
}

}  // namespace

std::vector<Alignment> parse_alignments(std::istream &is, const FrameCounts *expected) {
  std::vector<Alignment> out;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string &msg) -> FormatError {
    return FormatError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      auto sp = rest.find(' ');
      fields.push_back(rest.substr(0, sp));
      if (sp == std::string_view::npos) break;
      rest.remove_prefix(sp + 1);
    }
    if (fields.size() != 4) throw fail("expected 4 space-separated fields");
    for (auto f : fields)
      if (!valid_token(f)) throw fail("empty field or stray whitespace");
    AlignmentEntry e;
    if (!parse_frame(fields[1], e.start) || !parse_frame(fields[2], e.end))
      throw fail("bad frame index");
    if (e.start >= e.end) throw fail("interval end must exceed start");
    e.label = std::string(fields[3]);

    if (out.empty() || out.back().utt_id != fields[0]) {
      if (seen.count(fields[0]))
        throw fail("lines for utterance " + std::string(fields[0]) + " are not grouped");
      seen.emplace(std::string(fields[0]), out.size());
      out.push_back(Alignment{std::string(fields[0]), {}});
      if (e.start != 0)
        throw ContiguityError("line " + std::to_string(line_no) + ": utterance " +
                              out.back().utt_id + " does not start at frame 0");
    } else if (out.back().entries.back().end != e.start) {
      throw ContiguityError("line " + std::to_string(line_no) + ": gap or overlap at frame " +
                            std::to_string(e.start) + " in " + out.back().utt_id);
    }
    out.back().entries.push_back(std::move(e));
  }
  if (is.bad()) throw IoError("read error");

  if (expected != nullptr) {
    for (const Alignment &a : out) {
      auto it = expected->find(a.utt_id);
      if (it == expected->end())
        throw CoverageError("utterance " + a.utt_id + " has no features");
      if (it->second != a.n_frames())
        throw CoverageError("utterance " + a.utt_id + " covers " + std::to_string(a.n_frames()) +
                            " frames, expected " + std::to_string(it->second));
    }
    for (const auto &[id, n] : *expected)
      if (!seen.count(id)) throw CoverageError("utterance " + id + " has no alignment");
  }
  return out;
}

std::vector<Alignment> parse_alignment_file(const std::filesystem::path &path,
                                            const FrameCounts *expected) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return parse_alignments(is, expected);
}

namespace {

std::string encode_alignments(std::span<const Alignment> alignments) {
  std::string out;
  std::set<std::string_view> ids;
  for (const Alignment &a : alignments) {
    validate_alignment(a);
    if (!ids.insert(a.utt_id).second)
      throw FormatError("utterance " + a.utt_id + " appears twice");
    if (!valid_token(a.utt_id) || a.utt_id[0] == '#')
      throw FormatError("utterance id '" + a.utt_id + "' cannot be written");
    for (const AlignmentEntry &e : a.entries) {
      if (!valid_token(e.label))
        throw FormatError("label '" + e.label + "' in " + a.utt_id + " cannot be written");
      out += a.utt_id;
      out += ' ';
      out += std::to_string(e.start);
      out += ' ';
      out += std::to_string(e.end);
      out += ' ';
      out += e.label;
      out += '\n';
    }
  }
  return out;
}

}  // namespace

void write_alignments(std::span<const Alignment> alignments, std::ostream &os) {
  const std::string text = encode_alignments(alignments);
  os << text;
  if (!os) throw IoError("write failed");
}

void serialize_alignment(std::span<const Alignment> alignments,
                         const std::filesystem::path &path) {
  internal::write_file_atomically(path, encode_alignments(alignments));
}

}  // namespace aud
