#pragma once

// RIFF/WAVE decoder for 16-bit PCM, mono or stereo, 8-192 kHz. Stereo is
// downmixed by averaging the two channels; samples are scaled by 1/32768.

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weberbits/error.hpp"

namespace weberbits {

struct SampleBuffer {
  std::vector<double> samples;
  std::uint32_t sample_rate = 0;
  int channel_count_original = 0;
};

inline constexpr std::uint32_t kMinSampleRate = 8000;
inline constexpr std::uint32_t kMaxSampleRate = 192000;

namespace wav_detail {

inline constexpr std::uint16_t kFormatPcm = 0x0001;
inline constexpr std::uint16_t kFormatExtensible = 0xFFFE;

// KSDATAFORMAT_SUBTYPE_PCM without the leading format code.
inline constexpr std::array<std::uint8_t, 14> kPcmGuidTail = {
    0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80, 0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (n > remaining()) {
      throw Error(ErrorKind::CorruptFile, std::string("truncated ") + what);
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void skip(std::size_t n, const char* what) { take(n, what); }

  std::uint16_t u16(const char* what) {
    auto b = take(2, what);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }

  std::uint32_t u32(const char* what) {
    auto b = take(4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }

  bool fourcc(const char (&tag)[5], const char* what) {
    auto b = take(4, what);
    return std::memcmp(b.data(), tag, 4) == 0;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

inline Format parse_fmt(std::span<const std::uint8_t> body) {
  ByteReader r(body);
  Format f;
  f.tag = r.u16("fmt chunk");
  f.channels = r.u16("fmt chunk");
  f.sample_rate = r.u32("fmt chunk");
  r.u32("fmt chunk");  // byte rate
  f.block_align = r.u16("fmt chunk");
  f.bits_per_sample = r.u16("fmt chunk");
  if (f.tag == kFormatExtensible) {
    const std::uint16_t ext_size = r.u16("fmt extension");
    if (ext_size < 22) throw Error(ErrorKind::CorruptFile, "short WAVE_FORMAT_EXTENSIBLE block");
    r.u16("fmt extension");  // valid bits
    r.u32("fmt extension");  // channel mask
    const std::uint16_t sub = r.u16("fmt extension");
    auto tail = r.take(kPcmGuidTail.size(), "fmt extension");
    const bool pcm_guid = std::memcmp(tail.data(), kPcmGuidTail.data(), kPcmGuidTail.size()) == 0;
    f.tag = pcm_guid ? sub : 0;
  }
  return f;
}

inline short to_i16(std::uint8_t lo, std::uint8_t hi) {
  return static_cast<short>(static_cast<std::uint16_t>(lo | (hi << 8)));
}

}  // namespace wav_detail

inline SampleBuffer read_wav(std::span<const std::uint8_t> bytes) {
  using wav_detail::ByteReader;
  ByteReader r(bytes);
  if (!r.fourcc("RIFF", "RIFF header")) throw Error(ErrorKind::CorruptFile, "missing RIFF magic");
  const std::uint32_t riff_size = r.u32("RIFF header");
  if (!r.fourcc("WAVE", "RIFF header")) throw Error(ErrorKind::CorruptFile, "missing WAVE magic");
  if (riff_size < 4 || riff_size - 4 > r.remaining()) {
    throw Error(ErrorKind::CorruptFile, "RIFF size exceeds file length");
  }
  ByteReader chunks(bytes.subspan(r.position(), riff_size - 4));

  std::optional<wav_detail::Format> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  while (chunks.remaining() >= 8 && !data) {
    auto id = chunks.take(4, "chunk header");
    const std::uint32_t size = chunks.u32("chunk header");
    auto body = chunks.take(size, "chunk body");
    if (std::memcmp(id.data(), "fmt ", 4) == 0) {
      fmt = wav_detail::parse_fmt(body);
    } else if (std::memcmp(id.data(), "data", 4) == 0) {
      if (!fmt) throw Error(ErrorKind::CorruptFile, "data chunk precedes fmt chunk");
      data = body;
    }
    if ((size & 1u) != 0 && chunks.remaining() > 0) chunks.skip(1, "chunk padding");
  }
  if (!fmt) throw Error(ErrorKind::CorruptFile, "missing fmt chunk");
  if (!data) throw Error(ErrorKind::CorruptFile, "missing data chunk");

  if (fmt->tag != wav_detail::kFormatPcm) {
    throw Error(ErrorKind::UnsupportedFormat,
                "format tag " + std::to_string(fmt->tag) + " is not PCM");
  }
  if (fmt->bits_per_sample != 16) {
    throw Error(ErrorKind::UnsupportedFormat,
                std::to_string(fmt->bits_per_sample) + "-bit samples are not supported");
  }
  if (fmt->channels == 0) throw Error(ErrorKind::CorruptFile, "zero channels");
  if (fmt->channels > 2) {
    throw Error(ErrorKind::UnsupportedFormat,
                std::to_string(fmt->channels) + " channels are not supported");
  }
  if (fmt->sample_rate < kMinSampleRate || fmt->sample_rate > kMaxSampleRate) {
    throw Error(ErrorKind::UnsupportedFormat,
                "sample rate " + std::to_string(fmt->sample_rate) + " Hz is out of range");
  }
  const std::size_t frame_bytes = 2u * fmt->channels;
  if (fmt->block_align != frame_bytes) {
    throw Error(ErrorKind::CorruptFile, "block align does not match channel layout");
  }
  if (data->empty()) throw Error(ErrorKind::CorruptFile, "data chunk is empty");
  if (data->size() % frame_bytes != 0) {
    throw Error(ErrorKind::CorruptFile, "data chunk ends mid-frame");
  }

  SampleBuffer out;
  out.sample_rate = fmt->sample_rate;
  out.channel_count_original = fmt->channels;
  const std::size_t frames = data->size() / frame_bytes;
  out.samples.reserve(frames);
  const auto& d = *data;
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t at = i * frame_bytes;
    const double left = wav_detail::to_i16(d[at], d[at + 1]);
    if (fmt->channels == 1) {
      out.samples.push_back(left / 32768.0);
    } else {
      const double right = wav_detail::to_i16(d[at + 2], d[at + 3]);
      out.samples.push_back((left + right) / 2.0 / 32768.0);
    }
  }
  return out;
}

inline SampleBuffer read_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::IoError, "failed reading " + path.string());
  return read_wav(bytes);
}

}  // namespace weberbits
