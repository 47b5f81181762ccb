#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqnature {

// Error taxonomy shared by the whole library. The C API maps these to
// status codes; the CLI maps them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Direction : uint8_t { upstream, downstream };

const char* to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

enum class DomainKind : uint8_t { sni, dns, ip };

const char* to_string(DomainKind k);
std::optional<DomainKind> domain_kind_from_string(std::string_view s);

// Server label of a TCP stream: an SNI hostname, a DNS-derived hostname,
// or the bare endpoint IP when no name is known.
struct DomainLabel {
  std::string value;
  DomainKind kind = DomainKind::ip;

  bool is_name() const { return kind != DomainKind::ip; }
  auto operator<=>(const DomainLabel&) const = default;
};

// Nanosecond-resolution capture timestamp. Kept as integers so that
// window arithmetic and interval comparisons are exact.
struct Timestamp {
  int64_t sec = 0;
  int64_t nsec = 0;  // always in [0, 1e9)

  auto operator<=>(const Timestamp&) const = default;

  Timestamp plus(const Timestamp& d) const;

  // Parses "1617000123.25" style decimal seconds. Fractions beyond 9
  // digits are truncated.
  static std::optional<Timestamp> parse(std::string_view decimal_seconds);

  std::string to_string() const;
};

// One payload-carrying TCP packet of a tabulated traffic sample.
struct PacketRecord {
  int64_t event_id = 0;
  int32_t sample_id = 0;
  int32_t stream_id = 0;
  DomainLabel domain;
  int32_t position_in_stream = 0;  // 1-based within the stream
  uint32_t size = 0;               // IP datagram length in bytes
  Direction direction = Direction::upstream;

  bool operator==(const PacketRecord&) const = default;
};

// All packets of one event invocation. Row order is the serialized order
// (ingest emits global timestamp order); per-stream subsequences carry
// contiguous positions 1..len.
class TabulatedTrafficSample {
 public:
  TabulatedTrafficSample() = default;
  TabulatedTrafficSample(int64_t event_id, int32_t sample_id,
                         std::vector<PacketRecord> rows);

  int64_t event_id() const { return event_id_; }
  int32_t sample_id() const { return sample_id_; }
  const std::vector<PacketRecord>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  // Rows grouped per stream, in position order.
  std::map<int32_t, std::vector<const PacketRecord*>> streams() const;
  size_t stream_count() const;

  bool operator==(const TabulatedTrafficSample& o) const {
    return event_id_ == o.event_id_ && sample_id_ == o.sample_id_ &&
           rows_ == o.rows_;
  }

 private:
  int64_t event_id_ = 0;
  int32_t sample_id_ = 0;
  std::vector<PacketRecord> rows_;
};

}  // namespace seqnature
