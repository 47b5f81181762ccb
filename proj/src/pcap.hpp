#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domain.hpp"

namespace seqnature {

struct IpAddr {
  bool v6 = false;
  std::array<uint8_t, 16> bytes{};  // v4 packed into bytes[0..3]

  static std::optional<IpAddr> parse(std::string_view text);
  std::string to_string() const;

  // RFC1918 plus loopback and link-local; for v6: loopback, link-local,
  // unique-local.
  bool is_private() const;

  auto operator<=>(const IpAddr&) const = default;
};

enum class TransportProto : uint8_t { tcp, udp, other };

// One captured frame plus the parsed link/IP/TCP view of it. The raw frame
// bytes are kept so captures can be split and re-written losslessly.
struct ParsedPacket {
  Timestamp ts;
  uint32_t capture_index = 0;  // position in the capture file
  uint32_t orig_len = 0;
  std::vector<uint8_t> frame;

  bool is_ip = false;
  IpAddr src;
  IpAddr dst;
  uint32_t ip_length = 0;  // total IP datagram length in bytes

  TransportProto proto = TransportProto::other;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;

  uint32_t tcp_seq = 0;
  bool tcp_syn = false;
  bool tcp_fin = false;
  bool tcp_rst = false;

  uint32_t payload_len = 0;           // from IP header arithmetic
  std::vector<uint8_t> payload;       // captured bytes; may be truncated
};

struct RawCapture {
  int linktype = 1;  // DLT_EN10MB unless the source says otherwise
  std::vector<ParsedPacket> packets;  // sorted by timestamp, stable
  uint32_t skipped_malformed = 0;
};

// Reads classic PCAP (either endianness, micro- or nanosecond) or PCAPNG.
// Packets are sorted by timestamp on load; frames that fail link/IP/TCP
// header validation are counted in skipped_malformed and carried through
// with is_ip=false.
RawCapture read_capture(const std::string& path);

// Writes a classic nanosecond-resolution PCAP.
void write_capture(const RawCapture& capture, const std::string& path);

// Re-parses headers of a raw frame; used by read_capture and tests.
void parse_frame(ParsedPacket& packet, int linktype);

}  // namespace seqnature
