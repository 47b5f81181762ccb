#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcap.hpp"

namespace seqnature {

// Time-ordered record of observed DNS responses: queried name plus every
// A/AAAA address the response carried (CNAME chains collapse onto the
// original question name).
struct DnsLogEntry {
  Timestamp ts;
  std::string queried_name;
  std::vector<IpAddr> resolved;
};

struct DnsLog {
  std::vector<DnsLogEntry> entries;  // sorted by timestamp

  // Name of the most recent response at or before `at` that resolved to
  // `addr`.
  std::optional<std::string> lookup(const IpAddr& addr, const Timestamp& at) const;
};

// Parses one DNS message; non-responses and messages without usable
// answers yield nullopt.
std::optional<DnsLogEntry> parse_dns_response(std::span<const uint8_t> message,
                                              const Timestamp& ts);

// Collects DNS responses from every UDP port-53 packet of a capture.
DnsLog build_dns_log(const RawCapture& capture);

}  // namespace seqnature
