#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "domain.hpp"

namespace seqnature {

struct SummaryPacketSequence;  // fingerprint.hpp

// One packet of a packet sequence: the per-packet features the distance
// metrics read.
struct SeqPacket {
  uint32_t size = 0;
  Direction direction = Direction::upstream;
  DomainLabel domain;

  bool operator==(const SeqPacket&) const = default;
};

// An n-gram of consecutive packets within one TCP stream (the refinement
// unit). All packets share the stream's domain label.
struct PacketSequence {
  int64_t event_id = 0;
  int32_t sample_id = 0;
  int32_t stream_id = 0;
  int32_t start_position = 0;  // 1-based position of packets[0]
  std::vector<SeqPacket> packets;

  size_t length() const { return packets.size(); }
  const DomainLabel& domain() const { return packets.front().domain; }

  bool operator==(const PacketSequence&) const = default;
};

enum class TechniqueKind : uint8_t { sdbf, esdbf, ebf, fqdnbf, esldbf, custom };

// Fingerprinting technique selector. size_slack is the h threshold folded
// into the SDBF/ESDBF distance; endpoint techniques ignore it.
struct Technique {
  TechniqueKind kind = TechniqueKind::sdbf;
  double size_slack = 0.0;  // h, bytes
  std::string custom_name;  // set iff kind == custom

  bool is_endpoint_only() const {
    return kind == TechniqueKind::ebf || kind == TechniqueKind::fqdnbf ||
           kind == TechniqueKind::esldbf;
  }

  std::string name() const;  // "sdbf", ..., "custom:<name>"
  static std::optional<Technique> parse(std::string_view name, double size_slack = 0.0);

  bool operator==(const Technique&) const = default;
};

// Non-negative distance or the MAXIMAL sentinel, which compares greater
// than every finite value.
class Distance {
 public:
  static Distance maximal() { return Distance(0.0, true); }
  static Distance finite(double v) { return Distance(v, false); }

  bool is_maximal() const { return maximal_; }
  double value() const;  // throws on maximal

  bool is_zero() const { return !maximal_ && value_ == 0.0; }
  bool within(double epsilon) const { return !maximal_ && value_ <= epsilon; }

  friend bool operator==(const Distance& a, const Distance& b) {
    return a.maximal_ == b.maximal_ && (a.maximal_ || a.value_ == b.value_);
  }
  friend bool operator<(const Distance& a, const Distance& b) {
    if (a.maximal_) return false;
    if (b.maximal_) return true;
    return a.value_ < b.value_;
  }

 private:
  Distance(double v, bool m) : value_(v), maximal_(m) {}
  double value_;
  bool maximal_;
};

enum class EndpointGranularity : uint8_t {
  fqdn_or_ip,  // EBF and the ESDBF endpoint gate
  fqdn,        // FQDNBF
  esld,        // eSLDBF
};

// Endpoint identifier at a granularity. FQDN and eSLD granularities have
// no identifier for IP labels (and eSLD none for hosts that are public
// suffixes themselves).
struct EndpointId {
  bool is_name = false;
  std::string value;

  auto operator<=>(const EndpointId&) const = default;
};

std::optional<EndpointId> endpoint_id(const DomainLabel& domain,
                                      EndpointGranularity granularity);

// Definition-level metrics. Length mismatch is a caller bug and throws.
Distance sdbf_distance(const PacketSequence& p1, const PacketSequence& p2);
Distance esdbf_distance(const PacketSequence& p1, const PacketSequence& p2);
Distance endpoint_distance(const PacketSequence& p1, const PacketSequence& p2,
                           EndpointGranularity granularity);

// The metric refinement actually clusters with: applies the technique's
// size slack (finite d becomes max(0, d - h)) and dispatches custom
// metrics through the registry.
Distance technique_distance(const Technique& t, const PacketSequence& p1,
                            const PacketSequence& p2);

// Per-packet equality token: the suffix-tree alphabet and the element of
// the canonical clustering key. Two packets with equal tokens are
// interchangeable under the technique.
std::string packet_token(const Technique& t, const SeqPacket& p);

// Canonical key realizing the technique's "distance 0" classes at h=0.
// nullopt when the sequence has no identifier under the technique (it can
// never join a cluster).
std::optional<std::vector<std::string>> sequence_key(const Technique& t,
                                                     const PacketSequence& p);

// True when grouping by sequence_key reproduces epsilon=0 clustering
// exactly (endpoint techniques always; SDBF/ESDBF only at h=0).
bool has_exact_key(const Technique& t);

// User-defined metrics, selected as "custom:<name>". window_match may be
// empty; the matcher then falls back to exact per-index feature matching.
struct CustomMetric {
  std::function<Distance(const PacketSequence&, const PacketSequence&, double h)> distance;
  std::function<bool(std::span<const PacketRecord>, const SummaryPacketSequence&)> window_match;
};

void register_custom_metric(const std::string& name, CustomMetric metric);
const CustomMetric* find_custom_metric(const std::string& name);

}  // namespace seqnature
