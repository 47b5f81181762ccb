#include "domain.hpp"

#include <algorithm>
#include <charconv>

namespace seqnature {

const char* to_string(Direction d) {
  return d == Direction::upstream ? "upstream" : "downstream";
}

std::optional<Direction> direction_from_string(std::string_view s) {
  if (s == "upstream") return Direction::upstream;
  if (s == "downstream") return Direction::downstream;
  return std::nullopt;
}

const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::sni: return "sni";
    case DomainKind::dns: return "dns";
    case DomainKind::ip: return "ip";
  }
  return "ip";
}

std::optional<DomainKind> domain_kind_from_string(std::string_view s) {
  if (s == "sni") return DomainKind::sni;
  if (s == "dns") return DomainKind::dns;
  if (s == "ip") return DomainKind::ip;
  return std::nullopt;
}

Timestamp Timestamp::plus(const Timestamp& d) const {
  Timestamp r{sec + d.sec, nsec + d.nsec};
  if (r.nsec >= 1'000'000'000) {
    r.sec += 1;
    r.nsec -= 1'000'000'000;
  }
  return r;
}

std::optional<Timestamp> Timestamp::parse(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  if (s.empty()) return std::nullopt;

  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  Timestamp t;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), t.sec);
  if (ec != std::errc{} || p != whole.data() + whole.size()) return std::nullopt;

  if (dot != std::string_view::npos) {
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty()) return std::nullopt;
    int64_t scale = 100'000'000;
    for (size_t i = 0; i < frac.size() && i < 9; ++i) {
      if (frac[i] < '0' || frac[i] > '9') return std::nullopt;
      t.nsec += (frac[i] - '0') * scale;
      scale /= 10;
    }
    for (size_t i = 9; i < frac.size(); ++i)
      if (frac[i] < '0' || frac[i] > '9') return std::nullopt;
  }
  return t;
}

std::string Timestamp::to_string() const {
  char buf[40];
  snprintf(buf, sizeof buf, "%lld.%09lld", static_cast<long long>(sec),
           static_cast<long long>(nsec));
  return buf;
}

TabulatedTrafficSample::TabulatedTrafficSample(int64_t event_id,
                                               int32_t sample_id,
                                               std::vector<PacketRecord> rows)
    : event_id_(event_id), sample_id_(sample_id), rows_(std::move(rows)) {
  std::map<int32_t, int32_t> next_position;
  for (size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (r.event_id != event_id_ || r.sample_id != sample_id_)
      throw ParseError("sample row " + std::to_string(i + 1) +
                       ": event/sample id does not match the sample's");
    int32_t& next = next_position[r.stream_id];
    if (r.position_in_stream != next + 1)
      throw ParseError("sample row " + std::to_string(i + 1) + ": stream " +
                       std::to_string(r.stream_id) +
                       " positions are not contiguous from 1");
    next = r.position_in_stream;
  }
}

std::map<int32_t, std::vector<const PacketRecord*>>
TabulatedTrafficSample::streams() const {
  std::map<int32_t, std::vector<const PacketRecord*>> out;
  for (const auto& r : rows_) out[r.stream_id].push_back(&r);
  return out;
}

size_t TabulatedTrafficSample::stream_count() const {
  std::map<int32_t, bool> seen;
  for (const auto& r : rows_) seen[r.stream_id] = true;
  return seen.size();
}

}  // namespace seqnature
