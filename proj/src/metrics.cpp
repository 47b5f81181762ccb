#include "metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

#include "psl.hpp"

namespace seqnature {

std::string Technique::name() const {
  switch (kind) {
    case TechniqueKind::sdbf: return "sdbf";
    case TechniqueKind::esdbf: return "esdbf";
    case TechniqueKind::ebf: return "ebf";
    case TechniqueKind::fqdnbf: return "fqdnbf";
    case TechniqueKind::esldbf: return "esldbf";
    case TechniqueKind::custom: return "custom:" + custom_name;
  }
  return "sdbf";
}

std::optional<Technique> Technique::parse(std::string_view name, double size_slack) {
  Technique t;
  t.size_slack = size_slack;
  if (name == "sdbf") t.kind = TechniqueKind::sdbf;
  else if (name == "esdbf") t.kind = TechniqueKind::esdbf;
  else if (name == "ebf") t.kind = TechniqueKind::ebf;
  else if (name == "fqdnbf") t.kind = TechniqueKind::fqdnbf;
  else if (name == "esldbf") t.kind = TechniqueKind::esldbf;
  else if (name.starts_with("custom:") && name.size() > 7) {
    t.kind = TechniqueKind::custom;
    t.custom_name = std::string(name.substr(7));
  } else {
    return std::nullopt;
  }
  if (t.size_slack < 0) return std::nullopt;
  return t;
}

double Distance::value() const {
  if (maximal_) throw Error("Distance::value() on MAXIMAL");
  return value_;
}

std::optional<EndpointId> endpoint_id(const DomainLabel& domain,
                                      EndpointGranularity granularity) {
  switch (granularity) {
    case EndpointGranularity::fqdn_or_ip:
      return EndpointId{domain.is_name(), domain.value};
    case EndpointGranularity::fqdn:
      if (!domain.is_name()) return std::nullopt;
      return EndpointId{true, domain.value};
    case EndpointGranularity::esld: {
      auto esld = esld_of(domain);
      if (!esld) return std::nullopt;
      return EndpointId{true, *esld};
    }
  }
  return std::nullopt;
}

namespace {

void require_equal_length(const PacketSequence& p1, const PacketSequence& p2) {
  if (p1.length() != p2.length())
    throw Error("distance metric applied to sequences of different length (" +
                std::to_string(p1.length()) + " vs " + std::to_string(p2.length()) + ")");
}

}  // namespace

Distance sdbf_distance(const PacketSequence& p1, const PacketSequence& p2) {
  require_equal_length(p1, p2);
  double sum = 0;
  for (size_t i = 0; i < p1.packets.size(); ++i) {
    if (p1.packets[i].direction != p2.packets[i].direction)
      return Distance::maximal();
    sum += std::abs(static_cast<double>(p1.packets[i].size) -
                    static_cast<double>(p2.packets[i].size));
  }
  return Distance::finite(sum);
}

Distance esdbf_distance(const PacketSequence& p1, const PacketSequence& p2) {
  require_equal_length(p1, p2);
  auto id1 = endpoint_id(p1.domain(), EndpointGranularity::fqdn_or_ip);
  auto id2 = endpoint_id(p2.domain(), EndpointGranularity::fqdn_or_ip);
  if (*id1 != *id2) return Distance::maximal();
  return sdbf_distance(p1, p2);
}

Distance endpoint_distance(const PacketSequence& p1, const PacketSequence& p2,
                           EndpointGranularity granularity) {
  auto id1 = endpoint_id(p1.domain(), granularity);
  auto id2 = endpoint_id(p2.domain(), granularity);
  // A sequence without an identifier is maximal from everything, itself
  // included.
  if (!id1 || !id2) return Distance::maximal();
  return *id1 == *id2 ? Distance::finite(0) : Distance::maximal();
}

Distance technique_distance(const Technique& t, const PacketSequence& p1,
                            const PacketSequence& p2) {
  switch (t.kind) {
    case TechniqueKind::sdbf: {
      Distance d = sdbf_distance(p1, p2);
      if (d.is_maximal()) return d;
      return Distance::finite(std::max(0.0, d.value() - t.size_slack));
    }
    case TechniqueKind::esdbf: {
      Distance d = esdbf_distance(p1, p2);
      if (d.is_maximal()) return d;
      return Distance::finite(std::max(0.0, d.value() - t.size_slack));
    }
    case TechniqueKind::ebf:
      return endpoint_distance(p1, p2, EndpointGranularity::fqdn_or_ip);
    case TechniqueKind::fqdnbf:
      return endpoint_distance(p1, p2, EndpointGranularity::fqdn);
    case TechniqueKind::esldbf:
      return endpoint_distance(p1, p2, EndpointGranularity::esld);
    case TechniqueKind::custom: {
      const CustomMetric* m = find_custom_metric(t.custom_name);
      if (!m) throw ConfigError("unknown custom metric: " + t.custom_name);
      return m->distance(p1, p2, t.size_slack);
    }
  }
  throw Error("unreachable technique kind");
}

namespace {

std::string endpoint_token(const DomainLabel& d, EndpointGranularity g) {
  auto id = endpoint_id(d, g);
  if (!id) return std::string();
  return (id->is_name ? "n=" : "a=") + id->value;
}

const char* dir_char(Direction d) { return d == Direction::upstream ? "u" : "d"; }

}  // namespace

std::string packet_token(const Technique& t, const SeqPacket& p) {
  switch (t.kind) {
    case TechniqueKind::sdbf:
      return std::string(dir_char(p.direction)) + ":" + std::to_string(p.size);
    case TechniqueKind::esdbf:
      return std::string(dir_char(p.direction)) + ":" + std::to_string(p.size) +
             "|" + endpoint_token(p.domain, EndpointGranularity::fqdn_or_ip);
    case TechniqueKind::ebf:
      return endpoint_token(p.domain, EndpointGranularity::fqdn_or_ip);
    case TechniqueKind::fqdnbf:
      return endpoint_token(p.domain, EndpointGranularity::fqdn);
    case TechniqueKind::esldbf:
      return endpoint_token(p.domain, EndpointGranularity::esld);
    case TechniqueKind::custom:
      // Conservative: full per-packet feature equality.
      return std::string(dir_char(p.direction)) + ":" + std::to_string(p.size) +
             "|" + to_string(p.domain.kind) + "=" + p.domain.value;
  }
  return std::string();
}

std::optional<std::vector<std::string>> sequence_key(const Technique& t,
                                                     const PacketSequence& p) {
  if (t.kind == TechniqueKind::fqdnbf &&
      !endpoint_id(p.domain(), EndpointGranularity::fqdn))
    return std::nullopt;
  if (t.kind == TechniqueKind::esldbf &&
      !endpoint_id(p.domain(), EndpointGranularity::esld))
    return std::nullopt;
  std::vector<std::string> key;
  key.reserve(p.packets.size());
  for (const auto& pkt : p.packets) key.push_back(packet_token(t, pkt));
  return key;
}

bool has_exact_key(const Technique& t) {
  switch (t.kind) {
    case TechniqueKind::sdbf:
    case TechniqueKind::esdbf:
      return t.size_slack == 0.0;
    case TechniqueKind::ebf:
    case TechniqueKind::fqdnbf:
    case TechniqueKind::esldbf:
      return true;
    case TechniqueKind::custom:
      return false;
  }
  return false;
}

namespace {

std::mutex g_registry_mutex;
std::map<std::string, CustomMetric>& registry() {
  static std::map<std::string, CustomMetric> r;
  return r;
}

}  // namespace

void register_custom_metric(const std::string& name, CustomMetric metric) {
  if (name.empty() || !metric.distance)
    throw ConfigError("custom metric needs a name and a distance function");
  std::lock_guard lock(g_registry_mutex);
  registry()[name] = std::move(metric);
}

const CustomMetric* find_custom_metric(const std::string& name) {
  std::lock_guard lock(g_registry_mutex);
  auto it = registry().find(name);
  return it == registry().end() ? nullptr : &it->second;
}

}  // namespace seqnature
