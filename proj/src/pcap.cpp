#include "pcap.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cstring>
#include <fstream>

namespace seqnature {

std::optional<IpAddr> IpAddr::parse(std::string_view text) {
  std::string z(text);
  IpAddr a;
  if (inet_pton(AF_INET, z.c_str(), a.bytes.data()) == 1) {
    a.v6 = false;
    return a;
  }
  if (inet_pton(AF_INET6, z.c_str(), a.bytes.data()) == 1) {
    a.v6 = true;
    return a;
  }
  return std::nullopt;
}

std::string IpAddr::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {0};
  inet_ntop(v6 ? AF_INET6 : AF_INET, bytes.data(), buf, sizeof buf);
  return buf;
}

bool IpAddr::is_private() const {
  if (!v6) {
    const uint8_t* b = bytes.data();
    if (b[0] == 10) return true;
    if (b[0] == 172 && (b[1] & 0xf0) == 16) return true;
    if (b[0] == 192 && b[1] == 168) return true;
    if (b[0] == 127) return true;
    if (b[0] == 169 && b[1] == 254) return true;
    return false;
  }
  static const uint8_t loopback[16] = {0, 0, 0, 0, 0, 0, 0, 0,
                                       0, 0, 0, 0, 0, 0, 0, 1};
  if (std::memcmp(bytes.data(), loopback, 16) == 0) return true;
  if (bytes[0] == 0xfe && (bytes[1] & 0xc0) == 0x80) return true;  // fe80::/10
  if ((bytes[0] & 0xfe) == 0xfc) return true;                      // fc00::/7
  // IPv4-mapped: defer to the embedded v4 address.
  static const uint8_t mapped_prefix[12] = {0, 0, 0, 0, 0, 0,
                                            0, 0, 0, 0, 0xff, 0xff};
  if (std::memcmp(bytes.data(), mapped_prefix, 12) == 0) {
    IpAddr v4;
    std::copy(bytes.begin() + 12, bytes.end(), v4.bytes.begin());
    return v4.is_private();
  }
  return false;
}

namespace {

struct ByteReader {
  const uint8_t* data;
  size_t size;
  size_t pos = 0;
  bool big_endian = false;

  size_t remaining() const { return size - pos; }
  bool need(size_t n) const { return remaining() >= n; }

  uint8_t u8() { return data[pos++]; }
  uint16_t u16() {
    uint16_t v = big_endian ? (uint16_t(data[pos]) << 8) | data[pos + 1]
                            : (uint16_t(data[pos + 1]) << 8) | data[pos];
    pos += 2;
    return v;
  }
  uint32_t u32() {
    uint32_t v;
    if (big_endian)
      v = (uint32_t(data[pos]) << 24) | (uint32_t(data[pos + 1]) << 16) |
          (uint32_t(data[pos + 2]) << 8) | data[pos + 3];
    else
      v = (uint32_t(data[pos + 3]) << 24) | (uint32_t(data[pos + 2]) << 16) |
          (uint32_t(data[pos + 1]) << 8) | data[pos];
    pos += 4;
    return v;
  }
  void skip(size_t n) { pos += n; }
};

uint16_t be16(const uint8_t* p) { return (uint16_t(p[0]) << 8) | p[1]; }
uint32_t be32(const uint8_t* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) |
         (uint32_t(p[2]) << 8) | p[3];
}

// Returns false when the bytes look like an IP datagram but the headers do
// not hold up (the caller counts it as malformed).
bool parse_ipv4(ParsedPacket& p, const uint8_t* d, size_t len) {
  if (len < 20) return false;
  if ((d[0] >> 4) != 4) return false;
  const size_t ihl = (d[0] & 0x0f) * 4u;
  if (ihl < 20 || len < ihl) return false;
  const uint16_t total = be16(d + 2);
  if (total < ihl) return false;
  p.is_ip = true;
  p.ip_length = total;
  p.src.v6 = p.dst.v6 = false;
  std::copy(d + 12, d + 16, p.src.bytes.begin());
  std::copy(d + 16, d + 20, p.dst.bytes.begin());
  const uint8_t proto = d[9];
  const uint16_t frag = be16(d + 6);
  if ((frag & 0x1fff) != 0) return true;  // non-first fragment: no transport header
  const size_t avail = std::min<size_t>(len, total);
  if (proto == 6) {
    if (avail < ihl + 20) return false;
    const uint8_t* t = d + ihl;
    const size_t doff = (t[12] >> 4) * 4u;
    if (doff < 20 || total < ihl + doff) return false;
    if (avail < ihl + doff) return false;
    p.proto = TransportProto::tcp;
    p.src_port = be16(t);
    p.dst_port = be16(t + 2);
    p.tcp_seq = be32(t + 4);
    p.tcp_fin = t[13] & 0x01;
    p.tcp_syn = t[13] & 0x02;
    p.tcp_rst = t[13] & 0x04;
    p.payload_len = total - static_cast<uint32_t>(ihl + doff);
    const size_t have = avail - ihl - doff;
    p.payload.assign(d + ihl + doff, d + ihl + doff + have);
  } else if (proto == 17) {
    if (avail < ihl + 8) return false;
    const uint8_t* t = d + ihl;
    p.proto = TransportProto::udp;
    p.src_port = be16(t);
    p.dst_port = be16(t + 2);
    if (total < ihl + 8) return false;
    p.payload_len = total - static_cast<uint32_t>(ihl + 8);
    const size_t have = avail - ihl - 8;
    p.payload.assign(d + ihl + 8, d + ihl + 8 + have);
  }
  return true;
}

bool parse_ipv6(ParsedPacket& p, const uint8_t* d, size_t len) {
  if (len < 40) return false;
  if ((d[0] >> 4) != 6) return false;
  const uint16_t payload_length = be16(d + 4);
  p.is_ip = true;
  p.ip_length = 40u + payload_length;
  p.src.v6 = p.dst.v6 = true;
  std::copy(d + 8, d + 24, p.src.bytes.begin());
  std::copy(d + 24, d + 40, p.dst.bytes.begin());

  uint8_t nh = d[6];
  size_t off = 40;
  const size_t avail = std::min<size_t>(len, p.ip_length);
  for (int hops = 0; hops < 8; ++hops) {
    if (nh == 6 || nh == 17) break;
    if (nh == 44) {  // fragment header
      if (avail < off + 8) return false;
      if ((be16(d + off + 2) & 0xfff8) != 0) return true;  // non-first fragment
      nh = d[off];
      off += 8;
      continue;
    }
    if (nh == 0 || nh == 43 || nh == 60) {
      if (avail < off + 8) return false;
      const size_t ext = (size_t(d[off + 1]) + 1) * 8;
      nh = d[off];
      off += ext;
      continue;
    }
    return true;  // some other protocol; not a TCP/UDP packet
  }
  if (nh == 6) {
    if (avail < off + 20) return false;
    const uint8_t* t = d + off;
    const size_t doff = (t[12] >> 4) * 4u;
    if (doff < 20 || avail < off + doff) return false;
    p.proto = TransportProto::tcp;
    p.src_port = be16(t);
    p.dst_port = be16(t + 2);
    p.tcp_seq = be32(t + 4);
    p.tcp_fin = t[13] & 0x01;
    p.tcp_syn = t[13] & 0x02;
    p.tcp_rst = t[13] & 0x04;
    if (p.ip_length < off + doff) return false;
    p.payload_len = p.ip_length - static_cast<uint32_t>(off + doff);
    const size_t have = avail - off - doff;
    p.payload.assign(d + off + doff, d + off + doff + have);
  } else if (nh == 17) {
    if (avail < off + 8) return false;
    const uint8_t* t = d + off;
    p.proto = TransportProto::udp;
    p.src_port = be16(t);
    p.dst_port = be16(t + 2);
    if (p.ip_length < off + 8) return false;
    p.payload_len = p.ip_length - static_cast<uint32_t>(off + 8);
    const size_t have = avail - off - 8;
    p.payload.assign(d + off + 8, d + off + 8 + have);
  }
  return true;
}

// Locates the IP header within the frame. Returns: 1 parsed ok, 0 not an
// IP packet, -1 malformed.
int parse_link(ParsedPacket& p, int linktype) {
  const uint8_t* d = p.frame.data();
  const size_t len = p.frame.size();
  size_t off = 0;
  uint16_t ethertype = 0;

  switch (linktype) {
    case 1: {  // Ethernet
      if (len < 14) return -1;
      off = 12;
      ethertype = be16(d + off);
      off += 2;
      for (int vlan = 0; vlan < 2 && (ethertype == 0x8100 || ethertype == 0x88a8 ||
                                      ethertype == 0x9100);
           ++vlan) {
        if (len < off + 4) return -1;
        ethertype = be16(d + off + 2);
        off += 4;
      }
      break;
    }
    case 113: {  // Linux cooked (SLL)
      if (len < 16) return -1;
      ethertype = be16(d + 14);
      off = 16;
      break;
    }
    case 276: {  // SLL2
      if (len < 20) return -1;
      ethertype = be16(d + 0);
      off = 20;
      break;
    }
    case 101:  // raw IP
      if (len < 1) return -1;
      ethertype = (d[0] >> 4) == 6 ? 0x86dd : 0x0800;
      break;
    case 0:
    case 108: {  // BSD null/loopback: 4-byte family in capturer byte order
      if (len < 4) return -1;
      uint32_t fam_le = uint32_t(d[0]) | (uint32_t(d[1]) << 8) |
                        (uint32_t(d[2]) << 16) | (uint32_t(d[3]) << 24);
      uint32_t fam_be = be32(d);
      uint32_t fam = fam_le <= 0xff ? fam_le : fam_be;
      off = 4;
      if (fam == 2) ethertype = 0x0800;
      else if (fam == 24 || fam == 28 || fam == 30) ethertype = 0x86dd;
      else return 0;
      break;
    }
    default:
      return 0;  // unhandled link layer; not our packet
  }

  if (ethertype == 0x0800)
    return parse_ipv4(p, d + off, len - off) ? 1 : -1;
  if (ethertype == 0x86dd)
    return parse_ipv6(p, d + off, len - off) ? 1 : -1;
  return 0;  // ARP and friends
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  return data;
}

RawCapture read_classic_pcap(const std::vector<uint8_t>& data) {
  ByteReader r{data.data(), data.size()};
  const uint32_t magic_le = (uint32_t(data[3]) << 24) | (uint32_t(data[2]) << 16) |
                            (uint32_t(data[1]) << 8) | data[0];
  bool nanos = false;
  if (magic_le == 0xa1b2c3d4) {
    r.big_endian = false;
  } else if (magic_le == 0xa1b23c4d) {
    r.big_endian = false;
    nanos = true;
  } else if (magic_le == 0xd4c3b2a1) {
    r.big_endian = true;
  } else if (magic_le == 0x4d3cb2a1) {
    r.big_endian = true;
    nanos = true;
  } else {
    throw ParseError("not a pcap file (bad magic)");
  }
  r.skip(4);
  if (!r.need(20)) throw ParseError("truncated pcap global header");
  r.skip(2 + 2 + 4 + 4 + 4);  // version, thiszone, sigfigs, snaplen
  RawCapture cap;
  cap.linktype = static_cast<int>(r.u32() & 0x0fffffff);

  uint32_t index = 0;
  while (r.remaining() > 0) {
    if (!r.need(16)) {
      ++cap.skipped_malformed;  // truncated trailing record header
      break;
    }
    ParsedPacket p;
    p.ts.sec = r.u32();
    const uint32_t frac = r.u32();
    p.ts.nsec = nanos ? frac : int64_t(frac) * 1000;
    const uint32_t incl = r.u32();
    p.orig_len = r.u32();
    if (!r.need(incl)) {
      ++cap.skipped_malformed;
      break;
    }
    p.frame.assign(r.data + r.pos, r.data + r.pos + incl);
    r.skip(incl);
    p.capture_index = index++;
    const int rc = parse_link(p, cap.linktype);
    if (rc < 0) ++cap.skipped_malformed;
    cap.packets.push_back(std::move(p));
  }
  return cap;
}

RawCapture read_pcapng(const std::vector<uint8_t>& data) {
  RawCapture cap;
  cap.linktype = -1;
  struct Interface {
    int linktype;
    uint64_t units_per_sec;
  };
  std::vector<Interface> interfaces;
  ByteReader r{data.data(), data.size()};
  uint32_t index = 0;

  while (r.remaining() >= 12) {
    const size_t block_start = r.pos;
    uint32_t raw_type_le = uint32_t(data[block_start]) |
                           (uint32_t(data[block_start + 1]) << 8) |
                           (uint32_t(data[block_start + 2]) << 16) |
                           (uint32_t(data[block_start + 3]) << 24);
    if (raw_type_le == 0x0a0d0d0a) {
      // Section header: byte-order magic decides endianness from here on.
      if (!r.need(12)) throw ParseError("truncated pcapng section header");
      uint32_t bom_le = uint32_t(data[block_start + 8]) |
                        (uint32_t(data[block_start + 9]) << 8) |
                        (uint32_t(data[block_start + 10]) << 16) |
                        (uint32_t(data[block_start + 11]) << 24);
      if (bom_le == 0x1a2b3c4d) r.big_endian = false;
      else if (bom_le == 0x4d3c2b1a) r.big_endian = true;
      else throw ParseError("pcapng: bad byte-order magic");
      interfaces.clear();
    }
    r.pos = block_start;
    const uint32_t block_type = r.u32();
    const uint32_t total_len = r.u32();
    if (total_len < 12 || total_len % 4 != 0 ||
        block_start + total_len > data.size())
      throw ParseError("pcapng: corrupt block length");
    const size_t body = r.pos;
    const size_t body_len = total_len - 12;

    if (block_type == 0x00000001) {  // IDB
      if (body_len < 8) throw ParseError("pcapng: short IDB");
      Interface iface{static_cast<int>(r.u16()), 1'000'000};
      r.skip(2);  // reserved
      r.skip(4);  // snaplen
      size_t opt_pos = r.pos;
      const size_t opt_end = body + body_len;
      while (opt_pos + 4 <= opt_end) {
        ByteReader o{data.data(), data.size(), opt_pos, r.big_endian};
        const uint16_t code = o.u16();
        const uint16_t olen = o.u16();
        if (o.pos + olen > opt_end) break;
        if (code == 0) break;
        if (code == 9 && olen >= 1) {  // if_tsresol
          const uint8_t v = data[o.pos];
          if (v & 0x80) {
            iface.units_per_sec = 1ull << (v & 0x7f);
          } else {
            uint64_t ups = 1;
            for (int i = 0; i < (v & 0x7f) && i < 19; ++i) ups *= 10;
            iface.units_per_sec = ups;
          }
        }
        opt_pos = o.pos + ((olen + 3u) & ~3u);
      }
      interfaces.push_back(iface);
    } else if (block_type == 0x00000006) {  // EPB
      if (body_len < 20) throw ParseError("pcapng: short EPB");
      const uint32_t iface_id = r.u32();
      const uint64_t ts_high = r.u32();
      const uint64_t ts_low = r.u32();
      const uint32_t cap_len = r.u32();
      const uint32_t orig_len = r.u32();
      if (iface_id >= interfaces.size())
        throw ParseError("pcapng: EPB references unknown interface");
      const Interface& iface = interfaces[iface_id];
      if (cap_len > body_len - 20) throw ParseError("pcapng: EPB length overflow");
      ParsedPacket p;
      const uint64_t units = (ts_high << 32) | ts_low;
      p.ts.sec = static_cast<int64_t>(units / iface.units_per_sec);
      const uint64_t frac = units % iface.units_per_sec;
      p.ts.nsec = static_cast<int64_t>(
          (static_cast<unsigned __int128>(frac) * 1'000'000'000) /
          iface.units_per_sec);
      p.orig_len = orig_len;
      p.frame.assign(data.data() + r.pos, data.data() + r.pos + cap_len);
      p.capture_index = index++;
      if (cap.linktype == -1) cap.linktype = iface.linktype;
      if (iface.linktype != cap.linktype)
        throw ParseError("pcapng: mixed link types are not supported");
      const int rc = parse_link(p, iface.linktype);
      if (rc < 0) ++cap.skipped_malformed;
      cap.packets.push_back(std::move(p));
    } else if (block_type == 0x00000003) {  // Simple Packet Block: no timestamp
      ++cap.skipped_malformed;
    }
    r.pos = block_start + total_len;
  }
  if (cap.linktype == -1) cap.linktype = 1;
  return cap;
}

}  // namespace

void parse_frame(ParsedPacket& packet, int linktype) {
  packet.is_ip = false;
  packet.proto = TransportProto::other;
  const int rc = parse_link(packet, linktype);
  if (rc < 0) packet.is_ip = false;
}

RawCapture read_capture(const std::string& path) {
  const std::vector<uint8_t> data = read_file(path);
  if (data.size() < 4) throw ParseError(path + ": too short to be a capture");
  RawCapture cap;
  const uint32_t first_le = uint32_t(data[0]) | (uint32_t(data[1]) << 8) |
                            (uint32_t(data[2]) << 16) | (uint32_t(data[3]) << 24);
  try {
    if (first_le == 0x0a0d0d0a) cap = read_pcapng(data);
    else cap = read_classic_pcap(data);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::stable_sort(cap.packets.begin(), cap.packets.end(),
                   [](const ParsedPacket& a, const ParsedPacket& b) {
                     return a.ts < b.ts;
                   });
  return cap;
}

void write_capture(const RawCapture& capture, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  auto put32 = [&](uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put16 = [&](uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
  put32(0xa1b23c4d);  // nanosecond pcap, host (little) endian
  put16(2);
  put16(4);
  put32(0);  // thiszone
  put32(0);  // sigfigs
  uint32_t snaplen = 262144;
  for (const auto& p : capture.packets)
    snaplen = std::max<uint32_t>(snaplen, static_cast<uint32_t>(p.frame.size()));
  put32(snaplen);
  put32(static_cast<uint32_t>(capture.linktype));
  for (const auto& p : capture.packets) {
    put32(static_cast<uint32_t>(p.ts.sec));
    put32(static_cast<uint32_t>(p.ts.nsec));
    put32(static_cast<uint32_t>(p.frame.size()));
    put32(p.orig_len ? p.orig_len : static_cast<uint32_t>(p.frame.size()));
    out.write(reinterpret_cast<const char*>(p.frame.data()),
              static_cast<std::streamsize>(p.frame.size()));
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace seqnature
