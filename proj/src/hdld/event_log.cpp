// SPDX-License-Identifier: Apache-2.0
#include "hdld/event_log.hpp"

#include <cstring>
#include <fstream>

#include "hdld/error.hpp"

namespace hdld {

namespace {

constexpr char kMagic[8] = {'H', 'D', 'L', 'D', 'E', 'V', 'T', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) out.push_back(char((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void EventLog::append(double t, EventKind kind, std::uint32_t site) {
  require(events_.empty() || t > events_.back().time, Errc::internal,
          "event log: timestamps must be strictly increasing");
  events_.push_back({t, kind, site});
}

void EventLog::write_file(const std::string& path) const {
  std::string buf;
  buf.reserve(16 + 13 * events_.size());
  buf.append(kMagic, 8);
  put_u32(buf, std::uint32_t(n_sites_));
  put_u32(buf, 0);
  for (const EventRecord& e : events_) {
    put_f64(buf, e.time);
    buf.push_back(char(e.kind));
    put_u32(buf, e.site);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(bool(out), Errc::io, "event log: cannot open " + path + " for writing");
  out.write(buf.data(), std::streamsize(buf.size()));
  require(bool(out), Errc::io, "event log: write failed for " + path);
}

EventLog EventLog::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), Errc::io, "event log: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(buf.size() >= 16, Errc::io, "event log: truncated header in " + path);
  require(std::memcmp(buf.data(), kMagic, 8) == 0, Errc::io,
          "event log: bad magic in " + path);
  const auto* base = reinterpret_cast<const unsigned char*>(buf.data());
  std::uint32_t n = get_u32(base + 8);
  require(n >= 2, Errc::io, "event log: invalid site count in " + path);
  require((buf.size() - 16) % 13 == 0, Errc::io, "event log: truncated record in " + path);
  EventLog log{int(n)};
  std::size_t count = (buf.size() - 16) / 13;
  log.events_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* rec = base + 16 + 13 * i;
    double t = get_f64(rec);
    std::uint8_t kind = rec[8];
    std::uint32_t site = get_u32(rec + 9);
    require(kind <= 3, Errc::io, "event log: invalid event kind in " + path);
    require(site < n, Errc::io, "event log: site index out of range in " + path);
    log.append(t, EventKind(kind), site);
  }
  return log;
}

}  // namespace hdld
