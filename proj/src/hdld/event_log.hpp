// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hdld {

enum class EventKind : std::uint8_t { jump_right = 0, jump_left = 1, birth = 2, death = 3 };

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::birth;
  std::uint32_t site = 0;
};

// Append-only trajectory log. On disk: 16-byte header ("HDLDEVT1", u32 N,
// u32 reserved) followed by 13-byte little-endian records (f64 t, u8 kind,
// u32 site).
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(int n_sites) : n_sites_(n_sites) {}

  void append(double t, EventKind kind, std::uint32_t site);

  int n_sites() const { return n_sites_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const EventRecord& operator[](std::size_t i) const { return events_[i]; }
  const std::vector<EventRecord>& events() const { return events_; }

  void write_file(const std::string& path) const;
  static EventLog read_file(const std::string& path);

 private:
  int n_sites_ = 0;
  std::vector<EventRecord> events_;
};

}  // namespace hdld
