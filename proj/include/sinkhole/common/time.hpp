// Copyright 2026 The Sinkhole Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace sinkhole {

/// UTC instant with millisecond resolution. All persisted timestamps use it.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;
using Millis = std::chrono::milliseconds;

/// Formats as ISO-8601 UTC, e.g. "2025-03-01T08:00:00.000Z".
std::string format_iso8601(Instant t);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]". Returns nullopt on
/// anything else.
std::optional<Instant> parse_iso8601(std::string_view text);

/// Half-open interval [start, end).
struct Window {
  Instant start;
  Instant end;

  bool contains(Instant t) const { return start <= t && t < end; }
  bool valid() const { return start < end; }
  friend bool operator==(const Window&, const Window&) = default;
};

/// Time source injected into everything that compares against "now".
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Instant now() const override;
};

/// Settable clock for tests and simulated trials.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Instant start) : now_(start.time_since_epoch().count()) {}

  Instant now() const override { return Instant{Millis{now_.load()}}; }
  void set(Instant t) { now_.store(t.time_since_epoch().count()); }
  void advance(Millis d) { now_.fetch_add(d.count()); }

 private:
  std::atomic<Millis::rep> now_;
};

}  // namespace sinkhole
