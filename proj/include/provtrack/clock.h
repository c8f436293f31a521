// Copyright 2026 The provtrack Authors.
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

#ifndef PROVTRACK_CLOCK_H_
#define PROVTRACK_CLOCK_H_

#include <atomic>
#include <cstdint>

namespace provtrack {

// Source of UTC epoch milliseconds. Every timestamp a run records comes from
// one of these so tests can freeze time.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() const = 0;
};

class SystemClock : public Clock {
 public:
  std::int64_t now_ms() const override;
};

// Manually driven clock; safe to advance from another thread.
class ManualClock : public Clock {
 public:
  explicit ManualClock(std::int64_t start_ms = 0) : now_(start_ms) {}

  std::int64_t now_ms() const override { return now_.load(); }
  void set(std::int64_t ms) { now_.store(ms); }
  void advance(std::int64_t delta_ms) { now_.fetch_add(delta_ms); }

 private:
  std::atomic<std::int64_t> now_;
};

}  // namespace provtrack

#endif  // PROVTRACK_CLOCK_H_
