#pragma once

#include <chrono>
#include <cstdint>

namespace tdteach {

/// Millisecond time source shared by the simulated and live trial players.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() const = 0;
  virtual void sleep_until_ms(std::int64_t t_ms) = 0;
};

/// Jumps straight to the requested time; never goes backwards.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(std::int64_t start_ms = 0) : now_(start_ms) {}

  std::int64_t now_ms() const override { return now_; }
  void sleep_until_ms(std::int64_t t_ms) override {
    if (t_ms > now_) now_ = t_ms;
  }

 private:
  std::int64_t now_;
};

/// Wall time from std::chrono::steady_clock, counted from construction.
class SteadyClock final : public Clock {
 public:
  SteadyClock() : epoch_(std::chrono::steady_clock::now()) {}

  std::int64_t now_ms() const override {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - epoch_)
        .count();
  }
  void sleep_until_ms(std::int64_t t_ms) override;

 private:
  std::chrono::steady_clock::time_point epoch_;
};

}  // namespace tdteach
