#include "tdteach/clock.hpp"

#include <thread>

namespace tdteach {

void SteadyClock::sleep_until_ms(std::int64_t t_ms) {
  std::this_thread::sleep_until(epoch_ + std::chrono::milliseconds(t_ms));
}

}  // namespace tdteach
