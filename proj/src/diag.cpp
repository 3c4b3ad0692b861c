#include "ergolab/diag.hpp"

#include <atomic>
#include <mutex>
#include <utility>

namespace ergolab::diag {
namespace {

std::atomic<bool> g_enabled{false};
std::mutex g_mutex;
std::vector<std::string>& notes() {
  static std::vector<std::string> v;
  return v;
}

}  // namespace

void enable(bool on) { g_enabled.store(on, std::memory_order_relaxed); }

bool enabled() { return g_enabled.load(std::memory_order_relaxed); }

void append(std::string note) {
  if (!enabled()) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  notes().push_back(std::move(note));
}

std::vector<std::string> drain() {
  std::lock_guard<std::mutex> lock(g_mutex);
  return std::exchange(notes(), {});
}

}  // namespace ergolab::diag
