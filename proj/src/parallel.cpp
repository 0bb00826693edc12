#include "spinflow/parallel.hpp"

#include <cstdlib>
#include <string>

namespace spinflow {

namespace {
int g_max_threads = 0;  // 0 = not initialized

int init_from_env() {
  const char* env = std::getenv("SPINFLOW_THREADS");
  if (env != nullptr) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return std::min(v, 64);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}
}  // namespace

int max_threads() {
  if (g_max_threads == 0) g_max_threads = init_from_env();
  return g_max_threads;
}

void set_max_threads(int n) { g_max_threads = n < 1 ? 1 : std::min(n, 64); }

}  // namespace spinflow
