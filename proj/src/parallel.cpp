#include "swarmdet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace swarmdet {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("SWARMDET_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
      // fall through to hardware default on unparsable values
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace swarmdet
