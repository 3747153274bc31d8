#include "tracerec/parallel.hpp"

#include <cstdlib>
#include <string>

namespace tracerec {

unsigned resolve_jobs(unsigned requested) {
  if (const char* env = std::getenv("TRACEREC_JOBS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return requested == 0 ? 1U : requested;
}

}  // namespace tracerec
