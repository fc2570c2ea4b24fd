#include "milnor/errors.hpp"

namespace milnor {

const char* to_string(FailureKind kind) noexcept {
  switch (kind) {
    case FailureKind::no_convergence: return "no convergence";
    case FailureKind::left_ball: return "left ball";
    case FailureKind::critical_point: return "critical point";
    case FailureKind::undersampled: return "under-sampled path";
    case FailureKind::open_loop: return "loop not closed";
    case FailureKind::non_integral_winding: return "non-integral winding";
    case FailureKind::empty_fiber: return "empty fiber";
  }
  return "unknown";
}

}  // namespace milnor
