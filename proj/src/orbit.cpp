#include "contractio/orbit.hpp"

namespace contractio {

void StoppingPolicy::validate() const {
  if (tol_step.sign() <= 0) throw std::invalid_argument("stopping policy: tol_step must be > 0");
  if (window == 0) throw std::invalid_argument("stopping policy: window must be >= 1");
  if (max_iter == 0) throw std::invalid_argument("stopping policy: max_iter must be >= 1");
  if (divergence_threshold && divergence_threshold->sign() <= 0) {
    throw std::invalid_argument("stopping policy: divergence_threshold must be > 0");
  }
}

const char* to_string(RedundancyStatus s) {
  switch (s) {
    case RedundancyStatus::AllHold: return "all-hold";
    case RedundancyStatus::SomeFail: return "some-fail";
    case RedundancyStatus::ReachedExactly: return "reached-exactly";
    case RedundancyStatus::Undetermined: return "undetermined";
  }
  return "?";
}

}  // namespace contractio
