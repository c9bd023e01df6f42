#include "zc/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace zc {

void csma_begin(CsmaState& s, Rng& rng) {
  s.backoff = static_cast<int>(rng.below(s.cw));
}

CsmaAction csma_step(CsmaState& s, bool medium_idle, Rng& rng) {
  (void)rng;
  if (!medium_idle) return CsmaAction::Defer;
  if (s.backoff > 0) {
    --s.backoff;
    return CsmaAction::Decrement;
  }
  return CsmaAction::Transmit;
}

void csma_on_collision(CsmaState& s, Rng& rng) {
  s.cw = std::min(2 * s.cw, s.cw_max);
  csma_begin(s, rng);
}

void csma_on_success(CsmaState& s, Rng& rng) {
  s.cw = s.cw_min;
  csma_begin(s, rng);
}

bool tdma_step(const TdmaState& s, long long global_slot_index,
               bool queue_nonempty) {
  if (s.frame_length < 1 || s.assigned_slot < 0 ||
      s.assigned_slot >= s.frame_length)
    throw std::invalid_argument("tdma: assignment outside the frame");
  return queue_nonempty &&
         global_slot_index % s.frame_length == s.assigned_slot;
}

}  // namespace zc
