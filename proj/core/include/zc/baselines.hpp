#pragma once

#include "zc/rng.hpp"

namespace zc {

// 802.11-DCF-style binary exponential backoff state.
struct CsmaState {
  int cw_min = 32;
  int cw_max = 1024;
  int cw = 32;
  int backoff = 0;  // idle slots remaining before transmitting
};

enum class CsmaAction { Defer, Decrement, Transmit };

// Draw a fresh backoff for a new head-of-queue packet.
void csma_begin(CsmaState& s, Rng& rng);

// One sensing slot: defer while the medium is busy, count down while idle,
// transmit at zero.
CsmaAction csma_step(CsmaState& s, bool medium_idle, Rng& rng);

// Collision: double the contention window up to cw_max and redraw.
void csma_on_collision(CsmaState& s, Rng& rng);

// Success: reset the contention window to cw_min and redraw.
void csma_on_success(CsmaState& s, Rng& rng);

// Fixed-frame TDMA: N slots of full transmission length per frame, one
// station per slot, assignment given by the experiment setup.
struct TdmaState {
  int assigned_slot = 0;
  int frame_length = 0;
};

// Transmit iff the frame position matches the assignment and there is
// traffic. Throws std::invalid_argument if the assignment does not fit the
// frame (the M > N case, for which TDMA is undefined).
bool tdma_step(const TdmaState& s, long long global_slot_index,
               bool queue_nonempty);

}  // namespace zc
