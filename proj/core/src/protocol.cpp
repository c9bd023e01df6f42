#include "zc/protocol.hpp"

#include <stdexcept>

namespace zc {

StationState::StationState(int station_id, int capacity, ReselectionMode mode,
                           StationRole role, int anchor_slot,
                           int recycle_rounds)
    : id_(station_id),
      capacity_(capacity),
      mode_(mode),
      role_(role),
      anchor_(anchor_slot),
      recycle_rounds_(recycle_rounds),
      view_(capacity, SlotBelief::Unreserved),
      idle_age_(capacity, 0) {
  if (capacity < 1) throw std::invalid_argument("station: capacity < 1");
  if (recycle_rounds < 1)
    throw std::invalid_argument("station: recycle_rounds < 1");
  if (role_ == StationRole::AccessPoint) {
    if (anchor_ < 0 || anchor_ >= capacity)
      throw std::invalid_argument("station: access point needs an anchor slot");
    claim(anchor_);
  } else if (anchor_ != -1) {
    throw std::invalid_argument("station: only an access point has an anchor");
  }
}

void StationState::on_arrival() { scan_remaining_ = capacity_; }

std::optional<int> StationState::select_slot(Rng& rng) const {
  int free = 0;
  for (auto b : view_)
    if (b == SlotBelief::Unreserved) ++free;
  if (free > 0) {
    int pick = static_cast<int>(rng.below(free));
    for (int s = 0; s < capacity_; ++s)
      if (view_[s] == SlotBelief::Unreserved && pick-- == 0) return s;
  }
  if (last_collision_ >= 0) return last_collision_;
  return std::nullopt;
}

void StationState::redraw(Rng& rng) {
  auto s = select_slot(rng);
  if (s) {
    trial_ = *s;
    starved_rounds_ = 0;
  } else {
    trial_ = -1;
  }
  forced_trial_ = false;
}

void StationState::round_boundary(bool queue_nonempty, Rng& rng) {
  if (scanning() || role_ == StationRole::AccessPoint) return;
  if (owned_count_ > 0) return;
  if (trial_ < 0 && queue_nonempty) {
    redraw(rng);
    if (trial_ < 0 && ++starved_rounds_ >= recycle_rounds_) {
      // Starvation fallback: the belief map offers nothing, so gamble on a
      // uniform pick. The pick ignores the abort rule — the beliefs that
      // would veto it are the ones that starved the station.
      trial_ = static_cast<int>(rng.below(capacity_));
      forced_trial_ = true;
      starved_rounds_ = 0;
    }
  }
  armed_ = trial_;
}

bool StationState::should_transmit(int slot, bool queue_nonempty) const {
  if (scanning()) return false;
  if (role_ == StationRole::AccessPoint && slot == anchor_) return true;
  if (owns(slot) && queue_nonempty) return true;
  return armed_ == slot && queue_nonempty;
}

bool StationState::decide_transmit(int slot, bool queue_nonempty, Rng& rng) {
  if (armed_ == slot && !forced_trial_ &&
      view_[slot] == SlotBelief::ReservedByOther) {
    armed_ = -1;
    if (mode_ == ReselectionMode::Immediate)
      redraw(rng);  // attempted at the next round boundary
    else
      trial_ = -1;
  }
  return should_transmit(slot, queue_nonempty);
}

void StationState::claim(int slot) {
  if (view_[slot] != SlotBelief::Mine) ++owned_count_;
  view_[slot] = SlotBelief::Mine;
}

void StationState::release(int slot) {
  if (view_[slot] == SlotBelief::Mine) --owned_count_;
  view_[slot] = SlotBelief::Unreserved;
}

std::optional<int> StationState::owned_slot() const {
  for (int s = 0; s < capacity_; ++s)
    if (view_[s] == SlotBelief::Mine) return s;
  return std::nullopt;
}

void StationState::on_slot_observed(const SlotObservation& obs, Rng& rng) {
  const int s = obs.slot_index;
  if (s < 0 || s >= capacity_)
    throw std::invalid_argument("observation: slot index out of range");

  switch (obs.own) {
    case SlotObservation::Own::Success:
      if (armed_ == s) {
        claim(s);
        armed_ = -1;
        trial_ = -1;
        forced_trial_ = false;
        starved_rounds_ = 0;
      }
      idle_age_[s] = 0;
      break;
    case SlotObservation::Own::Collision:
      if (owns(s) && !(role_ == StationRole::AccessPoint && s == anchor_))
        release(s);
      if (armed_ == s) armed_ = -1;
      trial_ = -1;
      forced_trial_ = false;
      last_collision_ = s;
      if (view_[s] != SlotBelief::Mine) view_[s] = SlotBelief::Unreserved;
      idle_age_[s] = 0;
      if (mode_ == ReselectionMode::Immediate) redraw(rng);
      break;
    case SlotObservation::Own::None:
      switch (obs.kind) {
        case SlotObservation::Kind::Empty:
          if (++idle_age_[s] >= recycle_rounds_) {
            // Observers recycle an unused reservation; an owner that left its
            // own slot idle that long treats it as lost too, keeping beliefs
            // aligned with what everyone else now assumes.
            if (view_[s] == SlotBelief::ReservedByOther)
              view_[s] = SlotBelief::Unreserved;
            else if (owns(s) &&
                     !(role_ == StationRole::AccessPoint && s == anchor_))
              release(s);
          }
          break;
        case SlotObservation::Kind::BusySuccess:
          if (owns(s) && !(role_ == StationRole::AccessPoint && s == anchor_))
            release(s);  // someone else claimed the slot while it sat unused
          if (view_[s] != SlotBelief::Mine)
            view_[s] = SlotBelief::ReservedByOther;
          idle_age_[s] = 0;
          break;
        case SlotObservation::Kind::BusyCollision:
          // Collisions release the slot in everyone's eyes: no transmitter
          // got an ACK, so nobody holds a reservation there.
          if (view_[s] != SlotBelief::Mine) view_[s] = SlotBelief::Unreserved;
          idle_age_[s] = 0;
          break;
      }
      break;
  }
  if (scan_remaining_ > 0) --scan_remaining_;
}

}  // namespace zc
