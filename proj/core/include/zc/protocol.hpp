#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zc/rng.hpp"

namespace zc {

enum class SlotBelief : std::uint8_t { Unreserved, ReservedByOther, Mine };
enum class ReselectionMode { Immediate, CycleEnd };
enum class StationRole { Ordinary, AccessPoint };

struct SlotObservation {
  enum class Kind { Empty, BusySuccess, BusyCollision };
  enum class Own { None, Success, Collision };
  int slot_index = 0;
  Kind kind = Kind::Empty;
  Own own = Own::None;  // set only when this station transmitted in the slot
};

// Per-station protocol state machine. The surrounding engine drives it with,
// per virtual slot: round_boundary() at the station's local slot 0,
// decide_transmit() before the slot resolves, then on_slot_observed() with
// the station's view of the outcome.
class StationState {
 public:
  StationState(int station_id, int capacity, ReselectionMode mode,
               StationRole role = StationRole::Ordinary, int anchor_slot = -1,
               int recycle_rounds = 10);

  // Fresh station: observe one full round before any access.
  void on_arrival();

  // Local round start: arm the pending trial pick (drawing one first if
  // needed). A station that has found no candidate slot for recycle_rounds
  // consecutive rounds falls back to a uniform pick over all slots so it
  // cannot starve forever under persistent sensing errors.
  void round_boundary(bool queue_nonempty, Rng& rng);

  // Uniform pick over slots believed unreserved; with none available, a
  // station that has collided before sticks to its last colliding slot.
  // nullopt if it has never transmitted and believes everything is taken.
  std::optional<int> select_slot(Rng& rng) const;

  // Pure transmit predicate: owned slot with traffic, armed trial slot with
  // traffic, or the access point's anchor slot (held unconditionally).
  bool should_transmit(int slot, bool queue_nonempty) const;

  // should_transmit plus the trial-abort rule: an armed trial into a slot
  // that has since been observed reserved-by-other is cancelled and redrawn
  // for the next round instead of knocking out the new owner.
  bool decide_transmit(int slot, bool queue_nonempty, Rng& rng);

  void on_slot_observed(const SlotObservation& obs, Rng& rng);

  int id() const { return id_; }
  int capacity() const { return capacity_; }
  bool scanning() const { return scan_remaining_ > 0; }
  int owned_count() const { return owned_count_; }
  bool owns(int slot) const { return view_[slot] == SlotBelief::Mine; }
  std::optional<int> owned_slot() const;  // lowest owned index, if any
  int armed_slot() const { return armed_; }
  int pending_trial() const { return trial_; }
  StationRole role() const { return role_; }
  int anchor_slot() const { return anchor_; }
  const std::vector<SlotBelief>& slot_view() const { return view_; }
  int idle_age(int slot) const { return idle_age_[slot]; }

 private:
  void redraw(Rng& rng);
  void release(int slot);
  void claim(int slot);

  int id_;
  int capacity_;
  ReselectionMode mode_;
  StationRole role_;
  int anchor_;
  int recycle_rounds_;
  std::vector<SlotBelief> view_;
  std::vector<int> idle_age_;
  int owned_count_ = 0;
  int trial_ = -1;   // drawn but not yet attempted slot
  int armed_ = -1;   // trial slot eligible for attempt in the current round
  bool forced_trial_ = false;  // starvation-fallback pick; immune to abort
  int last_collision_ = -1;
  int scan_remaining_ = 0;
  int starved_rounds_ = 0;
};

}  // namespace zc
