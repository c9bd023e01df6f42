#include "doctest.h"
#include "zc/protocol.hpp"

#include <stdexcept>
#include <cmath>
#include <vector>

TEST_SUITE_BEGIN("protocol");

namespace {

using zc::ReselectionMode;
using zc::SlotBelief;
using zc::SlotObservation;
using zc::StationState;
using Kind = zc::SlotObservation::Kind;
using Own = zc::SlotObservation::Own;

SlotObservation obs(int slot, Kind kind, Own own = Own::None) {
  SlotObservation o;
  o.slot_index = slot;
  o.kind = kind;
  o.own = own;
  return o;
}

// Mark `slot` reserved-by-other in the station's view.
void see_taken(StationState& s, zc::Rng& rng, int slot) {
  s.on_slot_observed(obs(slot, Kind::BusySuccess), rng);
}

// Drive the station until it owns a slot: arm, transmit alone, succeed.
int acquire_slot(StationState& s, zc::Rng& rng) {
  for (int round = 0; round < 100; ++round) {
    s.round_boundary(true, rng);
    const int armed = s.armed_slot();
    if (armed >= 0 && s.decide_transmit(armed, true, rng)) {
      s.on_slot_observed(obs(armed, Kind::BusySuccess, Own::Success), rng);
      return armed;
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("construction validates its arguments") {
  CHECK_THROWS_AS(StationState(0, 0, ReselectionMode::Immediate),
                  std::invalid_argument);
  CHECK_THROWS_AS(StationState(0, 8, ReselectionMode::Immediate,
                               zc::StationRole::Ordinary, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(StationState(0, 8, ReselectionMode::Immediate,
                               zc::StationRole::AccessPoint, 9),
                  std::invalid_argument);
  CHECK_THROWS_AS(StationState(0, 8, ReselectionMode::Immediate,
                               zc::StationRole::Ordinary, -1, 0),
                  std::invalid_argument);
}

TEST_CASE("slot selection is uniform over slots believed unreserved") {
  zc::Rng rng(42);
  StationState s(0, 8, ReselectionMode::CycleEnd);
  // mark slots 0 and 5 taken: picks must be uniform over the other six
  see_taken(s, rng, 0);
  see_taken(s, rng, 5);
  std::vector<int> count(8, 0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const auto pick = s.select_slot(rng);
    REQUIRE(pick.has_value());
    ++count[*pick];
  }
  CHECK(count[0] == 0);
  CHECK(count[5] == 0);
  // chi-square over the six candidates; 5 dof, 99.9% quantile ~ 20.5
  const double expect = draws / 6.0;
  double chi2 = 0;
  for (int slot : {1, 2, 3, 4, 6, 7})
    chi2 += (count[slot] - expect) * (count[slot] - expect) / expect;
  CHECK(chi2 < 20.5);
}

TEST_CASE("a successful trial claims the slot and it persists") {
  zc::Rng rng(7);
  StationState s(0, 8, ReselectionMode::Immediate);
  const int slot = acquire_slot(s, rng);
  REQUIRE(slot >= 0);
  CHECK(s.owns(slot));
  CHECK(s.owned_count() == 1);
  CHECK(s.owned_slot() == slot);
  // owner with traffic transmits there every round; with an empty queue it
  // skips but keeps the reservation
  CHECK(s.should_transmit(slot, true));
  CHECK_FALSE(s.should_transmit(slot, false));
  s.round_boundary(true, rng);
  CHECK(s.owns(slot));
  CHECK(s.armed_slot() == -1);  // owners do not run trials
}

TEST_CASE("collision releases the slot and the station sticks to it when starved") {
  zc::Rng rng(3);
  StationState s(0, 4, ReselectionMode::CycleEnd);
  s.round_boundary(true, rng);
  const int tried = s.armed_slot();
  REQUIRE(tried >= 0);
  CHECK(s.decide_transmit(tried, true, rng));
  s.on_slot_observed(obs(tried, Kind::BusyCollision, Own::Collision), rng);
  CHECK(s.owned_count() == 0);
  CHECK(s.slot_view()[tried] == SlotBelief::Unreserved);
  // now every slot looks reserved: the only candidate left is the collision slot
  for (int slot = 0; slot < 4; ++slot) see_taken(s, rng, slot);
  s.round_boundary(true, rng);
  CHECK(s.armed_slot() == tried);
}

TEST_CASE("select_slot with no information and no history yields nothing") {
  zc::Rng rng(11);
  StationState s(0, 4, ReselectionMode::CycleEnd);
  for (int slot = 0; slot < 4; ++slot) see_taken(s, rng, slot);
  CHECK_FALSE(s.select_slot(rng).has_value());
}

TEST_CASE("an armed trial into a slot seen reserved is aborted") {
  zc::Rng rng(13);
  StationState s(0, 8, ReselectionMode::CycleEnd);
  s.round_boundary(true, rng);
  const int tried = s.armed_slot();
  REQUIRE(tried >= 0);
  see_taken(s, rng, tried);  // someone claimed it earlier in the round
  CHECK_FALSE(s.decide_transmit(tried, true, rng));
  CHECK(s.armed_slot() == -1);
}

TEST_CASE("a station never transmits data in a slot believed reserved-by-other") {
  zc::Rng rng(17);
  StationState s(0, 8, ReselectionMode::Immediate);
  for (int step = 0; step < 5000; ++step) {
    const int slot = step % 8;
    if (slot == 0) s.round_boundary(true, rng);
    const bool tx = s.decide_transmit(slot, true, rng);
    if (tx && s.slot_view()[slot] == SlotBelief::ReservedByOther)
      FAIL("transmitted into a reserved slot at step ", step);
    // make the world hostile: everything it does collides, everything else
    // looks reserved
    if (tx)
      s.on_slot_observed(obs(slot, Kind::BusyCollision, Own::Collision), rng);
    else if (rng.chance(0.5))
      see_taken(s, rng, slot);
    else
      s.on_slot_observed(obs(slot, Kind::Empty), rng);
  }
}

TEST_CASE("initial scan: one full round of listening before any access") {
  zc::Rng rng(19);
  StationState s(5, 8, ReselectionMode::Immediate);
  s.on_arrival();
  CHECK(s.scanning());
  // a converged round with 3 active stations
  for (int slot = 0; slot < 8; ++slot) {
    s.round_boundary(true, rng);
    CHECK_FALSE(s.should_transmit(slot, true));
    s.on_slot_observed(obs(slot, slot < 3 ? Kind::BusySuccess : Kind::Empty), rng);
  }
  CHECK_FALSE(s.scanning());
  int reserved = 0;
  for (auto b : s.slot_view()) reserved += b == SlotBelief::ReservedByOther;
  CHECK(reserved == 3);
  // after the scan it contends only for slots it saw idle
  s.round_boundary(true, rng);
  CHECK(s.armed_slot() >= 3);
}

TEST_CASE("recycle timer frees an abandoned reservation after exactly T_r rounds") {
  zc::Rng rng(23);
  const int tr = 10;
  StationState s(0, 4, ReselectionMode::CycleEnd, zc::StationRole::Ordinary, -1, tr);
  see_taken(s, rng, 2);
  for (int round = 1; round < tr; ++round) {
    s.on_slot_observed(obs(2, Kind::Empty), rng);
    CHECK(s.slot_view()[2] == SlotBelief::ReservedByOther);
  }
  s.on_slot_observed(obs(2, Kind::Empty), rng);
  CHECK(s.slot_view()[2] == SlotBelief::Unreserved);
  // any activity resets the idle count
  see_taken(s, rng, 3);
  for (int round = 0; round < tr - 1; ++round)
    s.on_slot_observed(obs(3, Kind::Empty), rng);
  s.on_slot_observed(obs(3, Kind::BusySuccess), rng);
  for (int round = 0; round < tr - 1; ++round)
    s.on_slot_observed(obs(3, Kind::Empty), rng);
  CHECK(s.slot_view()[3] == SlotBelief::ReservedByOther);
}

TEST_CASE("an owner that leaves its slot idle expires it like everyone else") {
  zc::Rng rng(29);
  StationState s(0, 8, ReselectionMode::Immediate, zc::StationRole::Ordinary, -1, 10);
  const int slot = acquire_slot(s, rng);
  REQUIRE(slot >= 0);
  for (int round = 0; round < 10; ++round)
    s.on_slot_observed(obs(slot, Kind::Empty), rng);
  CHECK_FALSE(s.owns(slot));
}

TEST_CASE("access point holds its anchor unconditionally") {
  zc::Rng rng(31);
  StationState ap(0, 8, ReselectionMode::Immediate, zc::StationRole::AccessPoint, 0);
  CHECK(ap.owns(0));
  CHECK(ap.should_transmit(0, false));  // beacons need no queued data
  ap.on_slot_observed(obs(0, Kind::BusyCollision, Own::Collision), rng);
  CHECK(ap.owns(0));  // anchor survives collisions
  for (int round = 0; round < 50; ++round)
    ap.on_slot_observed(obs(0, Kind::Empty), rng);
  CHECK(ap.owns(0));  // and never expires
}

TEST_CASE("persistent sensing errors cannot starve a station forever") {
  zc::Rng rng(37);
  const int tr = 10;
  StationState s(0, 8, ReselectionMode::Immediate, zc::StationRole::Ordinary, -1, tr);
  // everything always looks reserved, and the station has never collided
  for (int slot = 0; slot < 8; ++slot) see_taken(s, rng, slot);
  bool transmitted = false;
  for (int round = 0; round < 5 * tr && !transmitted; ++round) {
    s.round_boundary(true, rng);
    for (int slot = 0; slot < 8; ++slot) {
      if (s.decide_transmit(slot, true, rng)) {
        transmitted = true;
        break;
      }
      see_taken(s, rng, slot);
    }
  }
  CHECK(transmitted);
}

TEST_CASE("collision observed by a bystander frees the slot in its view") {
  zc::Rng rng(41);
  StationState s(0, 4, ReselectionMode::CycleEnd);
  see_taken(s, rng, 1);
  s.on_slot_observed(obs(1, Kind::BusyCollision), rng);
  CHECK(s.slot_view()[1] == SlotBelief::Unreserved);
}

TEST_CASE("observation slot index is range-checked") {
  zc::Rng rng(43);
  StationState s(0, 4, ReselectionMode::CycleEnd);
  CHECK_THROWS_AS(s.on_slot_observed(obs(4, Kind::Empty), rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(s.on_slot_observed(obs(-1, Kind::Empty), rng),
                  std::invalid_argument);
}

TEST_SUITE_END();
