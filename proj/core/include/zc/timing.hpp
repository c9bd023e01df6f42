#pragma once

namespace zc {

// IEEE 802.11b DSSS long-preamble PHY constants. All times in microseconds.
struct PhyParameters {
  double preamble_us = 144.0;     // 18 B PLCP preamble at 1 Mb/s
  double plcp_header_us = 48.0;   // 6 B PLCP header at 1 Mb/s
  double sifs_us = 10.0;
  double difs_us = 50.0;
  double slot_us = 20.0;
  double data_rate_mbps = 11.0;
  double basic_rate_mbps = 1.0;   // rate assumed for the EIFS ACK term
  int ack_bytes = 14;

  double mpdu_us(int bytes) const { return bytes * 8.0 / data_rate_mbps; }
  double ack_us() const { return ack_bytes * 8.0 / data_rate_mbps; }
  // EIFS = SIFS + DIFS + time of an ACK at the basic rate (with PHY header).
  double eifs_us() const {
    return sifs_us + difs_us + preamble_us + plcp_header_us +
           ack_bytes * 8.0 / basic_rate_mbps;
  }
};

// Virtual-slot durations. t_g: successful transmission slot, t_b: collision
// slot, t_v: idle mini-slot, t_s: inter-slot gap. Microseconds throughout.
struct TimingParameters {
  double t_g = 0;
  double t_b = 0;
  double t_v = 20.0;
  double t_s = 0;

  // Compose from the PHY constants for a given on-air frame size:
  //   t_g = 2(T_pre + T_plcp) + T_mpdu + T_sifs + T_ack
  //   t_b =  (T_pre + T_plcp) + T_mpdu + T_eifs
  static TimingParameters for_frame(const PhyParameters& phy, int frame_bytes);

  static TimingParameters explicit_values(double t_g, double t_b, double t_v,
                                          double t_s);

  // Throws std::invalid_argument on negative durations or t_v < t_s.
  void validate() const;
};

}  // namespace zc
