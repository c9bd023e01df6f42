#include "zc/timing.hpp"

#include <stdexcept>

namespace zc {

TimingParameters TimingParameters::for_frame(const PhyParameters& phy,
                                             int frame_bytes) {
  if (frame_bytes < 0) throw std::invalid_argument("frame_bytes < 0");
  TimingParameters t;
  const double hdr = phy.preamble_us + phy.plcp_header_us;
  t.t_g = 2.0 * hdr + phy.mpdu_us(frame_bytes) + phy.sifs_us + phy.ack_us();
  t.t_b = hdr + phy.mpdu_us(frame_bytes) + phy.eifs_us();
  t.t_v = phy.slot_us;
  t.t_s = 0.0;
  t.validate();
  return t;
}

TimingParameters TimingParameters::explicit_values(double t_g, double t_b,
                                                   double t_v, double t_s) {
  TimingParameters t{t_g, t_b, t_v, t_s};
  t.validate();
  return t;
}

void TimingParameters::validate() const {
  if (t_g < 0 || t_b < 0 || t_v < 0 || t_s < 0)
    throw std::invalid_argument("timing: negative duration");
  if (t_v < t_s) throw std::invalid_argument("timing: t_v < t_s");
}

}  // namespace zc
