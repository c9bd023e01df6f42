#include "zc/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace zc {

std::optional<Arrival> next_arrival(const TrafficSource& src, double now_us) {
  if (now_us < 0) throw std::invalid_argument("next_arrival: now < 0");
  if (src.kind == TrafficKind::Backlogged)
    return Arrival{now_us, src.packet_bytes};
  if (src.period_us <= 0)
    throw std::invalid_argument("next_arrival: periodic source needs period > 0");
  double k = std::ceil((now_us - src.start_offset_us) / src.period_us);
  if (k < 0) k = 0;
  double t = src.start_offset_us + k * src.period_us;
  if (t < now_us) t = src.start_offset_us + (k + 1) * src.period_us;
  return Arrival{t, src.packet_bytes};
}

}  // namespace zc
