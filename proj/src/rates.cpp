#include "ltesim/rates.hpp"

#include <cmath>

namespace ltesim {
namespace {

// 3GPP 36.213 Table 7.2.3-1 spectral efficiencies, CQI 1..15.
constexpr double kEfficiency[15] = {
    0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
    2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};

std::array<int64_t, 15> scaled_entries() {
  std::array<int64_t, 15> e{};
  for (int i = 0; i < 15; ++i)
    e[i] = static_cast<int64_t>(
        std::llround(kPeakRateBitsPerSlot * kEfficiency[i] / kEfficiency[14]));
  return e;
}

}  // namespace

RateTable::RateTable(const std::array<int64_t, 15>& entries) : entries_(entries) {
  for (int i = 1; i < 15; ++i)
    if (entries_[i] <= entries_[i - 1])
      throw std::invalid_argument("rate table must be strictly increasing in CQI");
}

const RateTable& RateTable::standard() {
  static const RateTable t(scaled_entries());
  return t;
}

double RateTable::mean_rate() const {
  double s = 0;
  for (auto r : entries_) s += static_cast<double>(r);
  return s / 15.0;
}

double RateTable::mean_good_rate() const {
  double s = 0;
  for (int c = 8; c <= 15; ++c) s += static_cast<double>(entries_[c - 1]);
  return s / 8.0;
}

double RateTable::mean_bad_rate() const {
  double s = 0;
  for (int c = 1; c <= 7; ++c) s += static_cast<double>(entries_[c - 1]);
  return s / 7.0;
}

int cqi_from_sir(double sir_db) {
  // 15 thresholds at -6, -4, ..., +22 dB; CQI = 1 + number of thresholds met.
  int n = 0;
  for (int k = 0; k < 15; ++k)
    if (sir_db >= -6.0 + 2.0 * k) ++n;
  int cqi = 1 + n;
  return cqi > kCqiMax ? kCqiMax : cqi;
}

}  // namespace ltesim
