#pragma once
// CQI-indexed LTE rate table and SIR->CQI mapping.
#include <array>
#include <cstdint>
#include <stdexcept>

namespace ltesim {

constexpr int kCqiMin = 1;
constexpr int kCqiMax = 15;
// One scheduling slot is 1 ms; rates are bits per slot.
constexpr int64_t kPeakRateBitsPerSlot = 75000;  // 75 Mbps peak

class RateTable {
 public:
  // Default table: 15 rates proportional to the 3GPP CQI spectral-efficiency
  // ladder, scaled so CQI 15 carries 75,000 bits per 1 ms slot.
  static const RateTable& standard();

  explicit RateTable(const std::array<int64_t, 15>& entries);

  // cqi in 1..15; out of range throws std::domain_error.
  int64_t rate_from_cqi(int cqi) const {
    if (cqi < kCqiMin || cqi > kCqiMax)
      throw std::domain_error("cqi out of range 1..15");
    return entries_[cqi - 1];
  }

  int64_t min_rate() const { return entries_.front(); }
  int64_t peak_rate() const { return entries_.back(); }
  double mean_rate() const;
  // Mean over the Good half (CQI 8..15) / Bad half (CQI 1..7).
  double mean_good_rate() const;
  double mean_bad_rate() const;

  const std::array<int64_t, 15>& entries() const { return entries_; }

 private:
  std::array<int64_t, 15> entries_;
};

// Monotone step map from SIR in dB to CQI 1..15. Thresholds are uniform in
// dB from -6 to +22; clamps outside that span.
int cqi_from_sir(double sir_db);

}  // namespace ltesim
