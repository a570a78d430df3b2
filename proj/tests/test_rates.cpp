#include <doctest.h>

#include "ltesim/rates.hpp"

using namespace ltesim;

// Independent oracle: rebuild the table from the 3GPP spectral-efficiency
// ratios and check the implementation's entries against it.
static long long oracle_rate(int cqi) {
  static const double eff[15] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                 1.1758, 1.4766, 1.9141, 2.4063, 2.7305,
                                 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
  return static_cast<long long>(75000.0 * eff[cqi - 1] / eff[14] + 0.5);
}

TEST_CASE("rate table peak and monotonicity") {
  const RateTable& t = RateTable::standard();
  CHECK(t.rate_from_cqi(15) == 75000);
  for (int c = 2; c <= 15; ++c)
    CHECK(t.rate_from_cqi(c) > t.rate_from_cqi(c - 1));
}

TEST_CASE("rate table matches the efficiency-scaling oracle") {
  const RateTable& t = RateTable::standard();
  for (int c = 1; c <= 15; ++c)
    CHECK(t.rate_from_cqi(c) == oracle_rate(c));
}

TEST_CASE("cqi out of range is a domain error") {
  const RateTable& t = RateTable::standard();
  CHECK_THROWS_AS(t.rate_from_cqi(0), std::domain_error);
  CHECK_THROWS_AS(t.rate_from_cqi(16), std::domain_error);
}

TEST_CASE("sir mapping clamps and is monotone") {
  CHECK(cqi_from_sir(40.0) == 15);
  CHECK(cqi_from_sir(-40.0) == 1);
  int prev = 1;
  for (double s = -50; s <= 50; s += 0.25) {
    int c = cqi_from_sir(s);
    CHECK(c >= prev);
    CHECK(c >= 1);
    CHECK(c <= 15);
    prev = c;
  }
}

TEST_CASE("half split: every good rate beats every bad rate") {
  const RateTable& t = RateTable::standard();
  long long max_bad = 0, min_good = 1 << 30;
  for (int c = 1; c <= 7; ++c) max_bad = std::max<long long>(max_bad, t.rate_from_cqi(c));
  for (int c = 8; c <= 15; ++c) min_good = std::min<long long>(min_good, t.rate_from_cqi(c));
  CHECK(min_good > max_bad);
}
