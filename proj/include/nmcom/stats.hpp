// Small statistics kit for the property tests: two-sample chi-square,
// Wilson score intervals, empirical total variation distance.
#ifndef NMCOM_STATS_HPP_
#define NMCOM_STATS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nmcom {

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

// Two-sample test of homogeneity over shared buckets. Buckets with both
// counts zero are dropped; tiny expected counts are pooled.
ChiSquareResult chi_square_two_sample(const std::map<std::string, uint64_t>& a,
                                      const std::map<std::string, uint64_t>& b);

struct WilsonInterval {
    double lo = 0.0, hi = 1.0, center = 0.0;
};
WilsonInterval wilson(uint64_t successes, uint64_t trials, double z = 1.96);

double total_variation(const std::map<std::string, uint64_t>& a,
                       const std::map<std::string, uint64_t>& b);

// FNV-1a over a string, stable across runs; used to bucket transcripts.
uint64_t stable_hash(const std::string& s);

}  // namespace nmcom

#endif  // NMCOM_STATS_HPP_
