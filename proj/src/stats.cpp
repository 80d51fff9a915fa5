#include "nmcom/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <set>

namespace nmcom {

ChiSquareResult chi_square_two_sample(const std::map<std::string, uint64_t>& a,
                                      const std::map<std::string, uint64_t>& b) {
    std::set<std::string> keys;
    for (const auto& [k, _] : a) keys.insert(k);
    for (const auto& [k, _] : b) keys.insert(k);

    double na = 0, nb = 0;
    for (const auto& [_, c] : a) na += static_cast<double>(c);
    for (const auto& [_, c] : b) nb += static_cast<double>(c);
    ChiSquareResult res;
    if (na == 0 || nb == 0 || keys.size() < 2) return res;

    // pool buckets until every expected count is >= 5
    std::vector<std::pair<double, double>> cells;
    double pa = 0, pb = 0;
    for (const auto& k : keys) {
        auto ia = a.find(k);
        auto ib = b.find(k);
        pa += ia == a.end() ? 0.0 : static_cast<double>(ia->second);
        pb += ib == b.end() ? 0.0 : static_cast<double>(ib->second);
        double tot = pa + pb;
        if (tot * na / (na + nb) >= 5.0 && tot * nb / (na + nb) >= 5.0) {
            cells.emplace_back(pa, pb);
            pa = pb = 0;
        }
    }
    if (pa + pb > 0) {
        if (cells.empty()) return res;
        cells.back().first += pa;
        cells.back().second += pb;
    }
    if (cells.size() < 2) return res;

    double chi = 0;
    for (const auto& [ca, cb] : cells) {
        double tot = ca + cb;
        double ea = tot * na / (na + nb);
        double eb = tot * nb / (na + nb);
        chi += (ca - ea) * (ca - ea) / ea;
        chi += (cb - eb) * (cb - eb) / eb;
    }
    res.statistic = chi;
    res.dof = static_cast<double>(cells.size() - 1);
    boost::math::chi_squared dist(res.dof);
    res.p_value = 1.0 - boost::math::cdf(dist, chi);
    return res;
}

WilsonInterval wilson(uint64_t successes, uint64_t trials, double z) {
    WilsonInterval w;
    if (trials == 0) return w;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    w.center = center;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

double total_variation(const std::map<std::string, uint64_t>& a,
                       const std::map<std::string, uint64_t>& b) {
    double na = 0, nb = 0;
    for (const auto& [_, c] : a) na += static_cast<double>(c);
    for (const auto& [_, c] : b) nb += static_cast<double>(c);
    if (na == 0 || nb == 0) return 1.0;
    std::set<std::string> keys;
    for (const auto& [k, _] : a) keys.insert(k);
    for (const auto& [k, _] : b) keys.insert(k);
    double tv = 0;
    for (const auto& k : keys) {
        auto ia = a.find(k);
        auto ib = b.find(k);
        double fa = ia == a.end() ? 0.0 : static_cast<double>(ia->second) / na;
        double fb = ib == b.end() ? 0.0 : static_cast<double>(ib->second) / nb;
        tv += std::abs(fa - fb);
    }
    return tv / 2.0;
}

uint64_t stable_hash(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace nmcom
