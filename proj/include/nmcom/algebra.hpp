// Prime-order subgroup arithmetic over Z_p*, the one-way function f(x) = g^x,
// seeded randomness with hierarchical splitting, and a brute-force dlog oracle
// for small test groups.
#ifndef NMCOM_ALGEBRA_HPP_
#define NMCOM_ALGEBRA_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nmcom {

using Int = mpz_class;

struct GroupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownProfile : GroupError {
    using GroupError::GroupError;
};
struct GroupTooLarge : GroupError {
    using GroupError::GroupError;
};

struct GroupParams {
    Int p;   // prime modulus
    Int q;   // prime order of the subgroup generated by g
    Int g;   // generator of the order-q subgroup
    std::string name;

    bool operator==(const GroupParams&) const = default;
};

// Profiles: test23 (p=23,q=11,g=2), test-q20 (~2^20 order), modp1536 (RFC 3526).
GroupParams group_profile(const std::string& name);
// Validates q | p-1, g != 1, g^q = 1. Throws GroupError on violation.
void validate_group(const GroupParams& gp);

struct Scalar {
    Int v;  // in [0, q)
    Scalar() : v(0) {}
    explicit Scalar(Int x) : v(std::move(x)) {}
    explicit Scalar(unsigned long x) : v(x) {}
    bool operator==(const Scalar&) const = default;
};

struct GroupElement {
    Int v;  // in [1, p), order-q subgroup member
    GroupElement() : v(1) {}
    explicit GroupElement(Int x) : v(std::move(x)) {}
    explicit GroupElement(unsigned long x) : v(x) {}
    bool operator==(const GroupElement&) const = default;
};

// Modular exponentiation with a native fast path for word-sized moduli.
Int powmod(const Int& base, const Int& exp, const Int& mod);

// Scalar arithmetic mod q.
Scalar sc_add(const GroupParams&, const Scalar&, const Scalar&);
Scalar sc_sub(const GroupParams&, const Scalar&, const Scalar&);
Scalar sc_mul(const GroupParams&, const Scalar&, const Scalar&);
Scalar sc_neg(const GroupParams&, const Scalar&);
Scalar sc_inv(const GroupParams&, const Scalar&);  // throws GroupError on 0

// Group operations mod p.
GroupElement g_mul(const GroupParams&, const GroupElement&, const GroupElement&);
GroupElement g_div(const GroupParams&, const GroupElement&, const GroupElement&);
GroupElement g_inv(const GroupParams&, const GroupElement&);
GroupElement g_pow(const GroupParams&, const GroupElement& base, const Scalar& e);
bool in_subgroup(const GroupParams&, const GroupElement&);

// f(x) = g^x, injective on [0, q).
GroupElement f_eval(const GroupParams&, const Scalar& x);

// Unique x with g^x = y, or nullopt if y is outside the subgroup.
// Guarded: throws GroupTooLarge when q > 2^24.
std::optional<Scalar> dlog_bruteforce(const GroupParams&, const GroupElement& y);

inline constexpr uint64_t kDlogGuard = uint64_t{1} << 24;

// Deterministic seeded RNG. Identical seeds give identical streams; child()
// derives independent streams from the seed key (not the draw position), so
// sibling components can be split off without ordering hazards.
class Rng {
  public:
    Rng() : Rng(0) {}
    explicit Rng(uint64_t seed) : key_(seed), ctr_(0) {}

    uint64_t next_u64();
    bool bit() { return next_u64() & 1; }
    std::vector<uint8_t> bytes(size_t n);
    // Uniform in [0, q) by rejection sampling.
    Scalar scalar(const GroupParams&);
    // Uniform in [0, n).
    uint64_t below(uint64_t n);

    Rng child(uint64_t index) const;
    Rng child(std::string_view label) const;

    uint64_t key() const { return key_; }
    uint64_t counter() const { return ctr_; }
    void restore(uint64_t key, uint64_t ctr) { key_ = key; ctr_ = ctr; }

    bool operator==(const Rng&) const = default;

  private:
    uint64_t key_;
    uint64_t ctr_;
};

std::string to_hex(const Int& x);
Int from_hex(const std::string& s);

}  // namespace nmcom

#endif  // NMCOM_ALGEBRA_HPP_
