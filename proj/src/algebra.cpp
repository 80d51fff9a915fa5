#include "nmcom/algebra.hpp"

#include <unordered_map>

namespace nmcom {

namespace {

// RFC 3526, 1536-bit MODP group. Safe prime: q = (p-1)/2 is prime, 2 generates
// the order-q subgroup of quadratic residues.
const char* kModp1536P =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA237327FFFFFFFFFFFFFFFF";
const char* kModp1536Q =
    "7FFFFFFFFFFFFFFFE487ED5110B4611A62633145C06E0E68948127044533E63A"
    "0105DF531D89CD9128A5043CC71A026EF7CA8CD9E69D218D98158536F92F8A1B"
    "A7F09AB6B6A8E122F242DABB312F3F637A262174D31BF6B585FFAE5B7A035BF6"
    "F71C35FDAD44CFD2D74F9208BE258FF324943328F6722D9EE1003E5C50B1DF82"
    "CC6D241B0E2AE9CD348B1FD47E9267AFC1B2AE91EE51D6CB0E3179AB1042A95D"
    "CF6A9483B84B4B36B3861AA7255E4C0278BA36046511B993FFFFFFFFFFFFFFFF";

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t mix2(uint64_t a, uint64_t b) {
    return splitmix64(splitmix64(a ^ 0x6a09e667f3bcc908ULL) ^ splitmix64(b));
}

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

GroupParams group_profile(const std::string& name) {
    GroupParams gp;
    if (name == "test23") {
        gp = GroupParams{Int(23), Int(11), Int(2), "test23"};
    } else if (name == "test-q20") {
        // q = first prime above 2^20, p = 20q+1, g = 2^((p-1)/q) mod p.
        gp = GroupParams{Int(20971661), Int(1048583), Int(1048576), "test-q20"};
    } else if (name == "modp1536") {
        gp.p = Int(kModp1536P, 16);
        gp.q = Int(kModp1536Q, 16);
        gp.g = 2;
        gp.name = "modp1536";
    } else {
        throw UnknownProfile("unknown group profile: " + name);
    }
    validate_group(gp);
    return gp;
}

void validate_group(const GroupParams& gp) {
    if (gp.p < 3 || gp.q < 2) throw GroupError("degenerate group parameters");
    if ((gp.p - 1) % gp.q != 0) throw GroupError("q does not divide p-1");
    if (gp.g <= 1 || gp.g >= gp.p) throw GroupError("generator out of range");
    if (powmod(gp.g, gp.q, gp.p) != 1) throw GroupError("g^q != 1 mod p");
}

Int powmod(const Int& base, const Int& exp, const Int& mod) {
    if (mod.fits_ulong_p() && base.fits_ulong_p() && exp.fits_ulong_p() &&
        sizeof(unsigned long) == 8) {
        return Int(powmod_u64(base.get_ui(), exp.get_ui(), mod.get_ui()));
    }
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

Scalar sc_add(const GroupParams& gp, const Scalar& a, const Scalar& b) {
    return Scalar(Int((a.v + b.v) % gp.q));
}
Scalar sc_sub(const GroupParams& gp, const Scalar& a, const Scalar& b) {
    Int r = (a.v - b.v) % gp.q;
    if (r < 0) r += gp.q;
    return Scalar(r);
}
Scalar sc_mul(const GroupParams& gp, const Scalar& a, const Scalar& b) {
    return Scalar(Int((a.v * b.v) % gp.q));
}
Scalar sc_neg(const GroupParams& gp, const Scalar& a) {
    return a.v == 0 ? a : Scalar(Int(gp.q - a.v));
}
Scalar sc_inv(const GroupParams& gp, const Scalar& a) {
    if (a.v == 0) throw GroupError("inverse of zero scalar");
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.v.get_mpz_t(), gp.q.get_mpz_t()))
        throw GroupError("scalar not invertible");
    return Scalar(r);
}

GroupElement g_mul(const GroupParams& gp, const GroupElement& a, const GroupElement& b) {
    return GroupElement(Int((a.v * b.v) % gp.p));
}
GroupElement g_inv(const GroupParams& gp, const GroupElement& a) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.v.get_mpz_t(), gp.p.get_mpz_t()))
        throw GroupError("element not invertible");
    return GroupElement(r);
}
GroupElement g_div(const GroupParams& gp, const GroupElement& a, const GroupElement& b) {
    return g_mul(gp, a, g_inv(gp, b));
}
GroupElement g_pow(const GroupParams& gp, const GroupElement& base, const Scalar& e) {
    return GroupElement(powmod(base.v, e.v, gp.p));
}
bool in_subgroup(const GroupParams& gp, const GroupElement& e) {
    if (e.v <= 0 || e.v >= gp.p) return false;
    return powmod(e.v, gp.q, gp.p) == 1;
}

GroupElement f_eval(const GroupParams& gp, const Scalar& x) {
    return GroupElement(powmod(gp.g, x.v, gp.p));
}

std::optional<Scalar> dlog_bruteforce(const GroupParams& gp, const GroupElement& y) {
    if (gp.q > Int(static_cast<unsigned long>(kDlogGuard)))
        throw GroupTooLarge("dlog brute force requires q <= 2^24 (group " + gp.name + ")");
    if (!in_subgroup(gp, y)) return std::nullopt;
    uint64_t q = gp.q.get_ui();
    // baby-step giant-step
    uint64_t mstep = 1;
    while (mstep * mstep < q) ++mstep;
    std::unordered_map<uint64_t, uint64_t> baby;  // value (or hash) -> exponent
    baby.reserve(mstep * 2);
    Int cur = 1;
    for (uint64_t j = 0; j < mstep; ++j) {
        uint64_t k = mpz_fdiv_ui(cur.get_mpz_t(), 0xffffffffffffffc5ULL);
        baby.emplace(k, j);
        cur = (cur * gp.g) % gp.p;
    }
    // giant factor g^{-m}
    Int gm = powmod(gp.g, Int(static_cast<unsigned long>(mstep)), gp.p);
    Int gminv;
    mpz_invert(gminv.get_mpz_t(), gm.get_mpz_t(), gp.p.get_mpz_t());
    Int gamma = y.v;
    for (uint64_t i = 0; i <= mstep; ++i) {
        uint64_t k = mpz_fdiv_ui(gamma.get_mpz_t(), 0xffffffffffffffc5ULL);
        auto it = baby.find(k);
        if (it != baby.end()) {
            uint64_t x = i * mstep + it->second;
            if (x < q && powmod(gp.g, Int(static_cast<unsigned long>(x)), gp.p) == y.v)
                return Scalar(Int(static_cast<unsigned long>(x)));
        }
        gamma = (gamma * gminv) % gp.p;
    }
    return std::nullopt;  // y in subgroup implies unreachable, kept as a guard
}

uint64_t Rng::next_u64() { return mix2(key_, 0xd1b54a32d192ed03ULL + ctr_++); }

std::vector<uint8_t> Rng::bytes(size_t n) {
    std::vector<uint8_t> out(n);
    uint64_t w = 0;
    for (size_t i = 0; i < n; ++i) {
        if (i % 8 == 0) w = next_u64();
        out[i] = static_cast<uint8_t>(w >> (8 * (i % 8)));
    }
    return out;
}

Scalar Rng::scalar(const GroupParams& gp) {
    size_t bits = mpz_sizeinbase(gp.q.get_mpz_t(), 2);
    size_t words = (bits + 63) / 64;
    while (true) {
        Int x = 0;
        for (size_t i = 0; i < words; ++i) {
            x <<= 64;
            x += Int(static_cast<unsigned long>(next_u64()));
        }
        // keep only `bits` low bits, reject if >= q
        Int mask = (Int(1) << bits) - 1;
        x &= mask;
        if (x < gp.q) return Scalar(x);
    }
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    while (true) {
        uint64_t x = next_u64();
        if (x < lim) return x % n;
    }
}

Rng Rng::child(uint64_t index) const {
    return Rng(mix2(key_ ^ 0x9e3779b97f4a7c15ULL, index));
}

Rng Rng::child(std::string_view label) const { return child(fnv1a(label)); }

std::string to_hex(const Int& x) { return x.get_str(16); }

Int from_hex(const std::string& s) { return Int(s, 16); }

}  // namespace nmcom
