// Two-message statistically (here perfectly) binding commitment with a
// receiver-chosen basis, the committed-value oracle for small groups, and the
// 3-round cut-and-choose extractable commitment ExtCom with its rewinding
// extractor.
#ifndef NMCOM_COMMITMENTS_HPP_
#define NMCOM_COMMITMENTS_HPP_

#include <array>
#include <memory>

#include "nmcom/algebra.hpp"

namespace nmcom {

struct ReceiverBasis {
    GroupElement h;                   // h = g^s
    std::optional<Scalar> s_secret;   // present only at the basis creator
    bool operator==(const ReceiverBasis& o) const { return h == o.h; }
};

ReceiverBasis basis_gen(const GroupParams&, Rng&);
ReceiverBasis basis_from_secret(const GroupParams&, const Scalar& s);
inline ReceiverBasis public_basis(const GroupElement& h) { return ReceiverBasis{h, std::nullopt}; }

struct Commitment {
    GroupElement u, v;  // (g^r, h^r g^m)
    bool operator==(const Commitment&) const = default;
};

struct Opening {
    Scalar m, r;
    bool operator==(const Opening&) const = default;
};

Commitment commit(const GroupParams&, const ReceiverBasis&, const Scalar& m, const Scalar& r);
bool verify_open(const GroupParams&, const ReceiverBasis&, const Commitment&, const Opening&);

struct NaorTranscript {
    ReceiverBasis basis;
    Commitment com;
    // Honest runs on non-brute-forceable groups may attach the opening so the
    // committed-value oracle stays exact instead of approximated.
    std::optional<Opening> instrumentation;
};

// Unique committed value, or nullopt when no opening exists (components
// outside the subgroup). Uses the basis secret when present, a 1-D dlog scan
// otherwise, and a full 2-D scan as the last resort for tiny groups.
// Throws GroupTooLarge when none of the routes is available.
std::optional<Scalar> val_oracle(const GroupParams&, const NaorTranscript&);

// ---------------------------------------------------------------------------
// ExtCom: commit to m as n pairs of additive shares (s_i^0 + s_i^1 = m mod q),
// each share committed under the basis; receiver challenges one share per
// pair; decommit opens everything.

struct ExtComTranscript {
    ReceiverBasis basis;
    size_t n_pairs = 0;
    std::vector<std::array<Commitment, 2>> pair_coms;
    std::vector<uint8_t> challenge;   // one bit per pair
    std::vector<Opening> opened;      // per pair, at the challenged position
    bool accepted = false;
};

struct ExtComDecommit {
    Scalar m;
    std::vector<std::array<Opening, 2>> openings;  // all shares
};

// Committer half of one ExtCom instance; value-copyable.
struct ExtComCommitter {
    ReceiverBasis basis;  // public part suffices
    Scalar m;
    std::vector<std::array<Opening, 2>> shares;  // (share value, randomness)
    std::vector<std::array<Commitment, 2>> coms;

    static ExtComCommitter create(const GroupParams&, const ReceiverBasis&, const Scalar& m,
                                  size_t n_pairs, Rng&);
    std::vector<Opening> respond(const std::vector<uint8_t>& challenge) const;
    ExtComDecommit decommit() const;
};

std::vector<uint8_t> extcom_challenge(size_t n_pairs, Rng&);
bool extcom_check_opening(const GroupParams&, const ReceiverBasis&,
                          const std::vector<std::array<Commitment, 2>>& pair_coms,
                          const std::vector<uint8_t>& challenge,
                          const std::vector<Opening>& opened);

// Full honest commit-phase run; also returns the decommit info.
std::pair<ExtComTranscript, ExtComDecommit> extcom_run(const GroupParams&, const ReceiverBasis&,
                                                       const Scalar& m, size_t n_pairs,
                                                       Rng& committer_rng, Rng& receiver_rng);

bool extcom_verify_decommit(const GroupParams&, const ExtComTranscript&, const Scalar& m,
                            const ExtComDecommit&);

// A (possibly adversarial) committer exposed as a cloneable snapshot, so the
// extractor can rewind the challenge round.
class ExtComCommitterShim {
  public:
    virtual ~ExtComCommitterShim() = default;
    virtual std::unique_ptr<ExtComCommitterShim> clone() const = 0;
    // First commit-phase message; nullopt = abort.
    virtual std::optional<std::vector<std::array<Commitment, 2>>> first() = 0;
    // Openings for the challenged positions; nullopt = abort.
    virtual std::optional<std::vector<Opening>> respond(const std::vector<uint8_t>& challenge) = 0;
};

std::unique_ptr<ExtComCommitterShim> honest_extcom_shim(const GroupParams&, const ReceiverBasis&,
                                                        const Scalar& m, size_t n_pairs, Rng rng);

struct ExtComExtractOutcome {
    ExtComTranscript view;            // main-thread receiver view
    std::optional<Scalar> sigma;      // extracted value, nullopt = bot
    bool budget_exhausted = false;    // distinct from an honest bot
    uint64_t rewinds = 0;
};

ExtComExtractOutcome extcom_extract(const GroupParams&, const ReceiverBasis&,
                                    ExtComCommitterShim& committer, size_t n_pairs,
                                    Rng& receiver_rng, Rng& rewind_rng, uint64_t budget);

}  // namespace nmcom

#endif  // NMCOM_COMMITMENTS_HPP_
