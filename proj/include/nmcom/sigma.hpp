// Sigma protocols for the protocol languages: a generic proof of knowledge of
// a discrete-log representation (all languages here reduce to linear relations
// over Z_q exponents), CDS OR-composition giving witness-indistinguishable
// proofs of knowledge, honest-verifier simulators, special-soundness
// extraction, and the rewinding witness-extended emulator.
#ifndef NMCOM_SIGMA_HPP_
#define NMCOM_SIGMA_HPP_

#include <memory>
#include <variant>

#include "nmcom/commitments.hpp"

namespace nmcom {

struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RelationViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// targets[j] = prod over terms (col, base) in rows[j] of base ^ w[col].
// Rows are sparse: the big ExtCom-consistency relation has thousands of
// unknowns but at most three terms per equation.
struct LinearRelation {
    struct Term {
        size_t col;
        GroupElement base;
        bool operator==(const Term&) const = default;
    };
    size_t n_unknowns = 0;
    std::vector<std::vector<Term>> rows;
    std::vector<GroupElement> targets;

    bool satisfied_by(const GroupParams&, const std::vector<Scalar>& w) const;
};

// ---------------------------------------------------------------------------
// Statement variants (flattened to an OR of atomic linear relations before
// proving).

struct DLogStmt {
    GroupElement y;  // knows x with g^x = y
};
struct OpeningStmt {
    ReceiverBasis basis;  // knows (m, r) with u = g^r, v = h^r g^m
    Commitment com;
};
struct OneOfTStmt {
    std::vector<GroupElement> ys;  // knows (i, x) with y_i = g^x
};
struct ConsistentPuzzleStmt {
    std::vector<GroupElement> ys;  // knows (i, x, rho): y_i = g^x and com_i opens to x
    std::vector<Commitment> coms;
    ReceiverBasis basis_prime;
};
struct TrapOrStmt {
    GroupElement V0, V1;  // knows v with g^v = V0 or g^v = V1
};
struct OpeningWithExtComsStmt {
    ReceiverBasis basis;  // knows (m, r, all share openings) consistent with m
    Commitment com;
    std::vector<ExtComTranscript> extcoms;
};
struct Statement;
struct OrListStmt {
    std::vector<Statement> parts;
};

using StatementVariant = std::variant<DLogStmt, OpeningStmt, OneOfTStmt, ConsistentPuzzleStmt,
                                      TrapOrStmt, OpeningWithExtComsStmt, OrListStmt>;

struct Statement {
    StatementVariant v;
};

// Semantic meaning of a flattened branch, used to classify extracted witnesses.
enum class BranchKind { Opening, Preimage, PreimageWithCom, Trapdoor, OpeningWithExtComs };

struct BranchMeta {
    BranchKind kind;
    size_t index = 0;  // 1-based preimage index or trapdoor side
};

struct FlatOr {
    std::vector<LinearRelation> branches;
    std::vector<BranchMeta> meta;
};

FlatOr flatten(const GroupParams&, const Statement&);

struct Witness {
    size_t branch = 0;            // index into the flattened OR
    std::vector<Scalar> w;        // exponents for that branch's relation
    bool operator==(const Witness&) const = default;
};

bool witness_satisfies(const GroupParams&, const FlatOr&, const Witness&);

// Semantic constructors.
Witness witness_dlog(const Scalar& x);
Witness witness_opening(const Scalar& m, const Scalar& r);                    // w = (r, m)
Witness witness_preimage(size_t branch_offset, size_t i, const Scalar& x);    // OneOfT branch i (1-based)
Witness witness_preimage_with_com(size_t branch_offset, size_t i, const Scalar& x, const Scalar& rho);
Witness witness_trapdoor(size_t branch_offset, size_t side, const Scalar& v);
Witness witness_opening_with_extcoms(const GroupParams&, const Scalar& m, const Scalar& r,
                                     const std::vector<ExtComDecommit>& decoms);

// ---------------------------------------------------------------------------
// Transcripts.

struct BranchTranscript {
    std::vector<GroupElement> a;
    Scalar e;
    std::vector<Scalar> z;
};

struct SigmaTranscript {
    std::vector<BranchTranscript> branches;
    Scalar e_total;  // challenge shares sum to this mod q
};

// Prover state across the 3 rounds; value-copyable (rewinding clones it).
struct SigmaProver {
    FlatOr flat;
    Witness wit;
    size_t live = 0;
    std::vector<Scalar> nonces;                 // live branch commit nonces
    std::vector<BranchTranscript> prepared;     // dead branches simulated, live has a only
    bool committed = false;

    static SigmaProver start(const GroupParams&, const FlatOr&, const Witness&, Rng&);
    std::vector<std::vector<GroupElement>> first_message() const;
    SigmaTranscript respond(const GroupParams&, const Scalar& e) const;
};

bool verify_transcript(const GroupParams&, const FlatOr&, const SigmaTranscript&);

// Accepting transcript for a given total challenge, no witness (per-branch
// honest-verifier simulation; distribution equals honest conditioned on e).
SigmaTranscript simulate(const GroupParams&, const FlatOr&, const Scalar& e, Rng&);
BranchTranscript simulate_branch(const GroupParams&, const LinearRelation&, const Scalar& e, Rng&);

// Two accepting transcripts sharing first messages with distinct total
// challenges yield a witness on some divergent branch.
Witness special_sound_extract(const GroupParams&, const FlatOr&, const SigmaTranscript&,
                              const SigmaTranscript&);

// Full honest interaction (used by tests and the atomic prove/verify op).
struct ProveVerifyResult {
    SigmaTranscript transcript;
    bool accepted;
};
ProveVerifyResult atomic_prove_verify(const GroupParams&, const Statement&, const Witness&,
                                      Rng& prover_rng, Rng& verifier_rng);

// ---------------------------------------------------------------------------
// Witness-extended emulation (Def: run the main thread once, return its state
// and decision exactly; on accept, rewind the challenge round for a second
// accepting transcript with a distinct challenge and extract).

// A cheating prover exposed as a cloneable snapshot.
class ResumableProver {
  public:
    virtual ~ResumableProver() = default;
    virtual std::unique_ptr<ResumableProver> clone() const = 0;
    // Run until the first message is produced; nullopt = abort.
    virtual std::optional<std::vector<std::vector<GroupElement>>> first_message() = 0;
    // Deliver the challenge, run until the response; nullopt = abort.
    virtual std::optional<SigmaTranscript> respond(const Scalar& e) = 0;
};

std::unique_ptr<ResumableProver> honest_resumable_prover(const GroupParams&, const FlatOr&,
                                                         const Witness&, Rng rng);

struct WeeResult {
    std::unique_ptr<ResumableProver> state;  // main thread's post-interaction prover state
    bool accepted = false;
    std::optional<Witness> witness;
    bool budget_exhausted = false;
    std::optional<SigmaTranscript> main_transcript;
};

WeeResult wee_run(const GroupParams&, const FlatOr&, ResumableProver& prover, Rng& verifier_rng,
                  Rng& rewind_rng, uint64_t budget);

}  // namespace nmcom

#endif  // NMCOM_SIGMA_HPP_
