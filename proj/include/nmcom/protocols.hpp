// Message-driven state machines for the three commitment protocols: the
// one-sided small-tag scheme, the two-slot synchronous scheme, and the
// asynchronous scheme with trapdoor generation and repeated ExtCom/WIPoK
// slots. Also: language builders, repetition constants, honest sessions.
#ifndef NMCOM_PROTOCOLS_HPP_
#define NMCOM_PROTOCOLS_HPP_

#include "nmcom/sigma.hpp"

namespace nmcom {

struct ProtocolViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProtocolKind { OneSided, TwoSlotSync, Async };

std::string protocol_name(ProtocolKind);
ProtocolKind protocol_from_name(const std::string&);

struct Tag {
    unsigned t = 1;        // 1 <= t <= space_n
    unsigned space_n = 4;  // tag space [n]
};

struct RepetitionConstants {
    unsigned n5 = 2, n6 = 2, n7 = 2, n8 = 2, n9 = 2;
    bool faithful = false;  // lab profile constants carry faithful=false
};

// Minimal constants satisfying the recursion: each n_i strictly exceeds the
// total round count of Steps 1..i-1 of the asynchronous protocol, and n5
// exceeds the WIPoK and ExtCom round counts.
RepetitionConstants compute_constants(unsigned wipok_rounds, unsigned extcom_rounds);
RepetitionConstants lab_constants();
// Commit-stage round total of the asynchronous protocol under these constants.
unsigned async_round_total(const RepetitionConstants&, unsigned wipok_rounds,
                           unsigned extcom_rounds);

inline constexpr unsigned kWipokRounds = 3;
inline constexpr unsigned kExtComRounds = 3;

struct PuzzleSet {
    std::vector<GroupElement> ys;
    std::vector<Scalar> preimages;    // creator side only
    std::vector<Commitment> coms;     // preimage commitments under beta' (P2/P3)
    std::vector<Scalar> com_rands;    // creator side only
};

struct TrapdoorPair {
    GroupElement V0, V1;
    std::optional<Scalar> v0, v1;  // receiver side
};

// ---------------------------------------------------------------------------
// Wire messages.

struct MsgBeta { GroupElement h; };
struct MsgCommit { Commitment com; std::optional<GroupElement> beta_prime; };
struct MsgTrapGen { GroupElement V0, V1; };
struct MsgPuzzles {
    std::vector<GroupElement> yA;
    std::vector<Commitment> comA;
    std::vector<GroupElement> yB;
    std::vector<Commitment> comB;
};
struct MsgAck {};
struct MsgSigmaCommit { std::vector<std::vector<GroupElement>> a; };
struct MsgSigmaChallenge { Scalar e; };
struct MsgSigmaResponse { SigmaTranscript t; };
struct MsgExtComCommit { std::vector<std::array<Commitment, 2>> pairs; };
struct MsgExtComChallenge { std::vector<uint8_t> bits; };
struct MsgExtComOpen { std::vector<Opening> opened; };
struct MsgDecommit { Scalar m, r; };
struct MsgAbort {};

using ProtocolMessage =
    std::variant<MsgBeta, MsgCommit, MsgTrapGen, MsgPuzzles, MsgAck, MsgSigmaCommit,
                 MsgSigmaChallenge, MsgSigmaResponse, MsgExtComCommit, MsgExtComChallenge,
                 MsgExtComOpen, MsgDecommit, MsgAbort>;

std::string message_type_name(const ProtocolMessage&);

// ---------------------------------------------------------------------------
// Session scripts: one entry per commit-stage round.

enum class RoundKind {
    Beta, Commit, TrapGen, Puzzles, Ack,
    SigmaA, SigmaE, SigmaZ,
    EcCommit, EcChallenge, EcOpen,
};

// Which proof a sigma round belongs to.
enum class SigmaFamily { P1Wipok1, Trap, Wipok1A, Wipok1B, Wipok2 };
enum class EcFamily { Ec1 = 1, Ec2 = 2, Ec3 = 3 };

struct Round {
    std::string label;   // e.g. "wipok1a.2.e", "extcom3.1.coms", "beta"
    char sender;         // 'C' or 'R'
    RoundKind kind;
    SigmaFamily sigma_family = SigmaFamily::P1Wipok1;
    EcFamily ec_family = EcFamily::Ec1;
    unsigned rep = 1;    // 1-based repetition index within the family
};

struct ProtoConfig {
    ProtocolKind kind = ProtocolKind::OneSided;
    GroupParams params;
    Tag tag;
    RepetitionConstants consts;  // async only
    size_t n_pairs = 20;         // ExtCom statistical parameter
    bool insert_ack = true;      // dummy ACK after the puzzle step (P1/P2)
};

std::vector<Round> session_script(const ProtoConfig&);

// ---------------------------------------------------------------------------
// Language builders. The flattened branch layout of the WIPoK-2 statement is
// [opening][A-preimages][B-preimages][trapdoors] in that order.

enum class LanguageId { P1Wipok1, Wipok1A, Wipok1B, Trap, Wipok2 };

struct SessionContext {
    ProtoConfig cfg;
    std::optional<ReceiverBasis> basis;       // public part
    std::optional<Commitment> com;
    std::optional<GroupElement> beta_prime;
    std::optional<TrapdoorPair> trap;         // public part
    PuzzleSet puzzA, puzzB;                   // public parts
    std::vector<ExtComTranscript> extcoms;
};

struct MissingContext : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Statement build_language(LanguageId, const SessionContext&);
// Flattened branch offsets for the WIPoK-2 statement of this protocol.
struct Wipok2Layout {
    size_t opening = 0;  // single branch
    size_t a_begin = 1;  // A-preimage branches
    size_t b_begin = 0;  // B-preimage branches (P2/P3)
    size_t trap_begin = 0;  // trapdoor branches (P3)
    size_t total = 0;
};
Wipok2Layout wipok2_layout(const ProtoConfig&);

// ---------------------------------------------------------------------------
// Party state machine. Value-copyable; advancing is deterministic given the
// embedded rng and the incoming messages.

enum class Role { Committer, Receiver };
enum class Decision { Pending, Accept, Reject };

class PartyState {
  public:
    PartyState() = default;
    // Committer knows m; receiver passes m = nullopt.
    PartyState(Role role, const ProtoConfig& cfg, std::optional<Scalar> m, Rng rng);

    // If it is this party's turn to send, produce the next message.
    std::optional<ProtocolMessage> poll_send();
    // Deliver the counterparty's message. Unexpected input makes the state
    // rejecting instead of throwing.
    void deliver(const ProtocolMessage&);

    Decision decision() const { return decision_; }
    bool commit_done() const { return cursor_ >= script_.size(); }
    size_t cursor() const { return cursor_; }
    const std::vector<Round>& script() const { return script_; }
    const ProtoConfig& config() const { return cfg_; }
    Role role() const { return role_; }

    // Decommit stage (committer emits, receiver verifies).
    MsgDecommit decommit_message() const;
    bool verify_decommit(const MsgDecommit&) const;

    // Harness access.
    const SessionContext& context() const { return ctx_; }
    NaorTranscript naor_transcript() const;  // includes basis secret when owned
    const PuzzleSet& puzzle_a() const { return puzzA_; }
    const PuzzleSet& puzzle_b() const { return puzzB_; }
    const std::optional<TrapdoorPair>& trapdoor() const { return trap_; }
    std::optional<Scalar> message() const { return m_; }
    std::optional<Opening> opening() const;
    const std::vector<ExtComCommitter>& extcom_committers() const { return ec_committers_; }

    // Witness-index override for the prover side of WIPoK-1 (1-based).
    void set_wipok1_witness_index(unsigned i) { wipok1_index_ = i; }
    // Witness override for the prover side of WIPoK-2 (extraction machines and
    // the planted-trapdoor adversary route a non-opening witness through it).
    void set_wipok2_witness(Witness w) { wipok2_override_ = std::move(w); }
    // Replace the continuation randomness (fresh per extraction-machine run).
    void reseed(Rng r) { rng_ = r; }

    // Fields are public so the JSON layer can rebuild snapshots.
    Role role_ = Role::Committer;
    ProtoConfig cfg_;
    Rng rng_;
    size_t cursor_ = 0;
    Decision decision_ = Decision::Pending;
    std::optional<Scalar> m_, r_;
    std::optional<ReceiverBasis> basis_;             // receiver keeps secret
    std::optional<Scalar> beta_prime_secret_;        // committer generated it
    std::optional<TrapdoorPair> trap_;
    PuzzleSet puzzA_, puzzB_;
    unsigned wipok1_index_ = 1;
    std::optional<Witness> wipok2_override_;
    std::vector<ExtComCommitter> ec_committers_;
    std::optional<SigmaProver> sigma_prover_;
    std::optional<Scalar> sigma_challenge_;          // verifier's pending challenge
    std::optional<MsgSigmaCommit> sigma_first_;      // verifier's stored first message
    SessionContext ctx_;
    std::vector<Round> script_;

  private:
    void fail();
    bool my_turn_to_send() const;
    ProtocolMessage produce(const Round&);
    void consume(const Round&, const ProtocolMessage&);
    FlatOr current_flat() const;
    Witness current_witness(const FlatOr&) const;
    LanguageId language_of(SigmaFamily) const;
};

// ---------------------------------------------------------------------------
// Honest sessions.

struct TraceEntry {
    std::string session;  // "left"|"right"|"standalone"
    unsigned round = 0;
    char from = 'C';
    std::string step;
};

struct SessionResult {
    NaorTranscript transcript;
    std::vector<TraceEntry> trace;
    Decision commit_decision = Decision::Pending;
    Decision decommit_decision = Decision::Pending;
    MsgDecommit decommit{Scalar(), Scalar()};
    // committer snapshots taken just before each ExtCom challenge round,
    // keyed by round label; used by the ExtCom consistency checks
    std::vector<std::pair<std::string, PartyState>> extcom_snapshots;
};

SessionResult run_honest_session(const ProtoConfig&, const Scalar& m, Rng& rng,
                                 bool capture_extcom_snapshots = false);

bool decommit_verify(const GroupParams&, const NaorTranscript&, const Scalar& m, const Scalar& r);

// ExtCom committer shim over a party snapshot paused before an ExtCom
// challenge round, so the standard extractor can rewind it.
std::unique_ptr<ExtComCommitterShim> party_extcom_shim(const PartyState& paused_before_challenge,
                                                       const std::vector<std::array<Commitment, 2>>& pairs);

}  // namespace nmcom

#endif  // NMCOM_PROTOCOLS_HPP_
