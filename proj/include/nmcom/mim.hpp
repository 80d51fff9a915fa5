// Man-in-the-middle game harness: dual-session execution under a scheduler,
// prefix snapshot/resume, adversary plugin interface, tag guard, schedule
// classification (Bad 1-5), good-index selection, and the schedule-filter
// wrapper.
#ifndef NMCOM_MIM_HPP_
#define NMCOM_MIM_HPP_

#include <deque>

#include "nmcom/protocols.hpp"

namespace nmcom {

enum class SessionSide { Left, Right };
inline const char* side_name(SessionSide s) { return s == SessionSide::Left ? "left" : "right"; }

struct TraceEvent {
    SessionSide session;
    unsigned round;  // session-local round index (0-based)
    char from;       // 'C' or 'R'
    std::string step;
};
using Trace = std::vector<TraceEvent>;

// ---------------------------------------------------------------------------
// Schedules: total order over both sessions' send events.

struct ScheduleAction {
    SessionSide session;
    unsigned round;  // session-local round index (0-based)
};

struct Schedule {
    std::vector<ScheduleAction> actions;
};

// Canonical synchronous interleaving: R-sent rounds go right first, C-sent
// rounds left first, so the adversary always answers in the other session.
Schedule synchronous_schedule(const ProtoConfig&);
// Uniformly random interleaving of the two sessions' round sequences.
Schedule random_schedule(const ProtoConfig&, Rng&);
// Interleaving that front-loads `lead` rounds of one session.
Schedule skewed_schedule(const ProtoConfig&, SessionSide first, unsigned lead);

// ---------------------------------------------------------------------------
// Adversary plugin interface.

struct Emission {
    SessionSide session;
    ProtocolMessage msg;
};

struct MimConfig {
    ProtoConfig proto;     // group, kind, constants, n_pairs (left tag inside)
    Tag left_tag, right_tag;
    Scalar m;              // left committed message
    std::optional<unsigned> leak_right_preimage;  // index leaked to the adversary
    unsigned right_wipok1_index = 1;              // witness index for the right receiver
};

class Adversary {
  public:
    virtual ~Adversary() = default;
    virtual std::unique_ptr<Adversary> clone() const = 0;
    virtual std::string name() const = 0;
    virtual void init(const std::vector<uint8_t>& advice, const MimConfig&, Rng rng) = 0;
    virtual void on_message(SessionSide, const ProtocolMessage&) = 0;
    // Harness leak hook (right-session preimage for the planted adversary).
    virtual void on_leak(unsigned index, const Scalar& preimage) { (void)index; (void)preimage; }
    // Full message log exposure; called for every trace event.
    virtual void observe(const TraceEvent&) {}
    virtual void notify_session_dead(SessionSide) {}
    virtual std::vector<Emission> drain() = 0;
    virtual std::vector<uint8_t> finalize() = 0;
};

std::unique_ptr<Adversary> make_adversary(const std::string& name);
// Built-ins: "honest-independent" (advice = right message m~ as hex),
// "copier", "abort", "planted-trapdoor" (honest-independent that proves the
// leaked OWF branch in the right WIPoK-2), "schedule" (eager dual-honest).

// ---------------------------------------------------------------------------
// Outcomes.

struct ValB {
    enum Kind { Message, Bot, BotTag } kind = Bot;
    std::optional<Scalar> m;
    bool operator==(const ValB&) const = default;
};

struct MimOutcome {
    std::vector<uint8_t> out_m;
    NaorTranscript tau;        // left Naor transcript (committer view)
    NaorTranscript tau_tilde;  // right Naor transcript (receiver view, has basis secret)
    bool b = false;            // right receiver decision
    ValB val_b;
    bool schedule_infeasible = false;
    Trace trace;
};

// Recompute val_b from (tau_tilde, b) and the tag pair; the game asserts its
// own outcome equals this.
ValB val_b_from(const GroupParams&, const NaorTranscript& tau_tilde, bool b, Tag left, Tag right);

// ---------------------------------------------------------------------------
// The game. Value-semantic so extraction machines can snapshot mid-run.

class MimGame {
  public:
    MimGame(const MimConfig&, const Adversary& prototype, const std::vector<uint8_t>& advice,
            const Schedule&, Rng rng);
    MimGame(const MimGame&);
    MimGame& operator=(const MimGame&);
    MimGame(MimGame&&) = default;
    MimGame& operator=(MimGame&&) = default;

    // Deliver the next scheduled send. False when the schedule is exhausted
    // or the run became infeasible.
    bool step();
    void run_to_completion();
    // Run until both sessions completed their `commit` round (prefix point).
    void run_to_prefix();

    bool at_prefix() const;
    bool done() const;
    bool infeasible() const { return infeasible_; }
    MimOutcome outcome();  // finalizes the adversary

    // The action step() would execute next, with dead-session actions already
    // skipped; extraction machines pause the game on specific rounds.
    struct NextAction {
        ScheduleAction action;
        Round round;
        bool honest_sender;
    };
    std::optional<NextAction> peek_next();
    // Front of the adversary's (resp. honest party's) outgoing queue.
    const ProtocolMessage* peek_adv(SessionSide) const;
    const ProtocolMessage* peek_honest(SessionSide) const;
    bool session_dead(SessionSide s) const {
        return s == SessionSide::Left ? left_dead_ : right_dead_;
    }

    const Trace& trace() const { return trace_; }
    const PartyState& left_committer() const { return left_c_; }
    PartyState& left_committer() { return left_c_; }
    const PartyState& right_receiver() const { return right_r_; }
    PartyState& right_receiver() { return right_r_; }
    Adversary& adversary() { return *adv_; }
    const MimConfig& config() const { return cfg_; }
    size_t cursor() const { return cursor_; }

  private:
    void pump_honest(SessionSide);
    void absorb_emissions();
    PartyState& honest_party(SessionSide);

    MimConfig cfg_;
    Schedule schedule_;
    size_t cursor_ = 0;
    PartyState left_c_, right_r_;
    std::unique_ptr<Adversary> adv_;
    // honest parties' produced-but-unsent messages, in round order
    std::deque<ProtocolMessage> left_pending_, right_pending_;
    // adversary emissions waiting for their schedule slot
    std::deque<ProtocolMessage> adv_left_, adv_right_;
    bool left_dead_ = false, right_dead_ = false;
    bool infeasible_ = false;
    bool leaked_ = false;
    Trace trace_;
};

MimOutcome run_mim(const MimConfig&, const Adversary& prototype,
                   const std::vector<uint8_t>& advice, const Schedule&, Rng rng);

// Prefix: snapshot of everything needed to resume after Steps 1-2 of both
// sessions. The game object inside is paused at the prefix point.
struct Prefix {
    std::unique_ptr<MimGame> game;
    NaorTranscript tau, tau_tilde;

    Prefix clone() const;
};

Prefix prefix_gen(const MimConfig&, const Adversary& prototype,
                  const std::vector<uint8_t>& advice, const Schedule&, Rng rng);
MimOutcome resume_mim(Prefix);

// ---------------------------------------------------------------------------
// Schedule classification (asynchronous protocol traces).

struct ScheduleClass {
    bool bad[5] = {false, false, false, false, false};
    bool good() const { return !(bad[0] || bad[1] || bad[2] || bad[3] || bad[4]); }
    bool operator==(const ScheduleClass&) const = default;
};

ScheduleClass classify_schedule(const Trace&);

// Slot families for the good-index rule.
enum class SlotFamily { ExtCom1, Wipok1A, ExtCom2, Wipok1B, ExtCom3 };

struct WindowSpec {
    SessionSide side;
    std::string first_label;  // first step label of the window (inclusive)
    std::string last_label;   // last step label (inclusive)
};

// Smallest 1-based repetition index of the slot family (on the given side)
// with no window message strictly inside its span; nullopt when none exists.
std::optional<unsigned> good_index(const Trace&, SessionSide slot_side, SlotFamily,
                                   const WindowSpec&);

// Predetermined-class filter: wraps an adversary so its output becomes bot
// unless the realized schedule lands in the target class.
enum class TargetClass { Synchronous, Good, Bad1, Bad2, Bad3, Bad4, Bad5 };
bool trace_in_class(const Trace&, TargetClass, const ProtoConfig&);
std::unique_ptr<Adversary> schedule_filter_wrapper(std::unique_ptr<Adversary> inner,
                                                   TargetClass target, const ProtoConfig&);
inline const std::vector<uint8_t>& bot_output() {
    static const std::vector<uint8_t> bot = {0x00};
    return bot;
}

}  // namespace nmcom

#endif  // NMCOM_MIM_HPP_
