#include "nmcom/mim.hpp"

#include <algorithm>

#include "nmcom/stats.hpp"

namespace nmcom {

namespace {

uint64_t fold(uint64_t h, uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

uint64_t digest_int(const Int& x) { return mpz_fdiv_ui(x.get_mpz_t(), 0xffffffffffffffc5ULL); }

uint64_t digest_msg(const ProtocolMessage& m) {
    uint64_t h = stable_hash(message_type_name(m));
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, MsgBeta>) {
                h = fold(h, digest_int(v.h.v));
            } else if constexpr (std::is_same_v<T, MsgCommit>) {
                h = fold(h, digest_int(v.com.u.v));
                h = fold(h, digest_int(v.com.v.v));
                if (v.beta_prime) h = fold(h, digest_int(v.beta_prime->v));
            } else if constexpr (std::is_same_v<T, MsgTrapGen>) {
                h = fold(h, digest_int(v.V0.v));
                h = fold(h, digest_int(v.V1.v));
            } else if constexpr (std::is_same_v<T, MsgPuzzles>) {
                for (const auto& y : v.yA) h = fold(h, digest_int(y.v));
                for (const auto& y : v.yB) h = fold(h, digest_int(y.v));
                for (const auto& c : v.comA)
                    h = fold(fold(h, digest_int(c.u.v)), digest_int(c.v.v));
                for (const auto& c : v.comB)
                    h = fold(fold(h, digest_int(c.u.v)), digest_int(c.v.v));
            } else if constexpr (std::is_same_v<T, MsgSigmaCommit>) {
                for (const auto& br : v.a)
                    for (const auto& a : br) h = fold(h, digest_int(a.v));
            } else if constexpr (std::is_same_v<T, MsgSigmaChallenge>) {
                h = fold(h, digest_int(v.e.v));
            } else if constexpr (std::is_same_v<T, MsgSigmaResponse>) {
                h = fold(h, digest_int(v.t.e_total.v));
                for (const auto& br : v.t.branches) {
                    h = fold(h, digest_int(br.e.v));
                    for (const auto& z : br.z) h = fold(h, digest_int(z.v));
                    for (const auto& a : br.a) h = fold(h, digest_int(a.v));
                }
            } else if constexpr (std::is_same_v<T, MsgExtComCommit>) {
                for (const auto& p : v.pairs) {
                    h = fold(fold(h, digest_int(p[0].u.v)), digest_int(p[0].v.v));
                    h = fold(fold(h, digest_int(p[1].u.v)), digest_int(p[1].v.v));
                }
            } else if constexpr (std::is_same_v<T, MsgExtComChallenge>) {
                for (auto b : v.bits) h = fold(h, b);
            } else if constexpr (std::is_same_v<T, MsgExtComOpen>) {
                for (const auto& o : v.opened)
                    h = fold(fold(h, digest_int(o.m.v)), digest_int(o.r.v));
            } else if constexpr (std::is_same_v<T, MsgDecommit>) {
                h = fold(fold(h, digest_int(v.m.v)), digest_int(v.r.v));
            }
        },
        m);
    return h;
}

std::vector<uint8_t> bytes_of_u64(uint64_t h, uint8_t tag) {
    std::vector<uint8_t> out(9);
    out[0] = tag;
    for (int i = 0; i < 8; ++i) out[1 + i] = static_cast<uint8_t>(h >> (8 * i));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Schedules.

Schedule synchronous_schedule(const ProtoConfig& cfg) {
    Schedule s;
    auto script = session_script(cfg);
    for (unsigned r = 0; r < script.size(); ++r) {
        if (script[r].sender == 'R') {
            s.actions.push_back({SessionSide::Right, r});
            s.actions.push_back({SessionSide::Left, r});
        } else {
            s.actions.push_back({SessionSide::Left, r});
            s.actions.push_back({SessionSide::Right, r});
        }
    }
    return s;
}

Schedule random_schedule(const ProtoConfig& cfg, Rng& rng) {
    Schedule s;
    unsigned n = static_cast<unsigned>(session_script(cfg).size());
    unsigned left = 0, right = 0;
    while (left < n || right < n) {
        uint64_t remaining = (n - left) + (n - right);
        bool pick_left = left < n && (right >= n || rng.below(remaining) < (n - left));
        if (pick_left)
            s.actions.push_back({SessionSide::Left, left++});
        else
            s.actions.push_back({SessionSide::Right, right++});
    }
    return s;
}

Schedule skewed_schedule(const ProtoConfig& cfg, SessionSide first, unsigned lead) {
    Schedule s;
    unsigned n = static_cast<unsigned>(session_script(cfg).size());
    lead = std::min(lead, n);
    SessionSide other = first == SessionSide::Left ? SessionSide::Right : SessionSide::Left;
    for (unsigned r = 0; r < lead; ++r) s.actions.push_back({first, r});
    for (unsigned r = 0; r < n; ++r) s.actions.push_back({other, r});
    for (unsigned r = lead; r < n; ++r) s.actions.push_back({first, r});
    return s;
}

// ---------------------------------------------------------------------------

ValB val_b_from(const GroupParams& gp, const NaorTranscript& tau_tilde, bool b, Tag left,
                Tag right) {
    if (left.t == right.t) return ValB{ValB::BotTag, std::nullopt};
    if (!b) return ValB{ValB::Bot, std::nullopt};
    auto m = val_oracle(gp, tau_tilde);
    if (!m) return ValB{ValB::Bot, std::nullopt};
    return ValB{ValB::Message, m};
}

// ---------------------------------------------------------------------------
// MimGame.

MimGame::MimGame(const MimConfig& cfg, const Adversary& prototype,
                 const std::vector<uint8_t>& advice, const Schedule& schedule, Rng rng)
    : cfg_(cfg), schedule_(schedule) {
    ProtoConfig left_cfg = cfg.proto;
    left_cfg.tag = cfg.left_tag;
    ProtoConfig right_cfg = cfg.proto;
    right_cfg.tag = cfg.right_tag;
    left_c_ = PartyState(Role::Committer, left_cfg, cfg.m, rng.child("left-committer"));
    right_r_ = PartyState(Role::Receiver, right_cfg, std::nullopt, rng.child("right-receiver"));
    right_r_.set_wipok1_witness_index(cfg.right_wipok1_index);
    adv_ = prototype.clone();
    adv_->init(advice, cfg, rng.child("adversary"));
    absorb_emissions();
    pump_honest(SessionSide::Left);
    pump_honest(SessionSide::Right);
}

MimGame::MimGame(const MimGame& o)
    : cfg_(o.cfg_),
      schedule_(o.schedule_),
      cursor_(o.cursor_),
      left_c_(o.left_c_),
      right_r_(o.right_r_),
      adv_(o.adv_->clone()),
      left_pending_(o.left_pending_),
      right_pending_(o.right_pending_),
      adv_left_(o.adv_left_),
      adv_right_(o.adv_right_),
      left_dead_(o.left_dead_),
      right_dead_(o.right_dead_),
      infeasible_(o.infeasible_),
      leaked_(o.leaked_),
      trace_(o.trace_) {}

MimGame& MimGame::operator=(const MimGame& o) {
    if (this != &o) {
        MimGame tmp(o);
        *this = std::move(tmp);
    }
    return *this;
}

PartyState& MimGame::honest_party(SessionSide s) {
    return s == SessionSide::Left ? left_c_ : right_r_;
}

void MimGame::pump_honest(SessionSide side) {
    PartyState& p = honest_party(side);
    auto& pending = side == SessionSide::Left ? left_pending_ : right_pending_;
    while (auto msg = p.poll_send()) {
        pending.push_back(*msg);
        // the right receiver's puzzle preimages exist once it has produced the
        // puzzles message; that is when the planted leak fires
        if (side == SessionSide::Right && !leaked_ && cfg_.leak_right_preimage &&
            std::holds_alternative<MsgPuzzles>(pending.back())) {
            unsigned idx = *cfg_.leak_right_preimage;
            const auto& pre = right_r_.puzzle_a().preimages;
            if (idx >= 1 && idx <= pre.size()) {
                adv_->on_leak(idx, pre[idx - 1]);
                leaked_ = true;
                absorb_emissions();
            }
        }
    }
    if (p.decision() == Decision::Reject) {
        bool& dead = side == SessionSide::Left ? left_dead_ : right_dead_;
        if (!dead) {
            dead = true;
            adv_->notify_session_dead(side);
            absorb_emissions();
        }
    }
}

void MimGame::absorb_emissions() {
    for (auto& e : adv_->drain()) {
        if (std::holds_alternative<MsgAbort>(e.msg)) {
            bool& dead = e.session == SessionSide::Left ? left_dead_ : right_dead_;
            if (!dead) {
                dead = true;
                honest_party(e.session).deliver(e.msg);
            }
            continue;
        }
        (e.session == SessionSide::Left ? adv_left_ : adv_right_).push_back(std::move(e.msg));
    }
}

bool MimGame::step() {
    while (cursor_ < schedule_.actions.size()) {
        const ScheduleAction act = schedule_.actions[cursor_];
        bool dead = act.session == SessionSide::Left ? left_dead_ : right_dead_;
        if (dead) {  // aborted sessions fall silent
            ++cursor_;
            continue;
        }
        PartyState& honest = honest_party(act.session);
        const auto& script = honest.script();
        if (act.round >= script.size()) {
            ++cursor_;
            continue;
        }
        const Round& round = script[act.round];
        bool honest_sender = (act.session == SessionSide::Left && round.sender == 'C') ||
                             (act.session == SessionSide::Right && round.sender == 'R');
        auto& pending = act.session == SessionSide::Left ? left_pending_ : right_pending_;
        auto& from_adv = act.session == SessionSide::Left ? adv_left_ : adv_right_;

        TraceEvent ev{act.session, act.round, round.sender, round.label};
        if (honest_sender) {
            if (pending.empty()) {
                infeasible_ = true;
                return false;
            }
            ProtocolMessage msg = std::move(pending.front());
            pending.pop_front();
            ++cursor_;
            trace_.push_back(ev);
            adv_->observe(ev);
            adv_->on_message(act.session, msg);
            absorb_emissions();
        } else {
            if (from_adv.empty()) {
                infeasible_ = true;
                return false;
            }
            ProtocolMessage msg = std::move(from_adv.front());
            from_adv.pop_front();
            ++cursor_;
            trace_.push_back(ev);
            adv_->observe(ev);
            honest.deliver(msg);
            pump_honest(act.session);
        }
        return true;
    }
    return false;
}

void MimGame::run_to_completion() {
    while (step()) {
    }
}

bool MimGame::at_prefix() const {
    unsigned left_seen = 0, right_seen = 0;
    for (const auto& ev : trace_) {
        if (ev.session == SessionSide::Left && ev.round == 1) ++left_seen;
        if (ev.session == SessionSide::Right && ev.round == 1) ++right_seen;
    }
    return left_seen > 0 && right_seen > 0;
}

void MimGame::run_to_prefix() {
    while (!at_prefix() && step()) {
    }
}

bool MimGame::done() const { return cursor_ >= schedule_.actions.size() || infeasible_; }

std::optional<MimGame::NextAction> MimGame::peek_next() {
    while (cursor_ < schedule_.actions.size()) {
        const ScheduleAction act = schedule_.actions[cursor_];
        bool dead = act.session == SessionSide::Left ? left_dead_ : right_dead_;
        const auto& script = honest_party(act.session).script();
        if (dead || act.round >= script.size()) {
            ++cursor_;
            continue;
        }
        const Round& round = script[act.round];
        bool honest_sender = (act.session == SessionSide::Left && round.sender == 'C') ||
                             (act.session == SessionSide::Right && round.sender == 'R');
        return NextAction{act, round, honest_sender};
    }
    return std::nullopt;
}

const ProtocolMessage* MimGame::peek_adv(SessionSide s) const {
    const auto& q = s == SessionSide::Left ? adv_left_ : adv_right_;
    return q.empty() ? nullptr : &q.front();
}

const ProtocolMessage* MimGame::peek_honest(SessionSide s) const {
    const auto& q = s == SessionSide::Left ? left_pending_ : right_pending_;
    return q.empty() ? nullptr : &q.front();
}

MimOutcome MimGame::outcome() {
    MimOutcome out;
    out.trace = trace_;
    out.schedule_infeasible = infeasible_;
    out.out_m = adv_->finalize();
    out.b = right_r_.decision() == Decision::Accept;
    if (right_r_.context().basis && right_r_.context().com)
        out.tau_tilde = right_r_.naor_transcript();
    else
        out.b = false;
    if (left_c_.context().basis && left_c_.context().com) out.tau = left_c_.naor_transcript();
    out.val_b = val_b_from(cfg_.proto.params, out.tau_tilde, out.b, cfg_.left_tag, cfg_.right_tag);
    return out;
}

MimOutcome run_mim(const MimConfig& cfg, const Adversary& prototype,
                   const std::vector<uint8_t>& advice, const Schedule& schedule, Rng rng) {
    MimGame game(cfg, prototype, advice, schedule, rng);
    game.run_to_completion();
    return game.outcome();
}

Prefix Prefix::clone() const {
    Prefix p;
    p.game = std::make_unique<MimGame>(*game);
    p.tau = tau;
    p.tau_tilde = tau_tilde;
    return p;
}

Prefix prefix_gen(const MimConfig& cfg, const Adversary& prototype,
                  const std::vector<uint8_t>& advice, const Schedule& schedule, Rng rng) {
    Prefix p;
    p.game = std::make_unique<MimGame>(cfg, prototype, advice, schedule, rng);
    p.game->run_to_prefix();
    if (!p.game->infeasible()) {
        if (p.game->left_committer().context().com)
            p.tau = p.game->left_committer().naor_transcript();
        if (p.game->right_receiver().context().com)
            p.tau_tilde = p.game->right_receiver().naor_transcript();
    }
    return p;
}

MimOutcome resume_mim(Prefix p) {
    p.game->run_to_completion();
    return p.game->outcome();
}

// ---------------------------------------------------------------------------
// Built-in adversaries.

namespace {

// Runs an honest committer of its own message in the right session and an
// honest receiver in the left session; the two sessions are independent.
class HonestIndependent : public Adversary {
  public:
    explicit HonestIndependent(bool planted = false) : planted_(planted) {}

    std::unique_ptr<Adversary> clone() const override {
        return std::make_unique<HonestIndependent>(*this);
    }
    std::string name() const override {
        return planted_ ? "planted-trapdoor" : "honest-independent";
    }

    void init(const std::vector<uint8_t>& advice, const MimConfig& cfg, Rng rng) override {
        ProtoConfig left_cfg = cfg.proto;
        left_cfg.tag = cfg.left_tag;
        ProtoConfig right_cfg = cfg.proto;
        right_cfg.tag = cfg.right_tag;
        Scalar mt(Int(9) % cfg.proto.params.q);
        if (!advice.empty()) {
            std::string hex(advice.begin(), advice.end());
            mt = Scalar(Int(from_hex(hex) % cfg.proto.params.q));
        }
        m_tilde_ = mt;
        left_receiver_ = PartyState(Role::Receiver, left_cfg, std::nullopt, rng.child("lr"));
        right_committer_ = PartyState(Role::Committer, right_cfg, mt, rng.child("rc"));
        pump(SessionSide::Left);
        pump(SessionSide::Right);
    }

    void on_message(SessionSide side, const ProtocolMessage& msg) override {
        view_ = fold(view_, digest_msg(msg));
        auto& party = side == SessionSide::Left ? *left_receiver_ : *right_committer_;
        party.deliver(msg);
        pump(side);
    }

    void on_leak(unsigned index, const Scalar& preimage) override {
        if (!planted_ || !right_committer_) return;
        auto layout = wipok2_layout(right_committer_->config());
        right_committer_->set_wipok2_witness(witness_preimage(layout.a_begin, index, preimage));
    }

    std::vector<Emission> drain() override { return std::move(queue_); }

    std::vector<uint8_t> finalize() override { return bytes_of_u64(view_, 0x01); }

  protected:
    void pump(SessionSide side) {
        auto& party = side == SessionSide::Left ? *left_receiver_ : *right_committer_;
        while (auto m = party.poll_send()) {
            view_ = fold(view_, digest_msg(*m));
            queue_.push_back({side, std::move(*m)});
        }
    }

    bool planted_;
    std::optional<Scalar> m_tilde_;
    std::optional<PartyState> left_receiver_, right_committer_;
    std::vector<Emission> queue_;
    uint64_t view_ = 0x9ae16a3b2f90404fULL;
};

// Forwards right-session messages to the left and vice versa.
class Copier final : public Adversary {
  public:
    std::unique_ptr<Adversary> clone() const override { return std::make_unique<Copier>(*this); }
    std::string name() const override { return "copier"; }
    void init(const std::vector<uint8_t>&, const MimConfig&, Rng) override {}
    void on_message(SessionSide side, const ProtocolMessage& msg) override {
        view_ = fold(view_, digest_msg(msg));
        queue_.push_back({side == SessionSide::Left ? SessionSide::Right : SessionSide::Left, msg});
    }
    std::vector<Emission> drain() override { return std::move(queue_); }
    std::vector<uint8_t> finalize() override { return bytes_of_u64(view_, 0x02); }

  private:
    std::vector<Emission> queue_;
    uint64_t view_ = 0x2545f4914f6cdd1dULL;
};

class AbortAdversary final : public Adversary {
  public:
    std::unique_ptr<Adversary> clone() const override {
        return std::make_unique<AbortAdversary>(*this);
    }
    std::string name() const override { return "abort"; }
    void init(const std::vector<uint8_t>&, const MimConfig&, Rng) override {
        queue_.push_back({SessionSide::Left, MsgAbort{}});
        queue_.push_back({SessionSide::Right, MsgAbort{}});
    }
    void on_message(SessionSide, const ProtocolMessage&) override {}
    std::vector<Emission> drain() override { return std::move(queue_); }
    std::vector<uint8_t> finalize() override { return {0xAA}; }

  private:
    std::vector<Emission> queue_;
};

// Predetermined-class filter wrapper.
class FilterAdversary final : public Adversary {
  public:
    FilterAdversary(std::unique_ptr<Adversary> inner, TargetClass target, ProtoConfig cfg)
        : inner_(std::move(inner)), target_(target), cfg_(std::move(cfg)) {}
    FilterAdversary(const FilterAdversary& o)
        : inner_(o.inner_->clone()), target_(o.target_), cfg_(o.cfg_), seen_(o.seen_) {}

    std::unique_ptr<Adversary> clone() const override {
        return std::make_unique<FilterAdversary>(*this);
    }
    std::string name() const override { return "filter(" + inner_->name() + ")"; }
    void init(const std::vector<uint8_t>& advice, const MimConfig& cfg, Rng rng) override {
        inner_->init(advice, cfg, rng);
    }
    void on_message(SessionSide s, const ProtocolMessage& m) override { inner_->on_message(s, m); }
    void on_leak(unsigned i, const Scalar& x) override { inner_->on_leak(i, x); }
    void observe(const TraceEvent& ev) override {
        seen_.push_back(ev);
        inner_->observe(ev);
    }
    void notify_session_dead(SessionSide s) override { inner_->notify_session_dead(s); }
    std::vector<Emission> drain() override { return inner_->drain(); }
    std::vector<uint8_t> finalize() override {
        if (!trace_in_class(seen_, target_, cfg_)) return bot_output();
        return inner_->finalize();
    }

  private:
    std::unique_ptr<Adversary> inner_;
    TargetClass target_;
    ProtoConfig cfg_;
    Trace seen_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const std::string& name) {
    if (name == "honest-independent") return std::make_unique<HonestIndependent>(false);
    if (name == "planted-trapdoor") return std::make_unique<HonestIndependent>(true);
    if (name == "schedule") return std::make_unique<HonestIndependent>(false);
    if (name == "copier") return std::make_unique<Copier>();
    if (name == "abort") return std::make_unique<AbortAdversary>();
    throw std::runtime_error("unknown adversary: " + name);
}

std::unique_ptr<Adversary> schedule_filter_wrapper(std::unique_ptr<Adversary> inner,
                                                   TargetClass target, const ProtoConfig& cfg) {
    return std::make_unique<FilterAdversary>(std::move(inner), target, cfg);
}

// ---------------------------------------------------------------------------
// Schedule classification.

namespace {

std::optional<size_t> first_pos(const Trace& tr, SessionSide side, const std::string& label) {
    for (size_t i = 0; i < tr.size(); ++i)
        if (tr[i].session == side && tr[i].step == label) return i;
    return std::nullopt;
}

bool matches(const std::string& s, const std::string& prefix, const std::string& suffix) {
    return s.size() >= prefix.size() + suffix.size() && s.rfind(prefix, 0) == 0 &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<size_t> first_prefix_pos(const Trace& tr, SessionSide side,
                                       const std::string& prefix, const std::string& suffix) {
    for (size_t i = 0; i < tr.size(); ++i)
        if (tr[i].session == side && matches(tr[i].step, prefix, suffix)) return i;
    return std::nullopt;
}

std::optional<size_t> last_prefix_pos(const Trace& tr, SessionSide side,
                                      const std::string& prefix, const std::string& suffix) {
    std::optional<size_t> found;
    for (size_t i = 0; i < tr.size(); ++i)
        if (tr[i].session == side && matches(tr[i].step, prefix, suffix)) found = i;
    return found;
}

bool before(std::optional<size_t> a, std::optional<size_t> b) {
    return a.has_value() && b.has_value() && *a < *b;
}

}  // namespace

ScheduleClass classify_schedule(const Trace& tr) {
    using S = SessionSide;
    ScheduleClass c;
    auto right_step4 = first_pos(tr, S::Right, "puzzles");
    auto left_step2 = first_pos(tr, S::Left, "commit");
    auto left_step4 = first_pos(tr, S::Left, "puzzles");
    auto right_step2 = first_pos(tr, S::Right, "commit");
    auto right_w1a_start = first_prefix_pos(tr, S::Right, "wipok1a.", ".a");
    auto left_w1a_finish = last_prefix_pos(tr, S::Left, "wipok1a.", ".z");
    auto right_w1b_start = first_prefix_pos(tr, S::Right, "wipok1b.", ".a");
    auto left_w1b_finish = last_prefix_pos(tr, S::Left, "wipok1b.", ".z");
    auto right_w2_start = first_pos(tr, S::Right, "wipok2.a");

    c.bad[0] = before(right_step4, left_step2);
    c.bad[1] = before(left_step4, right_step2);
    c.bad[2] = before(right_w1a_start, left_step4);
    c.bad[3] = before(right_w1b_start, left_w1a_finish);
    c.bad[4] = before(right_w2_start, left_w1b_finish);
    return c;
}

namespace {

const char* slot_prefix(SlotFamily f) {
    switch (f) {
        case SlotFamily::ExtCom1: return "extcom1.";
        case SlotFamily::Wipok1A: return "wipok1a.";
        case SlotFamily::ExtCom2: return "extcom2.";
        case SlotFamily::Wipok1B: return "wipok1b.";
        case SlotFamily::ExtCom3: return "extcom3.";
    }
    return "";
}

}  // namespace

std::optional<unsigned> good_index(const Trace& tr, SessionSide slot_side, SlotFamily family,
                                   const WindowSpec& window) {
    auto wfirst = first_pos(tr, window.side, window.first_label);
    auto wlast = last_prefix_pos(tr, window.side, window.last_label, "");
    std::vector<size_t> wpos;
    if (wfirst && wlast) {
        bool in = false;
        for (size_t i = 0; i < tr.size(); ++i) {
            if (tr[i].session != window.side) continue;
            if (i == *wfirst) in = true;
            if (in) wpos.push_back(i);
            if (i == *wlast) break;
        }
    }
    std::string prefix = slot_prefix(family);
    for (unsigned rep = 1;; ++rep) {
        std::string rep_prefix = prefix + std::to_string(rep) + ".";
        auto first = first_prefix_pos(tr, slot_side, rep_prefix, "");
        auto last = last_prefix_pos(tr, slot_side, rep_prefix, "");
        if (!first) return std::nullopt;  // ran out of repetitions
        bool clean = true;
        for (size_t p : wpos)
            if (*first < p && p < *last) {
                clean = false;
                break;
            }
        if (clean) return rep;
    }
}

bool trace_in_class(const Trace& tr, TargetClass target, const ProtoConfig& cfg) {
    if (target == TargetClass::Synchronous) {
        Schedule sync = synchronous_schedule(cfg);
        if (tr.size() != sync.actions.size()) return false;
        for (size_t i = 0; i < tr.size(); ++i)
            if (tr[i].session != sync.actions[i].session || tr[i].round != sync.actions[i].round)
                return false;
        return true;
    }
    ScheduleClass c = classify_schedule(tr);
    switch (target) {
        case TargetClass::Good: return c.good();
        case TargetClass::Bad1: return c.bad[0];
        case TargetClass::Bad2: return c.bad[1];
        case TargetClass::Bad3: return c.bad[2];
        case TargetClass::Bad4: return c.bad[3];
        case TargetClass::Bad5: return c.bad[4];
        default: return false;
    }
}

}  // namespace nmcom
