#include "nmcom/extraction.hpp"

#include <cmath>

namespace nmcom {

double epsilon_prime(double epsilon, unsigned t) {
    return epsilon / (10.0 * static_cast<double>(t) * static_cast<double>(t));
}

uint64_t se_loop_bound(const ExtractionParams& p) {
    double ep = epsilon_prime(p.epsilon, p.t);
    uint64_t faithful =
        static_cast<uint64_t>(std::ceil(static_cast<double>(p.t_tilde) / ep * p.lambda));
    if (p.rewind_cap && *p.rewind_cap < faithful) return *p.rewind_cap;
    return faithful;
}

SeInput se_input_from(const Prefix& pref) {
    SeInput s;
    s.pref = pref.clone();
    // scrub the left committer's secrets: the machines run the remainder
    // without st_C
    PartyState& c = s.pref.game->left_committer();
    c.m_ = Scalar(0ul);
    c.r_ = Scalar(0ul);
    c.beta_prime_secret_.reset();
    c.ec_committers_.clear();
    return s;
}

namespace {

// Pause the game right before the (side, label) action; false when the game
// finishes without reaching it.
bool advance_until(MimGame& g, SessionSide side, const std::string& label) {
    while (auto na = g.peek_next()) {
        if (na->action.session == side && na->round.label == label) return true;
        if (!g.step()) return false;
    }
    return false;
}

// Execute through the (side, zlabel) action, capturing the sigma response
// delivered there. nullopt when the action never executes (dead session).
std::optional<SigmaTranscript> step_through_response(MimGame& g, SessionSide side,
                                                     const std::string& zlabel) {
    while (auto na = g.peek_next()) {
        bool is_z = na->action.session == side && na->round.label == zlabel;
        std::optional<SigmaTranscript> captured;
        if (is_z) {
            const ProtocolMessage* pm = g.peek_adv(side);
            if (pm && std::holds_alternative<MsgSigmaResponse>(*pm))
                captured = std::get<MsgSigmaResponse>(*pm).t;
        }
        if (!g.step()) return std::nullopt;
        if (is_z) return captured;
    }
    return std::nullopt;
}

struct GameWee {
    bool ran = false;         // the proof was reached at all
    bool accepted = false;    // main-thread verifier accepted
    std::optional<Witness> witness;
    bool exhausted = false;
    std::optional<SigmaTranscript> main_t;
};

// Witness-extended emulation over a sub-proof of the game. The snapshot point
// is just before the prover's first message is delivered, so rewound clones
// re-derive the verifier challenge from a reseeded rng while the first
// message stays fixed.
GameWee wee_over_game(MimGame& game, SessionSide side, const std::string& base,
                      bool reseed_left, const FlatOr& stmt, Rng& rewind_rng, uint64_t budget) {
    GameWee res;
    if (!advance_until(game, side, base + ".a")) return res;
    res.ran = true;
    MimGame snapshot(game);
    res.main_t = step_through_response(game, side, base + ".z");
    bool alive = !game.session_dead(side);
    res.accepted = res.main_t.has_value() && alive;
    if (!res.accepted) return res;

    for (uint64_t k = 0; k < budget; ++k) {
        MimGame clone(snapshot);
        if (reseed_left)
            clone.left_committer().reseed(rewind_rng.child(k));
        else
            clone.right_receiver().reseed(rewind_rng.child(k));
        auto t2 = step_through_response(clone, side, base + ".z");
        if (!t2 || clone.session_dead(side)) continue;
        if (t2->e_total == res.main_t->e_total) continue;
        try {
            res.witness = special_sound_extract(clone.config().proto.params, stmt, *res.main_t,
                                                *t2);
            return res;
        } catch (const MalformedInput&) {
            continue;
        }
    }
    res.exhausted = true;
    return res;
}

struct MachineSetup {
    MimGame game;

    MachineSetup(const SeInput& in, unsigned i, Rng& rng) : game(*in.pref.game) {
        if (game.config().proto.kind != ProtocolKind::OneSided)
            throw std::runtime_error("extraction machines run the one-sided protocol");
        game.left_committer().reseed(rng.child("left-committer"));
        game.right_receiver().reseed(rng.child("right-receiver"));
        game.right_receiver().set_wipok1_witness_index(i);
    }
};

// Remaps a witness for the left WIPoK-1 statement (pure OneOfT) onto the
// corresponding preimage branch of the left WIPoK-2 statement.
Witness remap_to_wipok2(const Witness& w1, const FlatOr& wipok1_stmt, const ProtoConfig& cfg) {
    auto layout = wipok2_layout(cfg);
    const BranchMeta& meta = wipok1_stmt.meta[w1.branch];
    return Witness{layout.a_begin + meta.index - 1, w1.w};
}

std::optional<unsigned> left_index_of(const FlatOr& stmt, const std::optional<Witness>& w) {
    if (!w) return std::nullopt;
    return static_cast<unsigned>(stmt.meta[w->branch].index);
}

// The common first phase of G_i / K_i and the lab machines: run the remainder
// up to the end of the left WIPoK-1, optionally via the emulator.
struct LeftPhase {
    GameWee wee;
    FlatOr wipok1_stmt;
    bool reached_wipok2_point = false;  // left session alive after WIPoK-1
};

LeftPhase left_phase_with_wee(MimGame& game, Rng& rng, uint64_t budget) {
    LeftPhase ph;
    if (!advance_until(game, SessionSide::Left, "wipok1.1.a")) return ph;
    ph.wipok1_stmt = flatten(game.config().proto.params,
                             build_language(LanguageId::P1Wipok1,
                                            game.left_committer().context()));
    Rng rewind = rng.child("wee1");
    ph.wee = wee_over_game(game, SessionSide::Left, "wipok1.1", true, ph.wipok1_stmt, rewind,
                           budget);
    ph.reached_wipok2_point = ph.wee.accepted;
    return ph;
}

LeftPhase left_phase_honest(MimGame& game) {
    LeftPhase ph;
    if (!advance_until(game, SessionSide::Left, "wipok1.1.a")) return ph;
    ph.wipok1_stmt = flatten(game.config().proto.params,
                             build_language(LanguageId::P1Wipok1,
                                            game.left_committer().context()));
    ph.wee.ran = true;
    ph.wee.main_t = step_through_response(game, SessionSide::Left, "wipok1.1.z");
    ph.wee.accepted = ph.wee.main_t.has_value() && !game.session_dead(SessionSide::Left);
    ph.reached_wipok2_point = ph.wee.accepted;
    return ph;
}

ExtractionResult classify_right_witness(const MimGame& game, const GameWee& wee) {
    ExtractionResult res;
    res.right_accepted = wee.accepted && game.right_receiver().decision() == Decision::Accept;
    res.wee_exhausted = wee.exhausted;
    if (!res.right_accepted || !wee.witness) return res;
    FlatOr stmt = flatten(game.config().proto.params,
                          build_language(LanguageId::Wipok2, game.right_receiver().context()));
    const Witness& w = *wee.witness;
    if (w.branch >= stmt.meta.size() || !witness_satisfies(game.config().proto.params, stmt, w))
        return res;
    switch (stmt.meta[w.branch].kind) {
        case BranchKind::Opening:
            res.kind = ExtractionResult::Message;
            res.m = w.w[1];  // opening witness is (r, m); the randomness is dropped
            break;
        case BranchKind::Preimage:
            res.kind = ExtractionResult::BotY;
            res.preimage_index = static_cast<unsigned>(stmt.meta[w.branch].index);
            break;
        default:
            break;
    }
    return res;
}

}  // namespace

GOutcome run_G(unsigned i, const SeInput& in, const ExtractionParams& params, Rng rng) {
    MachineSetup setup(in, i, rng);
    MimGame& game = setup.game;
    GOutcome out;

    LeftPhase ph = left_phase_with_wee(game, rng, params.wee_budget);
    out.left_wipok1_ran = ph.wee.ran;
    out.left_wipok1_accepted = ph.wee.accepted;
    out.wee_exhausted = ph.wee.exhausted;

    if (ph.wee.accepted) {
        bool valid = ph.wee.witness &&
                     witness_satisfies(game.config().proto.params, ph.wipok1_stmt,
                                       *ph.wee.witness);
        if (!valid) {
            // accepted left WIPoK-1 but no witness in hand: abort with (bot, bot)
            out.invalid_witness_abort = true;
            out.out = bot_output();
            out.b = false;
            return out;
        }
        game.left_committer().set_wipok2_witness(
            remap_to_wipok2(*ph.wee.witness, ph.wipok1_stmt, game.left_committer().config()));
    }
    // left rejection just means the left session fell silent; the right
    // session still runs to completion
    game.run_to_completion();
    auto oc = game.outcome();
    out.out = oc.out_m;
    out.b = oc.b;
    return out;
}

namespace {

ExtractionResult finish_right_with_wee(MimGame& game, Rng& rng, const ExtractionParams& params,
                                       const LeftPhase& ph) {
    FlatOr right_stmt;
    GameWee wee2;
    if (advance_until(game, SessionSide::Right, "wipok2.a")) {
        right_stmt = flatten(game.config().proto.params,
                             build_language(LanguageId::Wipok2, game.right_receiver().context()));
        Rng rewind = rng.child("wee2");
        wee2 = wee_over_game(game, SessionSide::Right, "wipok2", false, right_stmt, rewind,
                             params.wee_budget);
    }
    game.run_to_completion();
    ExtractionResult res = classify_right_witness(game, wee2);
    res.extracted_left_index = left_index_of(ph.wipok1_stmt, ph.wee.witness);
    return res;
}

}  // namespace

ExtractionResult run_K_i(unsigned i, const SeInput& in, const ExtractionParams& params, Rng rng) {
    MachineSetup setup(in, i, rng);
    MimGame& game = setup.game;

    LeftPhase ph = left_phase_with_wee(game, rng, params.wee_budget);
    if (ph.wee.accepted) {
        bool valid = ph.wee.witness &&
                     witness_satisfies(game.config().proto.params, ph.wipok1_stmt,
                                       *ph.wee.witness);
        if (!valid) {
            ExtractionResult res;
            res.wee_exhausted = ph.wee.exhausted;
            return res;  // BotInvalid
        }
        game.left_committer().set_wipok2_witness(
            remap_to_wipok2(*ph.wee.witness, ph.wipok1_stmt, game.left_committer().config()));
    }
    return finish_right_with_wee(game, rng, params, ph);
}

ExtractionResult run_K(const SeInput& in, const ExtractionParams& params, Rng rng) {
    unsigned i = 1 + static_cast<unsigned>(rng.child("index").below(params.t_tilde));
    return run_K_i(i, in, params, rng.child("machine"));
}

SeOutcome run_SE(const SeInput& in, const ExtractionParams& params, Rng rng) {
    SeOutcome out;
    // Stage 1: main-thread simulation via G_1
    GOutcome g = run_G(1, in, params, rng.child("main"));
    out.out = g.out;
    out.b = g.b;
    if (!out.b) return out;  // val stays bot, zero rewinds

    // Stage 2: rewinding loop
    ExtractionParams uncapped = params;
    uncapped.rewind_cap.reset();
    uint64_t bound = se_loop_bound(params);
    out.capped = params.rewind_cap && bound < se_loop_bound(uncapped);
    Rng loop_rng = rng.child("loop");
    for (uint64_t k = 0; k < bound; ++k) {
        ++out.k_calls;
        ExtractionResult r = run_K(in, params, loop_rng.child(k));
        if (r.kind == ExtractionResult::Message) {
            out.val = r.m;
            return out;
        }
    }
    // Stage 3: loop exhausted without extracting
    return out;
}

HybridGOutcome run_hybrid_G(const MimConfig& cfg, const Adversary& prototype,
                            const std::vector<uint8_t>& advice, const Schedule& schedule,
                            const ExtractionParams& params, Rng rng) {
    Prefix pref = prefix_gen(cfg, prototype, advice, schedule, rng.child("pre"));
    SeInput in = se_input_from(pref);
    ExtractionParams p = params;
    p.t = cfg.left_tag.t;
    p.t_tilde = cfg.right_tag.t;
    SeOutcome se = run_SE(in, p, rng.child("se"));
    HybridGOutcome out;
    out.out = se.out;
    if (cfg.left_tag.t == cfg.right_tag.t)
        out.val = ValB{ValB::BotTag, std::nullopt};
    else if (!se.b || !se.val)
        out.val = ValB{ValB::Bot, std::nullopt};
    else
        out.val = ValB{ValB::Message, se.val};
    return out;
}

// ---------------------------------------------------------------------------
// Hybrid-lab machines.

LabOutcome run_hybrid_lab(LabMachine machine, unsigned i, const SeInput& in,
                          const ExtractionParams& params, Rng rng, const LabOptions& opts) {
    MachineSetup setup(in, i, rng);
    MimGame& game = setup.game;
    const GroupParams& gp = game.config().proto.params;
    LabOutcome out;

    // run to the left puzzle message and recover the preimages by brute force
    std::vector<std::pair<unsigned, Scalar>> good;
    if (advance_until(game, SessionSide::Left, "puzzles")) {
        const ProtocolMessage* pm = game.peek_adv(SessionSide::Left);
        if (pm && std::holds_alternative<MsgPuzzles>(*pm)) {
            const auto& ys = std::get<MsgPuzzles>(*pm).yA;
            for (unsigned idx = 0; idx < ys.size(); ++idx)
                if (auto x = dlog_bruteforce(gp, ys[idx])) good.emplace_back(idx + 1, *x);
        }
    }
    if (good.empty()) {
        out.brute_force_failed = true;
        out.out = bot_output();
        return out;
    }
    // pick (s, x_s) uniformly among the recoverable preimages
    size_t pick = rng.child("guess").below(good.size());
    if (opts.force_guess_index) {
        for (size_t k = 0; k < good.size(); ++k)
            if (good[k].first == *opts.force_guess_index) pick = k;
    }
    out.guess_index = good[pick].first;
    auto layout = wipok2_layout(game.left_committer().config());
    Witness guess{layout.a_begin + good[pick].first - 1, {good[pick].second}};

    bool use_left_wee = machine == LabMachine::Kp || machine == LabMachine::Kstar1;
    LeftPhase ph =
        use_left_wee ? left_phase_with_wee(game, rng, params.wee_budget) : left_phase_honest(game);
    out.extracted_left_index = left_index_of(ph.wipok1_stmt, ph.wee.witness);

    if (ph.wee.accepted) {
        bool extracted_valid = ph.wee.witness &&
                               witness_satisfies(gp, ph.wipok1_stmt, *ph.wee.witness);
        if (use_left_wee && !extracted_valid) {
            // K'_i keeps K_i's abort; K*_1 aborts when the preimage is invalid
            out.aborted_invalid = true;
            out.out = bot_output();
            out.b = false;
            return out;
        }
        game.left_committer().set_wipok2_witness(guess);
    }

    if (machine == LabMachine::Kp || machine == LabMachine::Kpp) {
        out.result = finish_right_with_wee(game, rng, params, ph);
        out.result.extracted_left_index = out.extracted_left_index;
        out.b = out.result.right_accepted;
    } else {
        game.run_to_completion();
        auto oc = game.outcome();
        out.out = oc.out_m;
        out.b = oc.b;
    }
    return out;
}

// ---------------------------------------------------------------------------

ExtractionReport estimate_p(const SeInput& in, const std::string& machine, unsigned index,
                            const ExtractionParams& params, unsigned trials, Rng rng) {
    ExtractionReport rep;
    rep.trials = trials;
    for (unsigned k = 0; k < trials; ++k) {
        Rng trial = rng.child(k);
        if (machine == "G") {
            auto g = run_G(index, in, params, trial);
            if (g.b) ++rep.accepts;
            if (g.wee_exhausted) ++rep.wee_exhausted;
        } else {
            ExtractionResult r;
            if (machine == "K") {
                r = run_K(in, params, trial);
            } else if (machine == "Ki") {
                r = run_K_i(index, in, params, trial);
            } else if (machine == "Kp" || machine == "Kpp") {
                auto lab = run_hybrid_lab(machine == "Kp" ? LabMachine::Kp : LabMachine::Kpp,
                                          index, in, params, trial);
                r = lab.result;
            } else if (machine == "Kstar1" || machine == "Kstarstar1") {
                auto lab = run_hybrid_lab(
                    machine == "Kstar1" ? LabMachine::Kstar1 : LabMachine::Kstarstar1, index, in,
                    params, trial);
                if (lab.b) ++rep.accepts;
                continue;
            } else {
                throw std::runtime_error("unknown machine: " + machine);
            }
            if (r.right_accepted) ++rep.accepts;
            if (r.wee_exhausted) ++rep.wee_exhausted;
            switch (r.kind) {
                case ExtractionResult::Message: ++rep.message; break;
                case ExtractionResult::BotY: ++rep.boty; break;
                case ExtractionResult::BotInvalid: ++rep.botinvalid; break;
            }
        }
    }
    rep.p_hat = trials ? static_cast<double>(rep.accepts) / trials : 0.0;
    rep.interval = wilson(rep.accepts, rep.trials);
    return rep;
}

}  // namespace nmcom
