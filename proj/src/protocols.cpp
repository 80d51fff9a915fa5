#include "nmcom/protocols.hpp"

#include <algorithm>

namespace nmcom {

std::string protocol_name(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::OneSided: return "one-sided";
        case ProtocolKind::TwoSlotSync: return "sync";
        case ProtocolKind::Async: return "async";
    }
    return "?";
}

ProtocolKind protocol_from_name(const std::string& s) {
    if (s == "one-sided") return ProtocolKind::OneSided;
    if (s == "sync") return ProtocolKind::TwoSlotSync;
    if (s == "async") return ProtocolKind::Async;
    throw ProtocolViolation("unknown protocol: " + s);
}

RepetitionConstants compute_constants(unsigned wipok_rounds, unsigned extcom_rounds) {
    if (wipok_rounds < 1 || extcom_rounds < 1)
        throw ProtocolViolation("round counts must be positive");
    RepetitionConstants c;
    c.faithful = true;
    unsigned steps_1_to_4 = 4 + wipok_rounds;  // beta, commit, trapgen+wipok-trap, puzzles
    c.n5 = std::max({steps_1_to_4, wipok_rounds, extcom_rounds}) + 1;
    unsigned cum = steps_1_to_4 + c.n5 * extcom_rounds;
    c.n6 = cum + 1;
    cum += c.n6 * wipok_rounds;
    c.n7 = cum + 1;
    cum += c.n7 * extcom_rounds;
    c.n8 = cum + 1;
    cum += c.n8 * wipok_rounds;
    c.n9 = cum + 1;
    return c;
}

RepetitionConstants lab_constants() { return RepetitionConstants{2, 2, 2, 2, 2, false}; }

unsigned async_round_total(const RepetitionConstants& c, unsigned wipok, unsigned extcom) {
    return 4 + wipok + c.n5 * extcom + c.n6 * wipok + c.n7 * extcom + c.n8 * wipok +
           c.n9 * extcom + wipok;
}

std::string message_type_name(const ProtocolMessage& m) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, MsgBeta>) return "beta";
            else if constexpr (std::is_same_v<T, MsgCommit>) return "commit";
            else if constexpr (std::is_same_v<T, MsgTrapGen>) return "trapgen";
            else if constexpr (std::is_same_v<T, MsgPuzzles>) return "puzzles";
            else if constexpr (std::is_same_v<T, MsgAck>) return "ack";
            else if constexpr (std::is_same_v<T, MsgSigmaCommit>) return "sigma.a";
            else if constexpr (std::is_same_v<T, MsgSigmaChallenge>) return "sigma.e";
            else if constexpr (std::is_same_v<T, MsgSigmaResponse>) return "sigma.z";
            else if constexpr (std::is_same_v<T, MsgExtComCommit>) return "extcom.coms";
            else if constexpr (std::is_same_v<T, MsgExtComChallenge>) return "extcom.ch";
            else if constexpr (std::is_same_v<T, MsgExtComOpen>) return "extcom.open";
            else if constexpr (std::is_same_v<T, MsgDecommit>) return "decommit";
            else return "abort";
        },
        m);
}

namespace {

void push_sigma(std::vector<Round>& s, const std::string& base, SigmaFamily fam, unsigned rep,
                char prover) {
    char verifier = prover == 'R' ? 'C' : 'R';
    s.push_back({base + ".a", prover, RoundKind::SigmaA, fam, EcFamily::Ec1, rep});
    s.push_back({base + ".e", verifier, RoundKind::SigmaE, fam, EcFamily::Ec1, rep});
    s.push_back({base + ".z", prover, RoundKind::SigmaZ, fam, EcFamily::Ec1, rep});
}

void push_extcom(std::vector<Round>& s, const std::string& base, EcFamily fam, unsigned rep) {
    s.push_back({base + ".coms", 'C', RoundKind::EcCommit, SigmaFamily::P1Wipok1, fam, rep});
    s.push_back({base + ".ch", 'R', RoundKind::EcChallenge, SigmaFamily::P1Wipok1, fam, rep});
    s.push_back({base + ".open", 'C', RoundKind::EcOpen, SigmaFamily::P1Wipok1, fam, rep});
}

}  // namespace

std::vector<Round> session_script(const ProtoConfig& cfg) {
    std::vector<Round> s;
    s.push_back({"beta", 'R', RoundKind::Beta, SigmaFamily::P1Wipok1, EcFamily::Ec1, 1});
    s.push_back({"commit", 'C', RoundKind::Commit, SigmaFamily::P1Wipok1, EcFamily::Ec1, 1});
    switch (cfg.kind) {
        case ProtocolKind::OneSided:
            s.push_back({"puzzles", 'R', RoundKind::Puzzles, SigmaFamily::P1Wipok1,
                         EcFamily::Ec1, 1});
            if (cfg.insert_ack)
                s.push_back({"ack", 'C', RoundKind::Ack, SigmaFamily::P1Wipok1, EcFamily::Ec1, 1});
            push_sigma(s, "wipok1.1", SigmaFamily::P1Wipok1, 1, 'R');
            push_sigma(s, "wipok2", SigmaFamily::Wipok2, 1, 'C');
            break;
        case ProtocolKind::TwoSlotSync:
            s.push_back({"puzzles", 'R', RoundKind::Puzzles, SigmaFamily::P1Wipok1,
                         EcFamily::Ec1, 1});
            if (cfg.insert_ack)
                s.push_back({"ack", 'C', RoundKind::Ack, SigmaFamily::P1Wipok1, EcFamily::Ec1, 1});
            push_sigma(s, "wipok1a.1", SigmaFamily::Wipok1A, 1, 'R');
            push_sigma(s, "wipok1b.1", SigmaFamily::Wipok1B, 1, 'R');
            push_sigma(s, "wipok2", SigmaFamily::Wipok2, 1, 'C');
            break;
        case ProtocolKind::Async: {
            s.push_back({"trapgen", 'R', RoundKind::TrapGen, SigmaFamily::P1Wipok1,
                         EcFamily::Ec1, 1});
            push_sigma(s, "wipok_trap", SigmaFamily::Trap, 1, 'R');
            s.push_back({"puzzles", 'R', RoundKind::Puzzles, SigmaFamily::P1Wipok1,
                         EcFamily::Ec1, 1});
            const auto& c = cfg.consts;
            for (unsigned i = 1; i <= c.n5; ++i)
                push_extcom(s, "extcom1." + std::to_string(i), EcFamily::Ec1, i);
            for (unsigned i = 1; i <= c.n6; ++i)
                push_sigma(s, "wipok1a." + std::to_string(i), SigmaFamily::Wipok1A, i, 'R');
            for (unsigned i = 1; i <= c.n7; ++i)
                push_extcom(s, "extcom2." + std::to_string(i), EcFamily::Ec2, i);
            for (unsigned i = 1; i <= c.n8; ++i)
                push_sigma(s, "wipok1b." + std::to_string(i), SigmaFamily::Wipok1B, i, 'R');
            for (unsigned i = 1; i <= c.n9; ++i)
                push_extcom(s, "extcom3." + std::to_string(i), EcFamily::Ec3, i);
            push_sigma(s, "wipok2", SigmaFamily::Wipok2, 1, 'C');
            break;
        }
    }
    return s;
}

Wipok2Layout wipok2_layout(const ProtoConfig& cfg) {
    Wipok2Layout l;
    unsigned t = cfg.tag.t, n = cfg.tag.space_n;
    l.opening = 0;
    l.a_begin = 1;
    switch (cfg.kind) {
        case ProtocolKind::OneSided:
            l.total = 1 + t;
            break;
        case ProtocolKind::TwoSlotSync:
            l.b_begin = 1 + t;
            l.total = 1 + n;
            break;
        case ProtocolKind::Async:
            l.b_begin = 1 + t;
            l.trap_begin = 1 + n;
            l.total = 1 + n + 2;
            break;
    }
    return l;
}

Statement build_language(LanguageId id, const SessionContext& c) {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw MissingContext(std::string("missing context: ") + what);
    };
    switch (id) {
        case LanguageId::P1Wipok1:
            need(!c.puzzA.ys.empty(), "puzzle set A");
            return Statement{OneOfTStmt{c.puzzA.ys}};
        case LanguageId::Wipok1A:
            need(!c.puzzA.ys.empty() && c.puzzA.coms.size() == c.puzzA.ys.size(), "puzzle set A");
            need(c.beta_prime.has_value(), "beta prime");
            return Statement{
                ConsistentPuzzleStmt{c.puzzA.ys, c.puzzA.coms, public_basis(*c.beta_prime)}};
        case LanguageId::Wipok1B:
            need(!c.puzzB.ys.empty() && c.puzzB.coms.size() == c.puzzB.ys.size(), "puzzle set B");
            need(c.beta_prime.has_value(), "beta prime");
            return Statement{
                ConsistentPuzzleStmt{c.puzzB.ys, c.puzzB.coms, public_basis(*c.beta_prime)}};
        case LanguageId::Trap:
            need(c.trap.has_value(), "trapdoor pair");
            return Statement{TrapOrStmt{c.trap->V0, c.trap->V1}};
        case LanguageId::Wipok2: {
            need(c.basis.has_value() && c.com.has_value(), "naor transcript");
            std::vector<Statement> parts;
            if (c.cfg.kind == ProtocolKind::Async) {
                need(!c.extcoms.empty(), "extcom transcripts");
                parts.push_back(Statement{OpeningWithExtComsStmt{*c.basis, *c.com, c.extcoms}});
            } else {
                parts.push_back(Statement{OpeningStmt{*c.basis, *c.com}});
            }
            need(!c.puzzA.ys.empty(), "puzzle set A");
            parts.push_back(Statement{OneOfTStmt{c.puzzA.ys}});
            if (c.cfg.kind != ProtocolKind::OneSided) {
                need(!c.puzzB.ys.empty(), "puzzle set B");
                parts.push_back(Statement{OneOfTStmt{c.puzzB.ys}});
            }
            if (c.cfg.kind == ProtocolKind::Async) {
                need(c.trap.has_value(), "trapdoor pair");
                parts.push_back(Statement{TrapOrStmt{c.trap->V0, c.trap->V1}});
            }
            return Statement{OrListStmt{parts}};
        }
    }
    throw MissingContext("bad language id");
}

// ---------------------------------------------------------------------------

PartyState::PartyState(Role role, const ProtoConfig& cfg, std::optional<Scalar> m, Rng rng)
    : role_(role), cfg_(cfg), rng_(rng), m_(m) {
    if (role == Role::Committer && !m_) throw ProtocolViolation("committer needs a message");
    if (cfg.tag.t < 1 || cfg.tag.t > cfg.tag.space_n) throw ProtocolViolation("tag out of range");
    if (cfg.kind != ProtocolKind::OneSided && cfg.tag.t >= cfg.tag.space_n)
        throw ProtocolViolation("two-slot protocols need t < n so slot B is nonempty");
    ctx_.cfg = cfg;
    script_ = session_script(cfg);
}

void PartyState::fail() {
    decision_ = Decision::Reject;
    cursor_ = script_.size();
}

bool PartyState::my_turn_to_send() const {
    if (decision_ == Decision::Reject || cursor_ >= script_.size()) return false;
    char me = role_ == Role::Committer ? 'C' : 'R';
    return script_[cursor_].sender == me;
}

LanguageId PartyState::language_of(SigmaFamily f) const {
    switch (f) {
        case SigmaFamily::P1Wipok1: return LanguageId::P1Wipok1;
        case SigmaFamily::Trap: return LanguageId::Trap;
        case SigmaFamily::Wipok1A: return LanguageId::Wipok1A;
        case SigmaFamily::Wipok1B: return LanguageId::Wipok1B;
        case SigmaFamily::Wipok2: return LanguageId::Wipok2;
    }
    throw ProtocolViolation("bad sigma family");
}

FlatOr PartyState::current_flat() const {
    return flatten(cfg_.params, build_language(language_of(script_[cursor_].sigma_family), ctx_));
}

Witness PartyState::current_witness(const FlatOr&) const {
    const auto& gp = cfg_.params;
    SigmaFamily fam = script_[cursor_].sigma_family;
    switch (fam) {
        case SigmaFamily::P1Wipok1: {
            unsigned i = wipok1_index_;
            if (i < 1 || i > puzzA_.preimages.size()) throw ProtocolViolation("witness index");
            return witness_preimage(0, i, puzzA_.preimages[i - 1]);
        }
        case SigmaFamily::Wipok1A: {
            unsigned i = wipok1_index_;
            if (i < 1 || i > puzzA_.preimages.size()) throw ProtocolViolation("witness index");
            return witness_preimage_with_com(0, i, puzzA_.preimages[i - 1],
                                             puzzA_.com_rands[i - 1]);
        }
        case SigmaFamily::Wipok1B:
            return witness_preimage_with_com(0, 1, puzzB_.preimages[0], puzzB_.com_rands[0]);
        case SigmaFamily::Trap:
            return witness_trapdoor(0, 0, *trap_->v0);
        case SigmaFamily::Wipok2: {
            if (wipok2_override_) return *wipok2_override_;
            if (cfg_.kind == ProtocolKind::Async) {
                std::vector<ExtComDecommit> decoms;
                decoms.reserve(ec_committers_.size());
                for (const auto& ec : ec_committers_) decoms.push_back(ec.decommit());
                return witness_opening_with_extcoms(gp, *m_, *r_, decoms);
            }
            return witness_opening(*m_, *r_);
        }
    }
    throw ProtocolViolation("bad sigma family");
}

ProtocolMessage PartyState::produce(const Round& round) {
    const auto& gp = cfg_.params;
    switch (round.kind) {
        case RoundKind::Beta: {
            basis_ = basis_gen(gp, rng_);
            ctx_.basis = public_basis(basis_->h);
            return MsgBeta{basis_->h};
        }
        case RoundKind::Commit: {
            r_ = rng_.scalar(gp);
            Commitment com = commit(gp, *basis_, *m_, *r_);
            ctx_.com = com;
            MsgCommit msg{com, std::nullopt};
            if (cfg_.kind != ProtocolKind::OneSided) {
                beta_prime_secret_ = rng_.scalar(gp);
                msg.beta_prime = f_eval(gp, *beta_prime_secret_);
                ctx_.beta_prime = msg.beta_prime;
            }
            return msg;
        }
        case RoundKind::TrapGen: {
            Scalar v0 = rng_.scalar(gp), v1 = rng_.scalar(gp);
            trap_ = TrapdoorPair{f_eval(gp, v0), f_eval(gp, v1), v0, v1};
            ctx_.trap = TrapdoorPair{trap_->V0, trap_->V1, std::nullopt, std::nullopt};
            return MsgTrapGen{trap_->V0, trap_->V1};
        }
        case RoundKind::Puzzles: {
            auto make = [&](PuzzleSet& ps, unsigned count) {
                ps = PuzzleSet{};
                for (unsigned i = 0; i < count; ++i) {
                    Scalar x = rng_.scalar(gp);
                    ps.preimages.push_back(x);
                    ps.ys.push_back(f_eval(gp, x));
                    if (cfg_.kind != ProtocolKind::OneSided) {
                        Scalar rr = rng_.scalar(gp);
                        ps.com_rands.push_back(rr);
                        ps.coms.push_back(commit(gp, public_basis(*ctx_.beta_prime), x, rr));
                    }
                }
            };
            make(puzzA_, cfg_.tag.t);
            MsgPuzzles msg{puzzA_.ys, puzzA_.coms, {}, {}};
            if (cfg_.kind != ProtocolKind::OneSided) {
                make(puzzB_, cfg_.tag.space_n - cfg_.tag.t);
                msg.yB = puzzB_.ys;
                msg.comB = puzzB_.coms;
            }
            ctx_.puzzA = PuzzleSet{puzzA_.ys, {}, puzzA_.coms, {}};
            ctx_.puzzB = PuzzleSet{puzzB_.ys, {}, puzzB_.coms, {}};
            return msg;
        }
        case RoundKind::Ack:
            return MsgAck{};
        case RoundKind::SigmaA: {
            FlatOr f = current_flat();
            sigma_prover_ = SigmaProver::start(gp, f, current_witness(f), rng_);
            return MsgSigmaCommit{sigma_prover_->first_message()};
        }
        case RoundKind::SigmaE: {
            sigma_challenge_ = rng_.scalar(gp);
            return MsgSigmaChallenge{*sigma_challenge_};
        }
        case RoundKind::SigmaZ:
            return MsgSigmaResponse{sigma_prover_->respond(gp, *sigma_challenge_)};
        case RoundKind::EcCommit: {
            ec_committers_.push_back(
                ExtComCommitter::create(gp, *ctx_.basis, *m_, cfg_.n_pairs, rng_));
            ExtComTranscript t;
            t.basis = *ctx_.basis;
            t.n_pairs = cfg_.n_pairs;
            t.pair_coms = ec_committers_.back().coms;
            ctx_.extcoms.push_back(t);
            return MsgExtComCommit{ec_committers_.back().coms};
        }
        case RoundKind::EcChallenge: {
            auto bits = extcom_challenge(cfg_.n_pairs, rng_);
            ctx_.extcoms.back().challenge = bits;
            return MsgExtComChallenge{bits};
        }
        case RoundKind::EcOpen: {
            auto opened = ec_committers_.back().respond(ctx_.extcoms.back().challenge);
            ctx_.extcoms.back().opened = opened;
            ctx_.extcoms.back().accepted = true;
            return MsgExtComOpen{opened};
        }
    }
    throw ProtocolViolation("bad round kind");
}

void PartyState::consume(const Round& round, const ProtocolMessage& msg) {
    const auto& gp = cfg_.params;
    switch (round.kind) {
        case RoundKind::Beta: {
            const auto& m = std::get<MsgBeta>(msg);
            if (!in_subgroup(gp, m.h)) return fail();
            basis_ = public_basis(m.h);
            ctx_.basis = *basis_;
            return;
        }
        case RoundKind::Commit: {
            const auto& m = std::get<MsgCommit>(msg);
            if (!in_subgroup(gp, m.com.u) || !in_subgroup(gp, m.com.v)) return fail();
            bool want_bp = cfg_.kind != ProtocolKind::OneSided;
            if (want_bp != m.beta_prime.has_value()) return fail();
            if (m.beta_prime && !in_subgroup(gp, *m.beta_prime)) return fail();
            ctx_.com = m.com;
            ctx_.beta_prime = m.beta_prime;
            return;
        }
        case RoundKind::TrapGen: {
            const auto& m = std::get<MsgTrapGen>(msg);
            if (!in_subgroup(gp, m.V0) || !in_subgroup(gp, m.V1)) return fail();
            trap_ = TrapdoorPair{m.V0, m.V1, std::nullopt, std::nullopt};
            ctx_.trap = trap_;
            return;
        }
        case RoundKind::Puzzles: {
            const auto& m = std::get<MsgPuzzles>(msg);
            unsigned t = cfg_.tag.t, nb = cfg_.tag.space_n - cfg_.tag.t;
            bool with_coms = cfg_.kind != ProtocolKind::OneSided;
            if (m.yA.size() != t) return fail();
            if (with_coms && (m.comA.size() != t || m.yB.size() != nb || m.comB.size() != nb))
                return fail();
            if (!with_coms && (!m.comA.empty() || !m.yB.empty() || !m.comB.empty()))
                return fail();
            auto els_ok = [&](const std::vector<GroupElement>& els) {
                for (const auto& e : els)
                    if (!in_subgroup(gp, e)) return false;
                return true;
            };
            auto coms_ok = [&](const std::vector<Commitment>& cs) {
                for (const auto& cm : cs)
                    if (!in_subgroup(gp, cm.u) || !in_subgroup(gp, cm.v)) return false;
                return true;
            };
            if (!els_ok(m.yA) || !els_ok(m.yB) || !coms_ok(m.comA) || !coms_ok(m.comB))
                return fail();
            puzzA_ = PuzzleSet{m.yA, {}, m.comA, {}};
            puzzB_ = PuzzleSet{m.yB, {}, m.comB, {}};
            ctx_.puzzA = puzzA_;
            ctx_.puzzB = puzzB_;
            return;
        }
        case RoundKind::Ack:
            std::get<MsgAck>(msg);
            return;
        case RoundKind::SigmaA: {
            sigma_first_ = std::get<MsgSigmaCommit>(msg);
            return;
        }
        case RoundKind::SigmaE: {
            const auto& m = std::get<MsgSigmaChallenge>(msg);
            if (m.e.v < 0 || m.e.v >= gp.q) return fail();
            sigma_challenge_ = m.e;
            return;
        }
        case RoundKind::SigmaZ: {
            const auto& m = std::get<MsgSigmaResponse>(msg);
            if (!sigma_first_ || !sigma_challenge_) return fail();
            if (!(m.t.e_total == *sigma_challenge_)) return fail();
            if (m.t.branches.size() != sigma_first_->a.size()) return fail();
            for (size_t j = 0; j < m.t.branches.size(); ++j)
                if (m.t.branches[j].a != sigma_first_->a[j]) return fail();
            if (!verify_transcript(gp, current_flat(), m.t)) return fail();
            sigma_first_.reset();
            sigma_challenge_.reset();
            return;
        }
        case RoundKind::EcCommit: {
            const auto& m = std::get<MsgExtComCommit>(msg);
            if (m.pairs.size() != cfg_.n_pairs) return fail();
            ExtComTranscript t;
            t.basis = *ctx_.basis;
            t.n_pairs = cfg_.n_pairs;
            t.pair_coms = m.pairs;
            ctx_.extcoms.push_back(t);
            return;
        }
        case RoundKind::EcChallenge: {
            const auto& m = std::get<MsgExtComChallenge>(msg);
            if (m.bits.size() != cfg_.n_pairs) return fail();
            ctx_.extcoms.back().challenge = m.bits;
            return;
        }
        case RoundKind::EcOpen: {
            const auto& m = std::get<MsgExtComOpen>(msg);
            auto& t = ctx_.extcoms.back();
            if (!extcom_check_opening(gp, t.basis, t.pair_coms, t.challenge, m.opened))
                return fail();
            t.opened = m.opened;
            t.accepted = true;
            return;
        }
    }
    fail();
}

std::optional<ProtocolMessage> PartyState::poll_send() {
    if (!my_turn_to_send()) return std::nullopt;
    const Round& round = script_[cursor_];
    ProtocolMessage msg = produce(round);
    if (decision_ == Decision::Reject) return std::nullopt;
    ++cursor_;
    if (cursor_ >= script_.size() && decision_ == Decision::Pending) decision_ = Decision::Accept;
    return msg;
}

void PartyState::deliver(const ProtocolMessage& msg) {
    if (std::holds_alternative<MsgAbort>(msg)) return fail();
    if (decision_ == Decision::Reject || cursor_ >= script_.size() || my_turn_to_send())
        return fail();
    const Round& round = script_[cursor_];
    try {
        consume(round, msg);
    } catch (const std::exception&) {
        return fail();
    }
    if (decision_ == Decision::Reject) return;
    ++cursor_;
    if (cursor_ >= script_.size() && decision_ == Decision::Pending) decision_ = Decision::Accept;
}

MsgDecommit PartyState::decommit_message() const {
    if (role_ != Role::Committer || !m_ || !r_) throw ProtocolViolation("nothing to decommit");
    return MsgDecommit{*m_, *r_};
}

bool PartyState::verify_decommit(const MsgDecommit& d) const {
    // a receiver that rejected the commit stage rejects the decommit stage too
    if (role_ != Role::Receiver || decision_ != Decision::Accept) return false;
    if (!basis_ || !ctx_.com) return false;
    return verify_open(cfg_.params, *basis_, *ctx_.com, Opening{d.m, d.r});
}

NaorTranscript PartyState::naor_transcript() const {
    if (!ctx_.basis || !ctx_.com) throw ProtocolViolation("naor transcript incomplete");
    NaorTranscript t;
    t.basis = (role_ == Role::Receiver && basis_) ? *basis_ : *ctx_.basis;
    t.com = *ctx_.com;
    if (role_ == Role::Committer && m_ && r_) t.instrumentation = Opening{*m_, *r_};
    return t;
}

std::optional<Opening> PartyState::opening() const {
    if (!m_ || !r_) return std::nullopt;
    return Opening{*m_, *r_};
}

// ---------------------------------------------------------------------------

SessionResult run_honest_session(const ProtoConfig& cfg, const Scalar& m, Rng& rng,
                                 bool capture_extcom_snapshots) {
    PartyState committer(Role::Committer, cfg, m, rng.child("committer"));
    PartyState receiver(Role::Receiver, cfg, std::nullopt, rng.child("receiver"));
    SessionResult res;
    unsigned round = 0;
    while (true) {
        if (auto msg = committer.poll_send()) {
            res.trace.push_back(
                {"standalone", round++, 'C', committer.script()[committer.cursor() - 1].label});
            receiver.deliver(*msg);
            continue;
        }
        if (auto msg = receiver.poll_send()) {
            const Round& r = receiver.script()[receiver.cursor() - 1];
            res.trace.push_back({"standalone", round++, 'R', r.label});
            if (capture_extcom_snapshots && r.kind == RoundKind::EcChallenge)
                res.extcom_snapshots.emplace_back(r.label, committer);
            committer.deliver(*msg);
            continue;
        }
        break;
    }
    res.commit_decision = receiver.decision();
    res.transcript = receiver.naor_transcript();
    if (auto op = committer.opening()) res.transcript.instrumentation = op;
    if (res.commit_decision == Decision::Accept) {
        res.decommit = committer.decommit_message();
        res.decommit_decision =
            receiver.verify_decommit(res.decommit) ? Decision::Accept : Decision::Reject;
    } else {
        res.decommit_decision = Decision::Reject;
    }
    return res;
}

bool decommit_verify(const GroupParams& gp, const NaorTranscript& t, const Scalar& m,
                     const Scalar& r) {
    return verify_open(gp, t.basis, t.com, Opening{m, r});
}

namespace {

class PartyEcShim final : public ExtComCommitterShim {
  public:
    PartyEcShim(const PartyState& st, std::vector<std::array<Commitment, 2>> pairs)
        : state_(st), pairs_(std::move(pairs)) {}

    std::unique_ptr<ExtComCommitterShim> clone() const override {
        return std::make_unique<PartyEcShim>(*this);
    }
    std::optional<std::vector<std::array<Commitment, 2>>> first() override { return pairs_; }
    std::optional<std::vector<Opening>> respond(const std::vector<uint8_t>& ch) override {
        state_.deliver(ProtocolMessage{MsgExtComChallenge{ch}});
        auto msg = state_.poll_send();
        if (!msg || !std::holds_alternative<MsgExtComOpen>(*msg)) return std::nullopt;
        return std::get<MsgExtComOpen>(*msg).opened;
    }

  private:
    PartyState state_;
    std::vector<std::array<Commitment, 2>> pairs_;
};

}  // namespace

std::unique_ptr<ExtComCommitterShim> party_extcom_shim(
    const PartyState& paused, const std::vector<std::array<Commitment, 2>>& pairs) {
    return std::make_unique<PartyEcShim>(paused, pairs);
}

}  // namespace nmcom
