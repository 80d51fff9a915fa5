#include "nmcom/commitments.hpp"

namespace nmcom {

ReceiverBasis basis_gen(const GroupParams& gp, Rng& rng) {
    return basis_from_secret(gp, rng.scalar(gp));
}

ReceiverBasis basis_from_secret(const GroupParams& gp, const Scalar& s) {
    return ReceiverBasis{f_eval(gp, s), s};
}

Commitment commit(const GroupParams& gp, const ReceiverBasis& b, const Scalar& m, const Scalar& r) {
    GroupElement u = f_eval(gp, r);
    GroupElement v = g_mul(gp, g_pow(gp, b.h, r), f_eval(gp, m));
    return Commitment{u, v};
}

bool verify_open(const GroupParams& gp, const ReceiverBasis& b, const Commitment& c,
                 const Opening& o) {
    if (!in_subgroup(gp, c.u) || !in_subgroup(gp, c.v) || !in_subgroup(gp, b.h)) return false;
    if (o.m.v < 0 || o.m.v >= gp.q || o.r.v < 0 || o.r.v >= gp.q) return false;
    return c == commit(gp, b, o.m, o.r);
}

std::optional<Scalar> val_oracle(const GroupParams& gp, const NaorTranscript& t) {
    if (!in_subgroup(gp, t.basis.h) || !in_subgroup(gp, t.com.u) || !in_subgroup(gp, t.com.v))
        return std::nullopt;
    if (t.instrumentation) {
        if (verify_open(gp, t.basis, t.com, *t.instrumentation)) return t.instrumentation->m;
        return std::nullopt;  // bad instrumentation: fall through would lie
    }
    bool small = gp.q <= Int(static_cast<unsigned long>(kDlogGuard));
    if (t.basis.s_secret && small) {
        // v * u^{-s} = g^m
        GroupElement gm = g_div(gp, t.com.v, g_pow(gp, t.com.u, *t.basis.s_secret));
        auto m = dlog_bruteforce(gp, gm);
        if (!m) return std::nullopt;
        return m;
    }
    if (gp.q <= 64) {
        // 2-D scan, hand-checkable groups only
        unsigned long q = gp.q.get_ui();
        for (unsigned long m = 0; m < q; ++m)
            for (unsigned long r = 0; r < q; ++r)
                if (commit(gp, t.basis, Scalar(m), Scalar(r)) == t.com) return Scalar(m);
        return std::nullopt;
    }
    throw GroupTooLarge("val oracle needs a basis secret, a tiny group, or instrumentation");
}

ExtComCommitter ExtComCommitter::create(const GroupParams& gp, const ReceiverBasis& b,
                                        const Scalar& m, size_t n_pairs, Rng& rng) {
    ExtComCommitter c;
    c.basis = ReceiverBasis{b.h, std::nullopt};
    c.m = m;
    c.shares.resize(n_pairs);
    c.coms.resize(n_pairs);
    for (size_t i = 0; i < n_pairs; ++i) {
        Scalar s0 = rng.scalar(gp);
        Scalar s1 = sc_sub(gp, m, s0);
        Opening o0{s0, rng.scalar(gp)};
        Opening o1{s1, rng.scalar(gp)};
        c.shares[i] = {o0, o1};
        c.coms[i] = {commit(gp, b, o0.m, o0.r), commit(gp, b, o1.m, o1.r)};
    }
    return c;
}

std::vector<Opening> ExtComCommitter::respond(const std::vector<uint8_t>& challenge) const {
    std::vector<Opening> out;
    out.reserve(challenge.size());
    for (size_t i = 0; i < challenge.size() && i < shares.size(); ++i)
        out.push_back(shares[i][challenge[i] & 1]);
    return out;
}

ExtComDecommit ExtComCommitter::decommit() const { return ExtComDecommit{m, shares}; }

std::vector<uint8_t> extcom_challenge(size_t n_pairs, Rng& rng) {
    std::vector<uint8_t> bits(n_pairs);
    for (auto& b : bits) b = rng.bit() ? 1 : 0;
    return bits;
}

bool extcom_check_opening(const GroupParams& gp, const ReceiverBasis& b,
                          const std::vector<std::array<Commitment, 2>>& pair_coms,
                          const std::vector<uint8_t>& challenge,
                          const std::vector<Opening>& opened) {
    if (challenge.size() != pair_coms.size() || opened.size() != pair_coms.size()) return false;
    for (size_t i = 0; i < pair_coms.size(); ++i)
        if (!verify_open(gp, b, pair_coms[i][challenge[i] & 1], opened[i])) return false;
    return true;
}

std::pair<ExtComTranscript, ExtComDecommit> extcom_run(const GroupParams& gp,
                                                       const ReceiverBasis& b, const Scalar& m,
                                                       size_t n_pairs, Rng& committer_rng,
                                                       Rng& receiver_rng) {
    auto committer = ExtComCommitter::create(gp, b, m, n_pairs, committer_rng);
    ExtComTranscript t;
    t.basis = ReceiverBasis{b.h, std::nullopt};
    t.n_pairs = n_pairs;
    t.pair_coms = committer.coms;
    t.challenge = extcom_challenge(n_pairs, receiver_rng);
    t.opened = committer.respond(t.challenge);
    t.accepted = extcom_check_opening(gp, b, t.pair_coms, t.challenge, t.opened);
    return {t, committer.decommit()};
}

bool extcom_verify_decommit(const GroupParams& gp, const ExtComTranscript& t, const Scalar& m,
                            const ExtComDecommit& d) {
    if (d.openings.size() != t.pair_coms.size()) return false;
    for (size_t i = 0; i < t.pair_coms.size(); ++i) {
        const auto& [o0, o1] = d.openings[i];
        if (!verify_open(gp, t.basis, t.pair_coms[i][0], o0)) return false;
        if (!verify_open(gp, t.basis, t.pair_coms[i][1], o1)) return false;
        if (!(sc_add(gp, o0.m, o1.m) == m)) return false;
    }
    return true;
}

namespace {

class HonestShim final : public ExtComCommitterShim {
  public:
    HonestShim(const GroupParams& gp, const ReceiverBasis& b, const Scalar& m, size_t n_pairs,
               Rng rng)
        : gp_(gp), basis_(b), m_(m), n_pairs_(n_pairs), rng_(rng) {}

    std::unique_ptr<ExtComCommitterShim> clone() const override {
        return std::make_unique<HonestShim>(*this);
    }
    std::optional<std::vector<std::array<Commitment, 2>>> first() override {
        committer_ = ExtComCommitter::create(gp_, basis_, m_, n_pairs_, rng_);
        return committer_->coms;
    }
    std::optional<std::vector<Opening>> respond(const std::vector<uint8_t>& ch) override {
        if (!committer_) return std::nullopt;
        return committer_->respond(ch);
    }

  private:
    GroupParams gp_;
    ReceiverBasis basis_;
    Scalar m_;
    size_t n_pairs_;
    Rng rng_;
    std::optional<ExtComCommitter> committer_;
};

}  // namespace

std::unique_ptr<ExtComCommitterShim> honest_extcom_shim(const GroupParams& gp,
                                                        const ReceiverBasis& b, const Scalar& m,
                                                        size_t n_pairs, Rng rng) {
    return std::make_unique<HonestShim>(gp, b, m, n_pairs, rng);
}

ExtComExtractOutcome extcom_extract(const GroupParams& gp, const ReceiverBasis& basis,
                                    ExtComCommitterShim& committer, size_t n_pairs,
                                    Rng& receiver_rng, Rng& rewind_rng, uint64_t budget) {
    ExtComExtractOutcome out;
    out.view.basis = ReceiverBasis{basis.h, std::nullopt};
    out.view.n_pairs = n_pairs;

    auto coms = committer.first();
    if (!coms || coms->size() != n_pairs) {
        out.view.accepted = false;
        return out;
    }
    out.view.pair_coms = *coms;
    auto snapshot = committer.clone();  // pre-challenge point

    // main thread: honest receiver
    out.view.challenge = extcom_challenge(n_pairs, receiver_rng);
    auto opened = committer.respond(out.view.challenge);
    out.view.accepted = opened && extcom_check_opening(gp, basis, out.view.pair_coms,
                                                       out.view.challenge, *opened);
    if (opened) out.view.opened = *opened;
    if (!out.view.accepted) return out;

    for (uint64_t k = 0; k < budget; ++k) {
        ++out.rewinds;
        auto attempt = snapshot->clone();
        auto ch = extcom_challenge(n_pairs, rewind_rng);
        auto op = attempt->respond(ch);
        if (!op || !extcom_check_opening(gp, basis, out.view.pair_coms, ch, *op)) continue;
        for (size_t i = 0; i < n_pairs; ++i) {
            if (ch[i] != out.view.challenge[i]) {
                // both shares of pair i are now opened; binding makes them unique
                out.sigma = sc_add(gp, out.view.opened[i].m, (*op)[i].m);
                return out;
            }
        }
    }
    out.budget_exhausted = true;
    return out;
}

}  // namespace nmcom
