#include "nmcom/sigma.hpp"

namespace nmcom {

namespace {

GroupElement row_eval(const GroupParams& gp, const std::vector<LinearRelation::Term>& row,
                      const std::vector<Scalar>& w) {
    GroupElement acc(1);
    for (const auto& t : row) {
        if (w[t.col].v == 0) continue;
        acc = g_mul(gp, acc, g_pow(gp, t.base, w[t.col]));
    }
    return acc;
}

LinearRelation dlog_relation(const GroupParams& gp, const GroupElement& y) {
    LinearRelation r;
    r.n_unknowns = 1;
    r.rows = {{{0, GroupElement(gp.g)}}};
    r.targets = {y};
    return r;
}

// knowledge of (r, m): u = g^r, v = h^r g^m
LinearRelation opening_relation(const GroupParams& gp, const ReceiverBasis& b,
                                const Commitment& c) {
    LinearRelation r;
    r.n_unknowns = 2;
    GroupElement g(gp.g);
    r.rows = {{{0, g}}, {{0, b.h}, {1, g}}};
    r.targets = {c.u, c.v};
    return r;
}

// knowledge of (x, rho): y = g^x, com.u = g^rho, com.v = h'^rho g^x
LinearRelation preimage_with_com_relation(const GroupParams& gp, const GroupElement& y,
                                          const ReceiverBasis& bp, const Commitment& c) {
    LinearRelation r;
    r.n_unknowns = 2;
    GroupElement g(gp.g);
    r.rows = {{{0, g}}, {{1, g}}, {{0, g}, {1, bp.h}}};
    r.targets = {y, c.u, c.v};
    return r;
}

// knowledge of (m, r, {s_i^0, rho_i^0, rho_i^1}) with com = (g^r, h^r g^m) and
// every ExtCom pair opening to shares summing to m (s_i^1 = m - s_i^0
// substituted away, so the share constraint is carried by the relation).
LinearRelation opening_with_extcoms_relation(const GroupParams& gp,
                                             const OpeningWithExtComsStmt& s) {
    size_t total_pairs = 0;
    for (const auto& t : s.extcoms) total_pairs += t.pair_coms.size();
    LinearRelation r;
    r.n_unknowns = 2 + 3 * total_pairs;
    r.rows.reserve(2 + 4 * total_pairs);
    r.targets.reserve(2 + 4 * total_pairs);
    GroupElement g(gp.g), ginv = g_inv(gp, GroupElement(gp.g));

    // unknowns: [0]=m, [1]=r, then per pair: s_i^0, rho_i^0, rho_i^1
    r.rows.push_back({{1, g}});
    r.targets.push_back(s.com.u);  // u = g^r
    r.rows.push_back({{0, g}, {1, s.basis.h}});
    r.targets.push_back(s.com.v);  // v = g^m h^r
    size_t base = 2;
    for (const auto& t : s.extcoms) {
        GroupElement h = t.basis.h;
        for (const auto& pc : t.pair_coms) {
            size_t is = base, r0 = base + 1, r1 = base + 2;
            base += 3;
            r.rows.push_back({{r0, g}});
            r.targets.push_back(pc[0].u);  // u0 = g^{rho0}
            r.rows.push_back({{is, g}, {r0, h}});
            r.targets.push_back(pc[0].v);  // v0 = g^{s0} h^{rho0}
            r.rows.push_back({{r1, g}});
            r.targets.push_back(pc[1].u);  // u1 = g^{rho1}
            r.rows.push_back({{0, g}, {is, ginv}, {r1, h}});
            r.targets.push_back(pc[1].v);  // v1 = g^{m-s0} h^{rho1}
        }
    }
    return r;
}

void flatten_into(const GroupParams& gp, const Statement& s, FlatOr& out) {
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, DLogStmt>) {
                out.branches.push_back(dlog_relation(gp, st.y));
                out.meta.push_back({BranchKind::Preimage, 1});
            } else if constexpr (std::is_same_v<T, OpeningStmt>) {
                out.branches.push_back(opening_relation(gp, st.basis, st.com));
                out.meta.push_back({BranchKind::Opening, 0});
            } else if constexpr (std::is_same_v<T, OneOfTStmt>) {
                for (size_t i = 0; i < st.ys.size(); ++i) {
                    out.branches.push_back(dlog_relation(gp, st.ys[i]));
                    out.meta.push_back({BranchKind::Preimage, i + 1});
                }
            } else if constexpr (std::is_same_v<T, ConsistentPuzzleStmt>) {
                if (st.ys.size() != st.coms.size())
                    throw MalformedInput("puzzle/commitment count mismatch");
                for (size_t i = 0; i < st.ys.size(); ++i) {
                    out.branches.push_back(
                        preimage_with_com_relation(gp, st.ys[i], st.basis_prime, st.coms[i]));
                    out.meta.push_back({BranchKind::PreimageWithCom, i + 1});
                }
            } else if constexpr (std::is_same_v<T, TrapOrStmt>) {
                out.branches.push_back(dlog_relation(gp, st.V0));
                out.meta.push_back({BranchKind::Trapdoor, 0});
                out.branches.push_back(dlog_relation(gp, st.V1));
                out.meta.push_back({BranchKind::Trapdoor, 1});
            } else if constexpr (std::is_same_v<T, OpeningWithExtComsStmt>) {
                out.branches.push_back(opening_with_extcoms_relation(gp, st));
                out.meta.push_back({BranchKind::OpeningWithExtComs, 0});
            } else if constexpr (std::is_same_v<T, OrListStmt>) {
                for (const auto& part : st.parts) flatten_into(gp, part, out);
            }
        },
        s.v);
}

}  // namespace

bool LinearRelation::satisfied_by(const GroupParams& gp, const std::vector<Scalar>& w) const {
    if (w.size() != n_unknowns) return false;
    for (size_t j = 0; j < rows.size(); ++j)
        if (!(row_eval(gp, rows[j], w) == targets[j])) return false;
    return true;
}

FlatOr flatten(const GroupParams& gp, const Statement& s) {
    FlatOr out;
    flatten_into(gp, s, out);
    if (out.branches.empty()) throw MalformedInput("empty statement");
    return out;
}

bool witness_satisfies(const GroupParams& gp, const FlatOr& f, const Witness& w) {
    return w.branch < f.branches.size() && f.branches[w.branch].satisfied_by(gp, w.w);
}

Witness witness_dlog(const Scalar& x) { return Witness{0, {x}}; }
Witness witness_opening(const Scalar& m, const Scalar& r) { return Witness{0, {r, m}}; }
Witness witness_preimage(size_t off, size_t i, const Scalar& x) {
    return Witness{off + i - 1, {x}};
}
Witness witness_preimage_with_com(size_t off, size_t i, const Scalar& x, const Scalar& rho) {
    return Witness{off + i - 1, {x, rho}};
}
Witness witness_trapdoor(size_t off, size_t side, const Scalar& v) {
    return Witness{off + side, {v}};
}
Witness witness_opening_with_extcoms(const GroupParams& gp, const Scalar& m, const Scalar& r,
                                     const std::vector<ExtComDecommit>& decoms) {
    (void)gp;
    Witness w;
    w.branch = 0;
    w.w = {m, r};
    for (const auto& d : decoms)
        for (const auto& pair : d.openings) {
            w.w.push_back(pair[0].m);  // s^0
            w.w.push_back(pair[0].r);
            w.w.push_back(pair[1].r);
        }
    return w;
}

SigmaProver SigmaProver::start(const GroupParams& gp, const FlatOr& f, const Witness& wit,
                               Rng& rng) {
    if (wit.branch >= f.branches.size()) throw MalformedInput("bad branch index");
    if (!f.branches[wit.branch].satisfied_by(gp, wit.w))
        throw RelationViolated("witness does not satisfy its branch relation");
    SigmaProver p;
    p.flat = f;
    p.wit = wit;
    p.live = wit.branch;
    p.prepared.resize(f.branches.size());
    for (size_t j = 0; j < f.branches.size(); ++j) {
        if (j == p.live) {
            const auto& rel = f.branches[j];
            p.nonces.reserve(rel.n_unknowns);
            std::vector<Scalar> ks;
            for (size_t k = 0; k < rel.n_unknowns; ++k) ks.push_back(rng.scalar(gp));
            p.nonces = ks;
            BranchTranscript bt;
            for (const auto& row : rel.rows) bt.a.push_back(row_eval(gp, row, ks));
            p.prepared[j] = bt;
        } else {
            p.prepared[j] = simulate_branch(gp, f.branches[j], rng.scalar(gp), rng);
        }
    }
    p.committed = true;
    return p;
}

std::vector<std::vector<GroupElement>> SigmaProver::first_message() const {
    std::vector<std::vector<GroupElement>> out;
    for (const auto& bt : prepared) out.push_back(bt.a);
    return out;
}

SigmaTranscript SigmaProver::respond(const GroupParams& gp, const Scalar& e) const {
    SigmaTranscript t;
    t.e_total = e;
    t.branches = prepared;
    Scalar e_live = e;
    for (size_t j = 0; j < prepared.size(); ++j)
        if (j != live) e_live = sc_sub(gp, e_live, prepared[j].e);
    auto& lb = t.branches[live];
    lb.e = e_live;
    lb.z.clear();
    for (size_t k = 0; k < wit.w.size(); ++k)
        lb.z.push_back(sc_add(gp, nonces[k], sc_mul(gp, e_live, wit.w[k])));
    return t;
}

bool verify_transcript(const GroupParams& gp, const FlatOr& f, const SigmaTranscript& t) {
    if (t.branches.size() != f.branches.size()) return false;
    Scalar sum(Int(0));
    for (size_t j = 0; j < f.branches.size(); ++j) {
        const auto& rel = f.branches[j];
        const auto& bt = t.branches[j];
        if (bt.a.size() != rel.rows.size() || bt.z.size() != rel.n_unknowns) return false;
        for (const auto& a : bt.a)
            if (!in_subgroup(gp, a)) return false;
        sum = sc_add(gp, sum, bt.e);
        // prod rows^z == a * target^e per equation
        for (size_t r = 0; r < rel.rows.size(); ++r) {
            GroupElement lhs = row_eval(gp, rel.rows[r], bt.z);
            GroupElement rhs = g_mul(gp, bt.a[r], g_pow(gp, rel.targets[r], bt.e));
            if (!(lhs == rhs)) return false;
        }
    }
    return sum == t.e_total;
}

BranchTranscript simulate_branch(const GroupParams& gp, const LinearRelation& rel, const Scalar& e,
                                 Rng& rng) {
    BranchTranscript bt;
    bt.e = e;
    for (size_t k = 0; k < rel.n_unknowns; ++k) bt.z.push_back(rng.scalar(gp));
    Scalar neg_e = sc_neg(gp, e);
    for (size_t r = 0; r < rel.rows.size(); ++r) {
        GroupElement a = g_mul(gp, row_eval(gp, rel.rows[r], bt.z),
                               g_pow(gp, rel.targets[r], neg_e));
        bt.a.push_back(a);
    }
    return bt;
}

SigmaTranscript simulate(const GroupParams& gp, const FlatOr& f, const Scalar& e, Rng& rng) {
    SigmaTranscript t;
    t.e_total = e;
    Scalar rest = e;
    for (size_t j = 0; j < f.branches.size(); ++j) {
        Scalar ej = (j + 1 == f.branches.size()) ? rest : rng.scalar(gp);
        if (j + 1 != f.branches.size()) rest = sc_sub(gp, rest, ej);
        t.branches.push_back(simulate_branch(gp, f.branches[j], ej, rng));
    }
    return t;
}

Witness special_sound_extract(const GroupParams& gp, const FlatOr& f, const SigmaTranscript& t1,
                              const SigmaTranscript& t2) {
    if (t1.e_total == t2.e_total) throw MalformedInput("transcripts share the total challenge");
    if (t1.branches.size() != t2.branches.size() || t1.branches.size() != f.branches.size())
        throw MalformedInput("branch count mismatch");
    for (size_t j = 0; j < t1.branches.size(); ++j) {
        if (t1.branches[j].a != t2.branches[j].a)
            throw MalformedInput("transcripts do not share first messages");
        if (t1.branches[j].e == t2.branches[j].e) continue;
        Scalar de_inv = sc_inv(gp, sc_sub(gp, t1.branches[j].e, t2.branches[j].e));
        Witness w;
        w.branch = j;
        for (size_t k = 0; k < f.branches[j].n_unknowns; ++k) {
            Scalar dz = sc_sub(gp, t1.branches[j].z[k], t2.branches[j].z[k]);
            w.w.push_back(sc_mul(gp, dz, de_inv));
        }
        if (!f.branches[j].satisfied_by(gp, w.w))
            throw MalformedInput("divergent branch yields no valid witness");
        return w;
    }
    throw MalformedInput("no divergent branch despite distinct challenges");
}

ProveVerifyResult atomic_prove_verify(const GroupParams& gp, const Statement& s, const Witness& w,
                                      Rng& prover_rng, Rng& verifier_rng) {
    FlatOr f = flatten(gp, s);
    SigmaProver p = SigmaProver::start(gp, f, w, prover_rng);
    Scalar e = verifier_rng.scalar(gp);
    SigmaTranscript t = p.respond(gp, e);
    return ProveVerifyResult{t, verify_transcript(gp, f, t)};
}

namespace {

class HonestProver final : public ResumableProver {
  public:
    HonestProver(const GroupParams& gp, const FlatOr& f, const Witness& w, Rng rng)
        : gp_(gp), flat_(f), wit_(w), rng_(rng) {}

    std::unique_ptr<ResumableProver> clone() const override {
        return std::make_unique<HonestProver>(*this);
    }
    std::optional<std::vector<std::vector<GroupElement>>> first_message() override {
        prover_ = SigmaProver::start(gp_, flat_, wit_, rng_);
        return prover_->first_message();
    }
    std::optional<SigmaTranscript> respond(const Scalar& e) override {
        if (!prover_) return std::nullopt;
        return prover_->respond(gp_, e);
    }

  private:
    GroupParams gp_;
    FlatOr flat_;
    Witness wit_;
    Rng rng_;
    std::optional<SigmaProver> prover_;
};

}  // namespace

std::unique_ptr<ResumableProver> honest_resumable_prover(const GroupParams& gp, const FlatOr& f,
                                                         const Witness& w, Rng rng) {
    return std::make_unique<HonestProver>(gp, f, w, rng);
}

WeeResult wee_run(const GroupParams& gp, const FlatOr& f, ResumableProver& prover,
                  Rng& verifier_rng, Rng& rewind_rng, uint64_t budget) {
    WeeResult res;
    auto main = prover.clone();
    auto a = main->first_message();
    if (!a) {
        res.state = std::move(main);
        res.accepted = false;
        return res;
    }
    auto snapshot = main->clone();  // pre-challenge point
    Scalar e1 = verifier_rng.scalar(gp);
    auto t1 = main->respond(e1);
    res.state = std::move(main);
    res.accepted = t1 && verify_transcript(gp, f, *t1) && t1->e_total == e1;
    if (!res.accepted) return res;
    res.main_transcript = t1;

    for (uint64_t k = 0; k < budget; ++k) {
        Scalar e2 = rewind_rng.scalar(gp);
        if (e2 == e1) continue;
        auto attempt = snapshot->clone();
        auto t2 = attempt->respond(e2);
        if (!t2 || t2->e_total != e2 || !verify_transcript(gp, f, *t2)) continue;
        res.witness = special_sound_extract(gp, f, *t1, *t2);
        return res;
    }
    res.budget_exhausted = true;
    return res;
}

}  // namespace nmcom
