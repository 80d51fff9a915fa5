#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "nmcom/commitments.hpp"
#include "nmcom/stats.hpp"

using namespace nmcom;

static GroupParams t23() { return group_profile("test23"); }

TEST_CASE("basis_gen pinned values") {
    auto gp = t23();
    CHECK(basis_from_secret(gp, Scalar(4ul)).h.v == 16);
    CHECK(basis_from_secret(gp, Scalar(0ul)).h.v == 1);
    CHECK(basis_from_secret(gp, Scalar(9ul)).h.v == 6);  // 512 mod 23
    Rng rng(3);
    auto b = basis_gen(gp, rng);
    REQUIRE(b.s_secret.has_value());
    CHECK(f_eval(gp, *b.s_secret) == b.h);
}

TEST_CASE("commit pinned values and round trip") {
    auto gp = t23();
    auto b = basis_from_secret(gp, Scalar(4ul));  // h = 16
    auto c = commit(gp, b, Scalar(5ul), Scalar(2ul));
    CHECK(c.u.v == 4);
    CHECK(c.v.v == 4);
    CHECK(commit(gp, b, Scalar(0ul), Scalar(0ul)) == Commitment{GroupElement(1ul), GroupElement(1ul)});
    CHECK(verify_open(gp, b, c, Opening{Scalar(5ul), Scalar(2ul)}));
    CHECK(!verify_open(gp, b, c, Opening{Scalar(6ul), Scalar(2ul)}));
    CHECK(!verify_open(gp, b, Commitment{GroupElement(Int(0)), GroupElement(4ul)},
                       Opening{Scalar(5ul), Scalar(2ul)}));
}

TEST_CASE("perfect binding exhaustive in test23") {
    auto gp = t23();
    for (unsigned long s = 0; s < 11; ++s) {
        auto b = basis_from_secret(gp, Scalar(s));
        std::map<std::pair<Int, Int>, unsigned long> seen;  // (u,v) -> m
        for (unsigned long m = 0; m < 11; ++m)
            for (unsigned long r = 0; r < 11; ++r) {
                auto c = commit(gp, b, Scalar(m), Scalar(r));
                auto key = std::make_pair(c.u.v, c.v.v);
                auto it = seen.find(key);
                if (it != seen.end()) CHECK(it->second == m);
                seen[key] = m;
            }
    }
}

TEST_CASE("val oracle") {
    auto gp = t23();
    auto b = basis_from_secret(gp, Scalar(4ul));
    SUBCASE("with basis secret") {
        NaorTranscript t{b, commit(gp, b, Scalar(5ul), Scalar(2ul)), std::nullopt};
        CHECK(val_oracle(gp, t)->v == 5);
    }
    SUBCASE("identity commitment") {
        NaorTranscript t{b, Commitment{GroupElement(1ul), GroupElement(1ul)}, std::nullopt};
        CHECK(val_oracle(gp, t)->v == 0);
    }
    SUBCASE("u outside subgroup") {
        NaorTranscript t{b, Commitment{GroupElement(5ul), GroupElement(4ul)}, std::nullopt};
        CHECK(!val_oracle(gp, t).has_value());
    }
    SUBCASE("2-D scan without secret") {
        NaorTranscript t{public_basis(b.h), commit(gp, b, Scalar(5ul), Scalar(2ul)), std::nullopt};
        CHECK(val_oracle(gp, t)->v == 5);
    }
    SUBCASE("instrumented large group") {
        auto big = group_profile("modp1536");
        Rng rng(9);
        auto bb = basis_gen(big, rng);
        Scalar m = rng.scalar(big), r = rng.scalar(big);
        NaorTranscript t{public_basis(bb.h), commit(big, bb, m, r), Opening{m, r}};
        CHECK(*val_oracle(big, t) == m);
        t.instrumentation.reset();
        CHECK_THROWS_AS(val_oracle(big, t), GroupTooLarge);
    }
    SUBCASE("agrees with honest opening over seeded trials") {
        Rng rng(77);
        for (int i = 0; i < 300; ++i) {
            auto bb = basis_gen(gp, rng);
            Scalar m = rng.scalar(gp), r = rng.scalar(gp);
            NaorTranscript t{bb, commit(gp, bb, m, r), std::nullopt};
            CHECK(*val_oracle(gp, t) == m);
        }
    }
}

TEST_CASE("extcom honest run, pinned share example") {
    auto gp = t23();
    auto b = basis_from_secret(gp, Scalar(4ul));
    // shares (3,2) and (7,9): 3+2=5, 7+9=16=5 mod 11; challenge (0,1) opens (3, 9)
    ExtComCommitter c;
    c.basis = public_basis(b.h);
    c.m = Scalar(5ul);
    Rng rr(1);
    auto mk = [&](unsigned long s) { return Opening{Scalar(s), rr.scalar(gp)}; };
    c.shares = {{mk(3), mk(2)}, {mk(7), mk(9)}};
    c.coms = {{commit(gp, b, c.shares[0][0].m, c.shares[0][0].r),
               commit(gp, b, c.shares[0][1].m, c.shares[0][1].r)},
              {commit(gp, b, c.shares[1][0].m, c.shares[1][0].r),
               commit(gp, b, c.shares[1][1].m, c.shares[1][1].r)}};
    auto opened = c.respond({0, 1});
    CHECK(opened[0].m.v == 3);
    CHECK(opened[1].m.v == 9);
    CHECK(extcom_check_opening(gp, b, c.coms, {0, 1}, opened));
    CHECK(extcom_verify_decommit(gp,
                                 ExtComTranscript{public_basis(b.h), 2, c.coms, {0, 1}, opened, true},
                                 Scalar(5ul), c.decommit()));

    SUBCASE("all-zero shares commit to zero") {
        auto z = Opening{Scalar(0ul), Scalar(0ul)};
        ExtComCommitter c0;
        c0.basis = public_basis(b.h);
        c0.m = Scalar(0ul);
        c0.shares = {{z, z}};
        c0.coms = {{commit(gp, b, z.m, z.r), commit(gp, b, z.m, z.r)}};
        auto op = c0.respond({1});
        CHECK(op[0].m.v == 0);
    }

    SUBCASE("wrong share rejected") {
        auto bad = opened;
        bad[0].m = Scalar(4ul);
        CHECK(!extcom_check_opening(gp, b, c.coms, {0, 1}, bad));
    }

    SUBCASE("decommit rejects altered share and wrong sum") {
        auto d = c.decommit();
        auto d_bad = d;
        d_bad.openings[0][0].m = Scalar(4ul);
        ExtComTranscript t{public_basis(b.h), 2, c.coms, {0, 1}, opened, true};
        CHECK(!extcom_verify_decommit(gp, t, Scalar(5ul), d_bad));
        // shares that sum to m+1: build explicitly
        Rng rng(5);
        auto c2 = ExtComCommitter::create(gp, b, Scalar(6ul), 2, rng);
        ExtComTranscript t2{public_basis(b.h), 2, c2.coms, {0, 0}, c2.respond({0, 0}), true};
        CHECK(!extcom_verify_decommit(gp, t2, Scalar(5ul), c2.decommit()));
        CHECK(extcom_verify_decommit(gp, t2, Scalar(6ul), c2.decommit()));
    }
}

TEST_CASE("extcom full run and tampering") {
    auto gp = t23();
    Rng rng(21);
    auto b = basis_gen(gp, rng);
    Rng crng = rng.child("c"), rrng = rng.child("r");
    auto [t, d] = extcom_run(gp, b, Scalar(5ul), 20, crng, rrng);
    CHECK(t.accepted);
    CHECK(extcom_verify_decommit(gp, t, Scalar(5ul), d));
    CHECK(!extcom_verify_decommit(gp, t, Scalar(6ul), d));
}

TEST_CASE("extcom extraction") {
    auto gp = t23();
    Rng rng(31);
    auto b = basis_gen(gp, rng);

    SUBCASE("honest committer: 500 seeded trials all extract") {
        int ok = 0;
        for (int i = 0; i < 500; ++i) {
            Rng trial = rng.child(i);
            auto shim = honest_extcom_shim(gp, b, Scalar(5ul), 8, trial.child("c"));
            Rng recv = trial.child("recv"), rew = trial.child("rew");
            auto out = extcom_extract(gp, b, *shim, 8, recv, rew, 64);
            CHECK(out.view.accepted);
            if (out.sigma && out.sigma->v == 5) ++ok;
        }
        CHECK(ok == 500);
    }

    SUBCASE("always-aborting committer") {
        struct Aborter final : ExtComCommitterShim {
            std::unique_ptr<ExtComCommitterShim> clone() const override {
                return std::make_unique<Aborter>(*this);
            }
            std::optional<std::vector<std::array<Commitment, 2>>> first() override {
                return std::nullopt;
            }
            std::optional<std::vector<Opening>> respond(const std::vector<uint8_t>&) override {
                return std::nullopt;
            }
        } shim;
        Rng recv = rng.child("r2"), rew = rng.child("w2");
        auto out = extcom_extract(gp, b, shim, 4, recv, rew, 16);
        CHECK(!out.view.accepted);
        CHECK(!out.sigma.has_value());
        CHECK(!out.budget_exhausted);
    }

    SUBCASE("n_pairs=2 with complementary challenges recovers m by direct replay") {
        Rng crng = rng.child("c3");
        auto committer = ExtComCommitter::create(gp, b, Scalar(5ul), 2, crng);
        auto o1 = committer.respond({0, 1});
        auto o2 = committer.respond({1, 0});
        CHECK(sc_add(gp, o1[0].m, o2[0].m).v == 5);
        CHECK(sc_add(gp, o1[1].m, o2[1].m).v == 5);
    }
}

TEST_CASE("extcom binding exhaustive in test23 with n_pairs=2") {
    // If extraction returns sigma != bot, no decommitment to another value verifies.
    // Exhaustive over the share space: any pair of openings for the same pair_coms
    // determines the same sum, because each commitment binds its share perfectly.
    auto gp = t23();
    auto b = basis_from_secret(gp, Scalar(7ul));
    for (unsigned long s0 = 0; s0 < 11; ++s0)
        for (unsigned long r0 = 0; r0 < 11; ++r0) {
            auto c0 = commit(gp, b, Scalar(s0), Scalar(r0));
            for (unsigned long s0b = 0; s0b < 11; ++s0b)
                for (unsigned long r0b = 0; r0b < 11; ++r0b) {
                    if (verify_open(gp, b, c0, Opening{Scalar(s0b), Scalar(r0b)}))
                        CHECK(s0b == s0);
                }
        }
}

TEST_CASE("extcom simulation: extracted view matches honest view distribution") {
    auto gp = t23();
    auto b = basis_from_secret(gp, Scalar(4ul));
    std::map<std::string, uint64_t> honest, extracted;
    const int N = 10000;
    Rng rng(555);
    auto key = [&](const ExtComTranscript& t) {
        std::string s;
        for (auto bit : t.challenge) s += char('0' + bit);
        s += ":";
        for (const auto& o : t.opened) s += o.m.v.get_str() + ",";
        return s;
    };
    for (int i = 0; i < N; ++i) {
        Rng trial = rng.child(i);
        Rng c1 = trial.child("hc"), r1 = trial.child("hr");
        auto [t, d] = extcom_run(gp, b, Scalar(5ul), 2, c1, r1);
        honest[key(t)]++;
        auto shim = honest_extcom_shim(gp, b, Scalar(5ul), 2, trial.child("ec"));
        Rng recv = trial.child("er"), rew = trial.child("ew");
        auto out = extcom_extract(gp, b, *shim, 2, recv, rew, 64);
        extracted[key(out.view)]++;
    }
    auto res = chi_square_two_sample(honest, extracted);
    CHECK(res.p_value > 0.01);
}
