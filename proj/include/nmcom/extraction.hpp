// Executable versions of the security proof's machines for the one-sided
// synchronous game: the simulated main thread G_i, the simulation-less
// extractors K_i and K, the simulation-extractor SE with its rewinding loop,
// the hybrid G (prefix + SE), and the brute-force hybrid-lab machines
// K'_i, K''_i, K*_1, K**_1 for dlog-feasible groups.
#ifndef NMCOM_EXTRACTION_HPP_
#define NMCOM_EXTRACTION_HPP_

#include "nmcom/mim.hpp"
#include "nmcom/stats.hpp"

namespace nmcom {

struct ExtractionParams {
    double epsilon = 0.1;
    unsigned lambda = 8;
    unsigned t = 1;        // left tag
    unsigned t_tilde = 2;  // right tag
    std::optional<uint64_t> rewind_cap;  // override for the SE loop bound
    uint64_t wee_budget = 256;           // rewind budget per emulator call
};

// eps' = eps / (10 t^2)
double epsilon_prime(double epsilon, unsigned t);
// ceil((t~ / eps') * lambda); the rewind_cap override truncates it.
uint64_t se_loop_bound(const ExtractionParams&);

// Everything the machines may see: the prefix with the left committer's
// secrets scrubbed. The machines never read st_C.
struct SeInput {
    Prefix pref;
    SeInput clone() const {
        SeInput s;
        s.pref = pref.clone();
        return s;
    }
};
SeInput se_input_from(const Prefix&);

// ---------------------------------------------------------------------------

struct GOutcome {
    std::vector<uint8_t> out;
    bool b = false;
    bool left_wipok1_ran = false;
    bool left_wipok1_accepted = false;
    bool invalid_witness_abort = false;  // accepted but the emulator had no valid witness
    bool wee_exhausted = false;
};

// Simulated main thread: right WIPoK-1 run with witness (i, x~_i); left
// WIPoK-1 driven through the witness-extended emulator; the extracted (j, x_j)
// replaces (m, r) in the left WIPoK-2.
GOutcome run_G(unsigned i, const SeInput&, const ExtractionParams&, Rng rng);

struct ExtractionResult {
    enum Kind { Message, BotY, BotInvalid } kind = BotInvalid;
    std::optional<Scalar> m;                 // Message
    std::optional<unsigned> preimage_index;  // BotY
    bool right_accepted = false;
    bool wee_exhausted = false;
    std::optional<unsigned> extracted_left_index;  // j from the left WIPoK-1
};

// As run_G, but the right WIPoK-2 is driven by the emulator and the extracted
// witness is classified: opening branch -> Message (randomness discarded),
// preimage branch -> BotY, anything else -> BotInvalid.
ExtractionResult run_K_i(unsigned i, const SeInput&, const ExtractionParams&, Rng rng);
// Uniform i <- [t~], then K_i.
ExtractionResult run_K(const SeInput&, const ExtractionParams&, Rng rng);

struct SeOutcome {
    std::vector<uint8_t> out;
    std::optional<Scalar> val;
    bool b = false;
    uint64_t k_calls = 0;   // rewinding-stage iterations used
    bool capped = false;    // rewind_cap truncated the faithful loop bound
};

// Three stages: main-thread simulation via G_1, the K loop, bot on exhaustion.
SeOutcome run_SE(const SeInput&, const ExtractionParams&, Rng rng);

struct HybridGOutcome {
    std::vector<uint8_t> out;
    ValB val;
};

// Prefix generation then SE; never touches the left committer state.
HybridGOutcome run_hybrid_G(const MimConfig&, const Adversary& prototype,
                            const std::vector<uint8_t>& advice, const Schedule&,
                            const ExtractionParams&, Rng rng);

// ---------------------------------------------------------------------------
// Hybrid-lab machines (brute-force dlog required).

enum class LabMachine { Kp, Kpp, Kstar1, Kstarstar1 };

struct LabOptions {
    std::optional<unsigned> force_guess_index;  // forced-coincidence replays
};

struct LabOutcome {
    ExtractionResult result;  // Kp / Kpp
    bool b = false;           // Kstar1 / Kstarstar1
    std::vector<uint8_t> out;
    std::optional<unsigned> guess_index;
    std::optional<unsigned> extracted_left_index;
    bool brute_force_failed = false;  // every left puzzle was outside the image
    bool aborted_invalid = false;     // Kstar1's invalid-preimage abort
};

LabOutcome run_hybrid_lab(LabMachine, unsigned i, const SeInput&, const ExtractionParams&,
                          Rng rng, const LabOptions& = {});

// ---------------------------------------------------------------------------

struct ExtractionReport {
    uint64_t trials = 0;
    uint64_t accepts = 0;
    uint64_t message = 0, boty = 0, botinvalid = 0;
    uint64_t wee_exhausted = 0;
    double p_hat = 0.0;
    WilsonInterval interval;
};

// machine: "G", "K", "Ki", "Kp", "Kpp", "Kstar1", "Kstarstar1"
ExtractionReport estimate_p(const SeInput&, const std::string& machine, unsigned index,
                            const ExtractionParams&, unsigned trials, Rng rng);

}  // namespace nmcom

#endif  // NMCOM_EXTRACTION_HPP_
