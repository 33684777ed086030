#ifndef OTCAP_PROTOCOL_HPP
#define OTCAP_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "otcap/channels.hpp"
#include "otcap/hashing.hpp"
#include "otcap/rng.hpp"
#include "otcap/statutil.hpp"

namespace otcap {

/// Finite-length parameters of one transfer instance.
struct LengthParams {
  int m = 0;      // blocks drawn from each pool
  int kappa = 0;  // reconciliation tag width in bits
  int l = 0;      // key width in bits
};

/// m = floor(n_blocks (p - delta_m)), kappa = ceil(m (h_good + delta_kappa)),
/// l = floor(m (h_bad - delta_l)) - kappa. Throws when the erasure margin
/// delta_m >= p, when no blocks survive the margin, and when the key side
/// comes out empty ("no extractable key").
LengthParams derive_lengths(int n_blocks, double p, double h_good, double h_bad, double delta_m,
                            double delta_kappa, double delta_l);

inline LengthParams derive_lengths(int n_blocks, double p, double h_good, double h_bad,
                                   double delta) {
  return derive_lengths(n_blocks, p, h_good, h_bad, delta, delta, delta);
}

/// Deliberate defects for the tagging step, used by the audits.
enum class SamplerFault {
  kNone,         // balanced rule: erased -> 1; kept good w.p. p/(1-p), else discarded
  kKeepAllGood,  // broken rule: every non-erased block kept, nothing discarded
};

/// P(block tagged good | not erased) under the balanced rule.
double keep_good_prob(double erasure_prob);

/// One decoding alternative at one block position.
struct DecodeAlternative {
  int symbol = 0;
  double log2p = 0.0;   // log-probability, any common additive offset is fine
  Hash128 tag_delta;    // tag xor relative to the top alternative of the position
};

struct DecodePosition {
  std::vector<DecodeAlternative> alts;  // sorted by log2p descending; alts[0] is the MAP choice
};

struct DecodeProblem {
  std::vector<DecodePosition> positions;
  Hash128 base_tag;          // tag of the all-MAP word
  Hash128 target;            // received tag
  std::int64_t visit_cap = std::int64_t{1} << 20;
};

/// Best-first search over candidate words ordered by posterior, returning the
/// first candidate whose tag matches, or nullopt once visit_cap candidates
/// have been examined. Equal-score candidates are visited in lexicographic
/// order of their deviation pattern, so results are deterministic. When every
/// position is binary with one common log-probability gap the search runs as
/// a plain weight-ordered enumeration instead of a heap.
std::optional<std::vector<int>> reconcile_decode(const DecodeProblem& problem);

/// Wire messages and internals of one protocol run (kept for tests/audits).
struct Transcript {
  std::uint64_t stream = 0;  // per-trial RNG stream id
  std::vector<int> x_syms;
  std::vector<int> y_syms;
  std::vector<int> v;        // 0 kept good, 1 erased, 2 discarded
  int b = 0;
  std::vector<int> i0, i1;   // announced index sets
  Bits g_seed, f_seed;
  Bits c0, c1;               // reconciliation tags
  Bits masked0, masked1;     // keys one-time-padded with the extractor output
  Bits k0, k1, khat;
  bool aborted = false;
  bool decode_failed = false;
  bool key_error = false;
};

struct TrialOutcome {
  bool aborted = false;
  bool decode_failed = false;
  bool key_error = false;
  int b = 0;
  int good_count = 0;  // pool sizes before truncation
  int bad_count = 0;
  int first_i0 = -1;   // statistics of the announced set I0 (privacy audits)
  int last_i0 = -1;
};

struct ProtocolConfig {
  int n_blocks = 0;
  LengthParams len;
  std::uint64_t seed = 1;
  std::int64_t list_cap = std::int64_t{1} << 20;
  int alt_cap = 16;
  SamplerFault fault = SamplerFault::kNone;
};

/// One full run over an explicit-matrix erasure channel: sample blocks, tag
/// them, announce both index sets, send tags and masked keys, decode, unmask.
TrialOutcome run_trial(const GecChannel& ch, const ProtocolConfig& cfg, std::uint64_t trial,
                       Transcript* transcript = nullptr);

struct ReceiverPrivacyAudit {
  bool exact_ok = false;     // tag rule gives identical pool statistics for both labels
  double exact_gap = 0.0;    // worst-case P(good) - P(erased) over inputs
  double chi2_p = 0.0;       // homogeneity of announced-set statistics across the choice bit
  int trials_used = 0;
};

/// Exact check of the tagging rule plus an empirical two-sample test on the
/// announced sets, with the choice bit as the hidden label.
ReceiverPrivacyAudit audit_receiver_privacy(const GecChannel& ch, const ProtocolConfig& cfg,
                                            int trials);

struct SenderPrivacyAudit {
  double avg_dist = 0.0;  // variational distance of the extractor output from uniform
  double max_dist = 0.0;
  int seeds = 0;
};

/// Exact distance of (tag, extractor output) from (tag, uniform) for iid
/// biased input bits, averaged over hash seeds. Enumerates all 2^m inputs,
/// so m is capped at 20.
SenderPrivacyAudit audit_sender_privacy(int m, int kappa, int l, double theta, int n_seeds,
                                        std::uint64_t seed);

/// Aggregate result of repeated trials over an explicit erasure channel.
struct SimReport {
  int n_uses = 0;
  int n_blocks = 0;
  int trials = 0;
  double q = 0.0;
  double delta_m = 0.0, delta_kappa = 0.0, delta_l = 0.0;
  std::uint64_t seed = 0;
  std::int64_t list_cap = 0;
  LengthParams len;
  int aborts = 0;
  int decode_failures = 0;
  int key_errors = 0;
  double abort_rate = 0.0;
  double key_error_rate = 0.0;  // among non-aborted trials
  WilsonInterval key_error_ci;
  double realized_rate = 0.0;   // correct key bits per channel use
  bool privacy_exact_ok = false;
  double privacy_chi2_p = 0.0;
};

struct BsecSimConfig {
  double q = 0.1;
  int n_uses = 2000;  // two channel uses per block
  double delta_m = 0.05, delta_kappa = 0.05, delta_l = 0.05;
  int trials = 200;
  std::uint64_t seed = 1;
  std::int64_t list_cap = std::int64_t{1} << 20;
  SamplerFault fault = SamplerFault::kNone;
};

SimReport simulate_bsec(const BsecSimConfig& cfg);

/// Per-round aggregate of the cascade simulation.
struct CascadeRound {
  int t = 0;
  double erasure_prob = 0.0;
  double h_good = 0.0, h_bad = 0.0;
  double delta_m = 0.0;       // per-round margin min(delta, p_t/2)
  LengthParams len;
  bool scheduled = false;     // false when the key length came out empty
  int expected_alive = 0;     // deterministic schedule input
  int instances = 0;
  int aborts = 0;
  int decode_failures = 0;
  int key_errors = 0;
};

struct CascadeConfig {
  int s = 2;
  double q = 0.1;
  int n_uses = 4096;  // blocks = n_uses / 2^s
  double delta_m = 0.05, delta_kappa = 0.05, delta_l = 0.05;
  int trials = 50;
  std::uint64_t seed = 1;
  std::int64_t list_cap = std::int64_t{1} << 20;
  int alt_cap = 16;
};

struct CascadeReport {
  int s = 0;
  int n_uses = 0;
  int n_blocks = 0;
  int trials = 0;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::vector<CascadeRound> rounds;
  double realized_rate = 0.0;  // correct key bits per channel use, all rounds pooled
};

/// Runs the multi-round cascade: round t tags each surviving block by the
/// t-th parity of its noise word, pairs the erased blocks with an equal
/// number of surviving ones for a transfer instance, and keeps the remaining
/// survivors for round t+1. Syndromes revealed along the way keep both sides
/// in a canonical frame (blocks are shifted by the cached coset minima).
CascadeReport run_cascade(const CascadeConfig& cfg);

}  // namespace otcap

#endif
