#ifndef OTCAP_BOUNDS_HPP
#define OTCAP_BOUNDS_HPP

#include <string>
#include <vector>

namespace otcap {

/// Binary entropy in bits; 0 at the endpoints.
double binary_entropy(double p);

/// Achievable-rate lower bound from the two-use repetition scheme: pairs of
/// channel uses become an erasure-style block with erasure probability
/// 2q(1-q) and residual crossover q^2 / ((1-q)^2 + q^2).
double extension_bound(double q);

/// Iterated version of extension_bound: surviving (non-erased) blocks are
/// paired again, up to `depth` levels. depth = 1 reproduces extension_bound.
double recursive_bound(double q, int depth);

/// Rate lower bound from the nested-subgroup cascade at block length 2^s.
/// Accumulates survive_factor * (p_t / N) * (h_bad - h_good) over rounds,
/// stopping at the first round whose erasure probability exceeds 1/2.
double polar_bound(double q, int s);

/// recursive_bound run for `switch_depth` levels, then polar_bound at block
/// length 2^s applied to the surviving blocks. switch_depth = 0 gives
/// polar_bound(q, s) exactly.
double hybrid_bound(double q, int switch_depth, int s);

/// Known upper bound on the achievable rate over a BSC(q).
double upper_bound(double q);

/// Odd-parity probability of 2^j iid Bernoulli(q) bits.
double parity_odd_prob(double q, int j);

/// P(both halves odd | whole block even) for a block of 2^j bits.
double both_odd_given_even(double q, int j);

/// Conditional noise entropies for a block of 2^j iid Bernoulli(q) bits given
/// its overall parity, computed by the halving recursion
///   H_even(j) = h(qb_j) + (1-qb_j) 2 H_even(j-1) + qb_j 2 H_odd(j-1)
///   H_odd(j)  = 1 + H_even(j-1) + H_odd(j-1)
/// with qb_j = both_odd_given_even. Base j = 0: both zero.
struct ParityEntropies {
  double even = 0.0;
  double odd = 0.0;
};
ParityEntropies parity_entropies(double q, int j);

/// H_odd(j) - H_even(j) by the telescoped recursion
/// D_j = 1 - h(qb_j) + (1 - 2 qb_j) D_{j-1}.
double parity_entropy_gap(double q, int j);

/// Same entropies by direct enumeration over binomial weight classes
/// (independent route, for cross-checking; needs 2^j <= kMaxBitLen).
ParityEntropies parity_entropies_direct(double q, int j);

/// First cascade round in closed form:
///   f = (pbar_s / 2^s) * sum_{i=0}^{s-1} prod_{j=1}^{i} (1 - 2 qbar_{s-j+1}) * (1 - h(qbar_{s-i}))
/// with pbar_j = parity_odd_prob and qbar_j = both_odd_given_even. Agrees
/// with the t = 1 term of polar_bound.
double first_round_term_closed(double q, int s);

/// t = 1 term of polar_bound from the cached subgroup chain (cross-check).
double first_round_term_enum(double q, int s);

/// Central finite-difference slope of first_round_term_closed at q -> 0
/// (evaluated at q0 = 1e-6 with step 1e-7). Approaches s as the theory says.
double first_round_small_q_slope(int s);

enum class SkaVariant {
  kErasureSide,  // adversary-side observation drawn from the erased class
  kLiteral       // same formula with the non-erased class (kept for comparison)
};

/// Interactive secret-key rate lower bound at block length 4. Exact finite
/// enumeration of the first-round gain from the three-message exchange
/// (two syndrome bits, a noise-class indicator, one more syndrome bit),
/// added on top of the remaining polar_bound(q, 2) rounds. Never below
/// polar_bound(q, 2); the gain is (p1/4)(1-alpha)(1-h(q1)) at equal inputs.
double interactive_ska_bound(double q, SkaVariant variant = SkaVariant::kErasureSide);

/// One selectable curve of the rate-bound family.
struct MethodSpec {
  enum class Kind { kExtension, kRecursive, kPolar, kSka, kSkaLiteral, kHybrid, kUpper };

  Kind kind = Kind::kExtension;
  int depth = 0;  // recursion levels (recursive, hybrid)
  int s = 0;      // cascade exponent (polar, hybrid)

  std::string label() const;   // canonical spelling, e.g. "polar:2"
  std::string params() const;  // parameter summary, e.g. "s=2" or "T=3;s=4"
};

/// Parses spellings like "extension", "recursive:5", "polar:2", "polar-n4",
/// "ska", "ska:literal", "hybrid:3:4", "upper". Throws std::invalid_argument
/// with the offending token on anything else.
MethodSpec parse_method(const std::string& text);

double evaluate_bound(const MethodSpec& method, double q);

struct SweepRow {
  double q = 0.0;
  std::vector<double> values;  // one per requested method
};

/// Evaluates every method on the inclusive grid q_start, q_start + q_step, ...
/// (last point clamped to q_end when the step overshoots by under half a step).
std::vector<SweepRow> sweep_bounds(const std::vector<MethodSpec>& methods, double q_start,
                                   double q_end, double q_step);

}  // namespace otcap

#endif
