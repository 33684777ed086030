#ifndef OTCAP_CHANNELS_HPP
#define OTCAP_CHANNELS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "otcap/gf2.hpp"

namespace otcap {

inline constexpr double kProbTol = 1e-12;
// Largest explicit transition matrix (entries) a round channel will build;
// beyond this only the summary statistics are carried.
inline constexpr std::size_t kMaxExplicitEntries = std::size_t{1} << 21;

/// Discrete memoryless channel, transition matrix in row-major layout.
struct Dmc {
  int num_inputs = 0;
  int num_outputs = 0;
  std::vector<double> probs;

  double at(int x, int y) const {
    return probs[static_cast<std::size_t>(x) * static_cast<std::size_t>(num_outputs) +
                 static_cast<std::size_t>(y)];
  }
  double& at(int x, int y) {
    return probs[static_cast<std::size_t>(x) * static_cast<std::size_t>(num_outputs) +
                 static_cast<std::size_t>(y)];
  }
  /// Throws unless every row is a probability vector (tolerance kProbTol).
  void validate() const;
};

/// Binary symmetric channel with crossover q in [0, 1].
Dmc bsc(double q);

/// Erasure-style summary of a channel: probability of landing in the erasure
/// output class plus the two conditional input entropies.
struct GecStats {
  double erasure_prob = 0.0;   // input-independent by definition
  double h_good = 0.0;         // H(X | Y, Y outside the erasure class)
  double h_bad = 0.0;          // H(X | Y, Y inside the erasure class)
  double survive_mass = 1.0;   // unconditional P(Y outside the erasure class), bookkeeping aid
};

/// H(X | Y restricted to the given output class) for input distribution px.
double conditional_entropy_on_class(const Dmc& w, const std::vector<double>& px,
                                    const std::vector<int>& output_class);

/// Entropy of a weight-class distribution: members counted per Hamming weight
/// by `counts`, each weight-w member carrying mass q^w (1-q)^(n-w), normalized.
double weight_class_entropy(const std::vector<std::uint64_t>& counts, int n, double q);

/// Total unnormalized mass sum_w counts[w] q^w (1-q)^(n-w).
double weight_class_mass(const std::vector<std::uint64_t>& counts, int n, double q);

/// A channel whose outputs split into a declared erasure class hit with an
/// input-independent probability. Holds either the full transition matrix or
/// only the summary statistics when the alphabet is too large to tabulate.
class GecChannel {
 public:
  /// Validates the partition and computes the summary. Throws
  /// std::invalid_argument "not a generalized erasure channel" when the
  /// erasure-class probability varies with the input, and "unsupported
  /// erasure regime" when that probability is 0 or above 1/2.
  static GecChannel from_dmc(Dmc w, std::vector<double> input_dist,
                             std::vector<int> erasure_outputs);
  /// Summary-only channel over an input alphabet of 2^input_log2 symbols.
  static GecChannel from_stats(GecStats stats, double input_log2);

  /// Partition validation + summary computation for an explicit matrix.
  static GecStats decompose(const Dmc& w, const std::vector<double>& input_dist,
                            const std::vector<int>& erasure_outputs);

  bool has_matrix() const { return dmc_.has_value(); }
  const Dmc& dmc() const;
  const std::vector<double>& input_dist() const;
  const std::vector<int>& erasure_outputs() const;
  const GecStats& stats() const { return stats_; }
  double input_log2() const { return input_log2_; }

 private:
  GecChannel() = default;

  std::optional<Dmc> dmc_;
  std::vector<double> input_dist_;
  std::vector<int> erasure_outputs_;
  GecStats stats_;
  double input_log2_ = 0.0;
};

/// The erasure channel obtained by sending each input bit twice through a
/// BSC(q) and declaring the disagreeing outputs erasures. Inputs are the two
/// codewords 00/11; outputs are 00, 01, 10, 11. Rejects q in {0, 1} (the
/// erasure class would be empty).
GecChannel bsec_from_extension(double q);

/// Per-round summary of the nested-subgroup cascade.
struct PolarRoundStats {
  int t = 0;
  double erasure_prob = 0.0;  // P(noise word leaves level t | it was in level t-1)
  double h_good = 0.0;        // noise entropy inside level t
  double h_bad = 0.0;         // noise entropy on the carved-out coset
  double survive_mass = 0.0;  // unconditional P(noise word in level t)
};

/// Precomputed cascade data for block length N = 2^s: the generator columns,
/// the subgroup chain with weight profiles, and the per-round shift vectors
/// (lexicographic coset minima). Round statistics for a given q are simple
/// weight sums over the cached profiles, so they are exact and cheap.
class PolarAnalyzer {
 public:
  explicit PolarAnalyzer(int s, int s_cap = kDefaultSCap);

  int s() const { return s_; }
  int block_len() const { return chain_.block_len(); }
  int rounds() const { return chain_.levels() - 1; }
  const SubgroupChain& chain() const { return chain_; }
  const GeneratorMatrix& generator() const { return gen_; }
  /// Shift vector applied when the round-t constraint fails: the smallest
  /// word of (level t-1) \ (level t). Adding it maps that coset back into
  /// level t, which is how later rounds keep a canonical reference frame.
  const BitVec& shift(int t) const { return chain_.min_coset_rep(t); }

  PolarRoundStats round_stats(double q, int t) const;
  std::vector<PolarRoundStats> all_round_stats(double q) const;

  /// Round-t channel as a GecChannel: explicit matrix when it fits within
  /// kMaxExplicitEntries, summary-only otherwise. Inputs and outputs are
  /// indexed by the sorted member list of level t-1; output ids above the
  /// member count carry the erasure flag.
  GecChannel round_channel(double q, int t) const;

  /// Process-wide cache, one analyzer per s.
  static const PolarAnalyzer& shared(int s);

 private:
  int s_;
  GeneratorMatrix gen_;
  SubgroupChain chain_;
};

}  // namespace otcap

#endif
