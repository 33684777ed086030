#ifndef OTCAP_GF2_HPP
#define OTCAP_GF2_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace otcap {

// Hard limit on vector length: packed words stay in 32 bits and full
// enumeration of {0,1}^len stays affordable.
inline constexpr int kMaxBitLen = 24;

// Member lists are materialized up to this length; longer chains fall back
// to streaming enumeration (weight profiles and coset minima still work).
inline constexpr int kMaterializeLen = 16;

// Default cap on the Kronecker exponent s (block length N = 2^s = 16).
inline constexpr int kDefaultSCap = 4;

/// Packed binary vector of fixed length. The first tuple coordinate is the
/// most significant bit, so comparing packed words compares tuples in
/// lexicographic order.
class BitVec {
 public:
  BitVec() : word_(0), len_(0) {}
  BitVec(std::uint32_t word, int len);
  static BitVec zero(int len) { return BitVec(0, len); }
  static BitVec from_coords(const std::vector<int>& coords);

  int len() const { return len_; }
  std::uint32_t word() const { return word_; }
  /// Value of coordinate i (0-based, coordinate 0 is the leftmost slot).
  int coord(int i) const;
  int weight() const;
  BitVec operator^(const BitVec& o) const;
  bool operator==(const BitVec& o) const { return word_ == o.word_ && len_ == o.len_; }
  bool operator<(const BitVec& o) const { return word_ < o.word_; }
  std::string to_string() const;  // "(0,1,0,1)"

 private:
  std::uint32_t word_;
  int len_;
};

/// Parity of the coordinatewise AND of x and c. Throws on length mismatch.
int syndrome(const BitVec& x, const BitVec& c);

/// Columns of F^{\otimes s} with F = [[1,0],[1,1]], in natural column order.
struct GeneratorMatrix {
  int s = 0;
  int block_len = 0;                // N = 2^s
  std::vector<BitVec> cols;         // cols[j] is column j+1, length N

  const BitVec& column(int j) const { return cols.at(static_cast<std::size_t>(j)); }
};

/// Builds F^{\otimes s}. Throws when s exceeds s_cap or the packed-word limit.
GeneratorMatrix kronecker_generator(int s, int s_cap = kDefaultSCap);

/// Nested subgroup chain cut out by successive parity constraints:
/// level 0 is the full space, level t adds the constraint x . col(t) = 0.
/// Construction walks all 2^len words once and records, per level, the
/// per-weight member counts, the lexicographic coset minima, and (for
/// len <= kMaterializeLen) the sorted member lists. Immutable afterwards.
class SubgroupChain {
 public:
  explicit SubgroupChain(const GeneratorMatrix& gen);
  explicit SubgroupChain(std::vector<BitVec> columns);

  int block_len() const { return len_; }
  /// Number of levels, i.e. valid t values are 0 .. levels()-1.
  int levels() const { return static_cast<int>(profiles_.size()); }
  bool materialized() const { return !members_.empty(); }

  /// Membership test by syndromes (works in both modes).
  bool contains(int t, const BitVec& x) const;
  /// Sorted member list of level t. Throws in streaming mode.
  const std::vector<BitVec>& members(int t) const;
  /// Count of level-t members per Hamming weight (size len+1).
  const std::vector<std::uint64_t>& weight_profile(int t) const;
  /// Per-weight counts of the coset carved out at level t (level t-1 minus
  /// level t), for t >= 1.
  std::vector<std::uint64_t> coset_weight_profile(int t) const;
  /// Lexicographic minimum of (level t-1) \ (level t), for t >= 1.
  const BitVec& min_coset_rep(int t) const;

  const BitVec& column(int j) const { return cols_.at(static_cast<std::size_t>(j)); }

 private:
  void build();

  int len_ = 0;
  std::vector<BitVec> cols_;
  std::vector<std::vector<BitVec>> members_;                // [t], empty in streaming mode
  std::vector<std::vector<std::uint64_t>> profiles_;        // [t][weight]
  std::vector<BitVec> coset_min_;                           // [t], t >= 1 (slot 0 unused)
};

inline const std::vector<BitVec>& subgroup_members(const SubgroupChain& chain, int t) {
  return chain.members(t);
}

}  // namespace otcap

#endif
