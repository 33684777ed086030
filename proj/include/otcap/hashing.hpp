#ifndef OTCAP_HASHING_HPP
#define OTCAP_HASHING_HPP

#include <cstdint>
#include <vector>

#include "otcap/rng.hpp"

namespace otcap {

/// Bit strings are held one bit per byte (values 0/1); lengths stay small
/// enough here that packing would buy nothing but index arithmetic.
using Bits = std::vector<std::uint8_t>;

Bits random_bits(Prng& rng, int n);
bool bits_equal(const Bits& a, const Bits& b);
Bits xor_bits(const Bits& a, const Bits& b);

/// Toeplitz matrix-vector product over GF(2): out[i] = xor_j in[j] * seed[i - j + in_len - 1].
/// The seed supplies the in_len + out_len - 1 diagonals; a fresh uniform seed
/// makes this a 2-universal family with collision probability 2^-out_len.
Bits toeplitz_hash(const Bits& seed, const Bits& in, int out_len);

int toeplitz_seed_len(int in_len, int out_len);

/// Member of the surjective family [I | T]: the first out_len input bits pass
/// through, the remaining in_len - out_len bits enter through a Toeplitz
/// block T of shape out_len x (in_len - out_len). Needs in_len >= out_len and
/// a seed of in_len - 1 bits. Every member is onto, so a uniform input maps
/// to an exactly uniform output; with out_len == in_len the map is the
/// identity regardless of the seed.
Bits surjective_hash(const Bits& seed, const Bits& in, int out_len);

int surjective_seed_len(int in_len);

/// 128-bit value for packed hash outputs (reconciliation tags are at most
/// 128 bits wide at the block lengths this code accepts).
struct Hash128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  Hash128 operator^(const Hash128& o) const { return {lo ^ o.lo, hi ^ o.hi}; }
  void operator^=(const Hash128& o) { lo ^= o.lo; hi ^= o.hi; }
  bool operator==(const Hash128& o) const { return lo == o.lo && hi == o.hi; }
};

/// Toeplitz map with the output packed into a Hash128, exposed column-wise so
/// callers can xor per-input-bit contributions incrementally. Matches
/// toeplitz_hash bit for bit (output bit i lands in word i/64, bit i%64).
class PackedToeplitz {
 public:
  PackedToeplitz(const Bits& seed, int in_len, int out_len);

  int in_len() const { return in_len_; }
  int out_len() const { return out_len_; }
  const Hash128& column(int j) const { return cols_[static_cast<std::size_t>(j)]; }

  Hash128 apply(const Bits& in) const;

 private:
  int in_len_;
  int out_len_;
  std::vector<Hash128> cols_;
};

}  // namespace otcap

#endif
