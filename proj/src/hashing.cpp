#include "otcap/hashing.hpp"

#include <stdexcept>
#include <string>

namespace otcap {

Bits random_bits(Prng& rng, int n) {
  Bits out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.next_bit());
  return out;
}

bool bits_equal(const Bits& a, const Bits& b) { return a == b; }

Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

int toeplitz_seed_len(int in_len, int out_len) {
  if (in_len < 0 || out_len < 0) throw std::invalid_argument("toeplitz_seed_len: negative length");
  if (in_len == 0 || out_len == 0) return 0;
  return in_len + out_len - 1;
}

Bits toeplitz_hash(const Bits& seed, const Bits& in, int out_len) {
  const int in_len = static_cast<int>(in.size());
  if (out_len < 0) throw std::invalid_argument("toeplitz_hash: negative output length");
  const int need = toeplitz_seed_len(in_len, out_len);
  if (static_cast<int>(seed.size()) != need) {
    throw std::invalid_argument("toeplitz_hash: seed length " + std::to_string(seed.size()) +
                                ", expected " + std::to_string(need));
  }
  Bits out(static_cast<std::size_t>(out_len), 0);
  for (int j = 0; j < in_len; ++j) {
    if (!in[static_cast<std::size_t>(j)]) continue;
    const int base = in_len - 1 - j;
    for (int i = 0; i < out_len; ++i) {
      out[static_cast<std::size_t>(i)] ^= seed[static_cast<std::size_t>(base + i)];
    }
  }
  return out;
}

int surjective_seed_len(int in_len) {
  if (in_len < 1) throw std::invalid_argument("surjective_seed_len: need in_len >= 1");
  return in_len - 1;
}

Bits surjective_hash(const Bits& seed, const Bits& in, int out_len) {
  const int in_len = static_cast<int>(in.size());
  if (out_len < 0 || out_len > in_len) {
    throw std::invalid_argument("surjective_hash: output length must be in [0, in_len]");
  }
  if (out_len == 0) return {};
  if (static_cast<int>(seed.size()) != surjective_seed_len(in_len)) {
    throw std::invalid_argument("surjective_hash: seed length " + std::to_string(seed.size()) +
                                ", expected " + std::to_string(surjective_seed_len(in_len)));
  }
  Bits out(in.begin(), in.begin() + out_len);
  const int tail = in_len - out_len;
  if (tail == 0) return out;
  // Toeplitz block reuses the same diagonal convention as toeplitz_hash with
  // tail + out_len - 1 = in_len - 1 seed bits.
  for (int j = 0; j < tail; ++j) {
    if (!in[static_cast<std::size_t>(out_len + j)]) continue;
    const int base = tail - 1 - j;
    for (int i = 0; i < out_len; ++i) {
      out[static_cast<std::size_t>(i)] ^= seed[static_cast<std::size_t>(base + i)];
    }
  }
  return out;
}

PackedToeplitz::PackedToeplitz(const Bits& seed, int in_len, int out_len)
    : in_len_(in_len), out_len_(out_len) {
  if (out_len < 0 || out_len > 128) {
    throw std::invalid_argument("PackedToeplitz: output width must be in [0, 128] bits");
  }
  if (static_cast<int>(seed.size()) != toeplitz_seed_len(in_len, out_len)) {
    throw std::invalid_argument("PackedToeplitz: bad seed length");
  }
  cols_.resize(static_cast<std::size_t>(in_len));
  for (int j = 0; j < in_len; ++j) {
    Hash128 col;
    const int base = in_len - 1 - j;
    for (int i = 0; i < out_len; ++i) {
      if (!seed[static_cast<std::size_t>(base + i)]) continue;
      if (i < 64) {
        col.lo |= 1ULL << i;
      } else {
        col.hi |= 1ULL << (i - 64);
      }
    }
    cols_[static_cast<std::size_t>(j)] = col;
  }
}

Hash128 PackedToeplitz::apply(const Bits& in) const {
  if (static_cast<int>(in.size()) != in_len_) {
    throw std::invalid_argument("PackedToeplitz: input length mismatch");
  }
  Hash128 acc;
  for (int j = 0; j < in_len_; ++j) {
    if (in[static_cast<std::size_t>(j)]) acc ^= cols_[static_cast<std::size_t>(j)];
  }
  return acc;
}

}  // namespace otcap
