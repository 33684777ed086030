#include "otcap/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace otcap {

BitVec::BitVec(std::uint32_t word, int len) : word_(word), len_(len) {
  if (len < 0 || len > kMaxBitLen) {
    throw std::invalid_argument("BitVec length must be in [0, " +
                                std::to_string(kMaxBitLen) + "], got " + std::to_string(len));
  }
  if (len < 32 && (word >> len) != 0) {
    throw std::invalid_argument("BitVec word has bits beyond its length");
  }
}

BitVec BitVec::from_coords(const std::vector<int>& coords) {
  const int n = static_cast<int>(coords.size());
  std::uint32_t w = 0;
  for (int i = 0; i < n; ++i) {
    const int c = coords[static_cast<std::size_t>(i)];
    if (c != 0 && c != 1) throw std::invalid_argument("BitVec coordinates must be 0 or 1");
    w = (w << 1) | static_cast<std::uint32_t>(c);
  }
  return BitVec(w, n);
}

int BitVec::coord(int i) const {
  if (i < 0 || i >= len_) throw std::out_of_range("BitVec coordinate index out of range");
  return static_cast<int>((word_ >> (len_ - 1 - i)) & 1u);
}

int BitVec::weight() const { return std::popcount(word_); }

BitVec BitVec::operator^(const BitVec& o) const {
  if (len_ != o.len_) throw std::invalid_argument("BitVec xor needs equal lengths");
  return BitVec(word_ ^ o.word_, len_);
}

std::string BitVec::to_string() const {
  std::string out = "(";
  for (int i = 0; i < len_; ++i) {
    if (i) out += ',';
    out += static_cast<char>('0' + coord(i));
  }
  out += ')';
  return out;
}

int syndrome(const BitVec& x, const BitVec& c) {
  if (x.len() != c.len()) throw std::invalid_argument("syndrome needs equal lengths");
  return std::popcount(x.word() & c.word()) & 1;
}

GeneratorMatrix kronecker_generator(int s, int s_cap) {
  if (s < 1) throw std::invalid_argument("kronecker_generator needs s >= 1");
  if (s > s_cap) {
    throw std::invalid_argument("kronecker_generator: s=" + std::to_string(s) +
                                " exceeds the configured cap s_cap=" + std::to_string(s_cap));
  }
  if ((1 << s) > kMaxBitLen) {
    throw std::invalid_argument("kronecker_generator: block length 2^s exceeds the packed-word limit of " +
                                std::to_string(kMaxBitLen) + " bits");
  }
  const int n = 1 << s;
  // Kronecker power of [[1,0],[1,1]]: entry (r, c) = 1 iff c's bits cover r's
  // bits is the rule for the transpose; built here by direct doubling instead
  // to keep row/column conventions explicit.
  std::vector<std::uint32_t> col_bits(static_cast<std::size_t>(n), 0);
  col_bits[0] = 1;  // s=0 seed: 1x1 matrix [1], single column with its single row set
  int cur = 1;
  for (int step = 0; step < s; ++step) {
    // G_{2k} = [[G_k, 0], [G_k, G_k]] with rows packed LSB = row 0.
    std::vector<std::uint32_t> next(static_cast<std::size_t>(2 * cur), 0);
    for (int j = 0; j < cur; ++j) {
      const std::uint32_t g = col_bits[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(j)] = g | (g << cur);        // left block: top copy + bottom copy
      next[static_cast<std::size_t>(cur + j)] = g << cur;        // right block: bottom copy only
    }
    col_bits.swap(next);
    cur *= 2;
  }
  GeneratorMatrix gen;
  gen.s = s;
  gen.block_len = n;
  gen.cols.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    // Repack so that row 1 of the matrix is the first tuple coordinate.
    std::uint32_t w = 0;
    for (int r = 0; r < n; ++r) {
      w = (w << 1) | ((col_bits[static_cast<std::size_t>(j)] >> r) & 1u);
    }
    gen.cols.emplace_back(w, n);
  }
  return gen;
}

SubgroupChain::SubgroupChain(const GeneratorMatrix& gen) : SubgroupChain(gen.cols) {}

SubgroupChain::SubgroupChain(std::vector<BitVec> columns) : cols_(std::move(columns)) {
  if (cols_.empty()) throw std::invalid_argument("SubgroupChain needs at least one column");
  len_ = cols_.front().len();
  if (len_ < 1 || len_ > kMaxBitLen) {
    throw std::invalid_argument("SubgroupChain block length must be in [1, " +
                                std::to_string(kMaxBitLen) + "]");
  }
  for (const BitVec& c : cols_) {
    if (c.len() != len_) throw std::invalid_argument("SubgroupChain columns must share one length");
  }
  build();
}

void SubgroupChain::build() {
  // Levels 0..L where level t uses the first t columns as parity checks and
  // the last column is reserved (it would cut the chain down to {0}).
  const int num_levels = static_cast<int>(cols_.size());
  const bool materialize = len_ <= kMaterializeLen;
  profiles_.assign(static_cast<std::size_t>(num_levels),
                   std::vector<std::uint64_t>(static_cast<std::size_t>(len_) + 1, 0));
  coset_min_.assign(static_cast<std::size_t>(num_levels), BitVec());
  std::vector<bool> have_min(static_cast<std::size_t>(num_levels), false);
  if (materialize) members_.assign(static_cast<std::size_t>(num_levels), {});

  const std::uint32_t space = 1u << len_;
  for (std::uint32_t w = 0; w < space; ++w) {
    const BitVec x(w, len_);
    const int wt = x.weight();
    // Deepest level this word still belongs to.
    int depth = num_levels - 1;
    for (int t = 1; t < num_levels; ++t) {
      if (syndrome(x, cols_[static_cast<std::size_t>(t - 1)]) != 0) {
        depth = t - 1;
        break;
      }
    }
    for (int t = 0; t <= depth; ++t) {
      profiles_[static_cast<std::size_t>(t)][static_cast<std::size_t>(wt)]++;
      if (materialize) members_[static_cast<std::size_t>(t)].push_back(x);
    }
    const int fell_out_at = depth + 1;
    if (fell_out_at < num_levels && !have_min[static_cast<std::size_t>(fell_out_at)]) {
      // Ascending enumeration means the first word to fall out at level t is
      // the lexicographic minimum of that coset.
      coset_min_[static_cast<std::size_t>(fell_out_at)] = x;
      have_min[static_cast<std::size_t>(fell_out_at)] = true;
    }
  }
  for (int t = 1; t < num_levels; ++t) {
    if (!have_min[static_cast<std::size_t>(t)]) {
      throw std::logic_error("SubgroupChain: level " + std::to_string(t) +
                             " adds no new constraint (empty coset)");
    }
  }
}

bool SubgroupChain::contains(int t, const BitVec& x) const {
  if (t < 0 || t >= levels()) throw std::out_of_range("SubgroupChain level out of range");
  if (x.len() != len_) throw std::invalid_argument("SubgroupChain: wrong vector length");
  for (int j = 1; j <= t; ++j) {
    if (syndrome(x, cols_[static_cast<std::size_t>(j - 1)]) != 0) return false;
  }
  return true;
}

const std::vector<BitVec>& SubgroupChain::members(int t) const {
  if (t < 0 || t >= levels()) throw std::out_of_range("SubgroupChain level out of range");
  if (!materialized()) {
    throw std::logic_error("SubgroupChain: member lists are not materialized beyond length " +
                           std::to_string(kMaterializeLen));
  }
  return members_[static_cast<std::size_t>(t)];
}

const std::vector<std::uint64_t>& SubgroupChain::weight_profile(int t) const {
  if (t < 0 || t >= levels()) throw std::out_of_range("SubgroupChain level out of range");
  return profiles_[static_cast<std::size_t>(t)];
}

std::vector<std::uint64_t> SubgroupChain::coset_weight_profile(int t) const {
  if (t < 1 || t >= levels()) throw std::out_of_range("SubgroupChain coset level out of range");
  std::vector<std::uint64_t> out = profiles_[static_cast<std::size_t>(t - 1)];
  const auto& deeper = profiles_[static_cast<std::size_t>(t)];
  for (std::size_t w = 0; w < out.size(); ++w) out[w] -= deeper[w];
  return out;
}

const BitVec& SubgroupChain::min_coset_rep(int t) const {
  if (t < 1 || t >= levels()) throw std::out_of_range("SubgroupChain coset level out of range");
  return coset_min_[static_cast<std::size_t>(t)];
}

}  // namespace otcap
