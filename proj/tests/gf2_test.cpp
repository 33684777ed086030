#include "doctest.h"
#include "otcap/gf2.hpp"

#include <stdexcept>

using namespace otcap;

TEST_CASE("packed vectors behave like tuples") {
  const BitVec v = BitVec::from_coords({0, 1, 0, 1});
  CHECK(v.len() == 4);
  CHECK(v.word() == 5u);
  CHECK(v.coord(0) == 0);
  CHECK(v.coord(1) == 1);
  CHECK(v.weight() == 2);
  CHECK(v.to_string() == "(0,1,0,1)");

  const BitVec w = BitVec::from_coords({1, 1, 0, 0});
  CHECK((v ^ w) == BitVec::from_coords({1, 0, 0, 1}));
  CHECK(v < w);  // word order is tuple order: 0101 = 5 < 1100 = 12
  CHECK_FALSE(w < v);

  CHECK(syndrome(w, v) == 1);
  CHECK(syndrome(v, v) == 0);
  CHECK_THROWS_AS(syndrome(v, BitVec(0, 3)), std::invalid_argument);
  CHECK_THROWS_AS(BitVec(8, 3), std::invalid_argument);
  CHECK_THROWS_AS(BitVec(0, kMaxBitLen + 1), std::invalid_argument);
  CHECK_THROWS_AS(BitVec::from_coords({0, 2}), std::invalid_argument);
}

TEST_CASE("Kronecker generator, s = 1 and s = 2") {
  const GeneratorMatrix g1 = kronecker_generator(1);
  REQUIRE(g1.block_len == 2);
  CHECK(g1.column(0) == BitVec::from_coords({1, 1}));
  CHECK(g1.column(1) == BitVec::from_coords({0, 1}));

  const GeneratorMatrix g2 = kronecker_generator(2);
  REQUIRE(g2.block_len == 4);
  CHECK(g2.column(0) == BitVec::from_coords({1, 1, 1, 1}));
  CHECK(g2.column(1) == BitVec::from_coords({0, 1, 0, 1}));
  CHECK(g2.column(2) == BitVec::from_coords({0, 0, 1, 1}));
  CHECK(g2.column(3) == BitVec::from_coords({0, 0, 0, 1}));

  CHECK_THROWS_AS(kronecker_generator(0), std::invalid_argument);
  CHECK_THROWS_AS(kronecker_generator(5), std::invalid_argument);
  CHECK_THROWS_AS(kronecker_generator(3, 2), std::invalid_argument);
}

TEST_CASE("subgroup chain at block length 4") {
  const SubgroupChain chain(kronecker_generator(2));
  REQUIRE(chain.levels() == 4);
  CHECK(chain.block_len() == 4);
  CHECK(chain.materialized());

  CHECK(chain.members(0).size() == 16);
  CHECK(chain.members(1).size() == 8);
  CHECK(chain.members(2).size() == 4);
  CHECK(chain.members(3).size() == 2);

  // level 3 keeps only the constant words
  CHECK(chain.members(3)[0].word() == 0u);
  CHECK(chain.members(3)[1].word() == 15u);

  // even-parity profile: one empty word, six weight-2, one full
  const auto& p1 = chain.weight_profile(1);
  CHECK(p1[0] == 1);
  CHECK(p1[1] == 0);
  CHECK(p1[2] == 6);
  CHECK(p1[4] == 1);
  const auto c1 = chain.coset_weight_profile(1);
  CHECK(c1[1] == 4);
  CHECK(c1[3] == 4);
  CHECK(c1[0] == 0);

  // first word falling out of each level, in tuple order
  CHECK(chain.min_coset_rep(1).word() == 1u);   // (0,0,0,1)
  CHECK(chain.min_coset_rep(2).word() == 3u);   // (0,0,1,1)
  CHECK(chain.min_coset_rep(3).word() == 5u);   // (0,1,0,1)

  CHECK(chain.contains(2, BitVec::from_coords({1, 0, 1, 0})));
  CHECK_FALSE(chain.contains(2, BitVec::from_coords({1, 1, 0, 0})));
  CHECK_THROWS_AS(chain.members(4), std::out_of_range);
  CHECK_THROWS_AS(chain.min_coset_rep(0), std::out_of_range);
}

TEST_CASE("shift vectors re-enter the survivor class") {
  // xoring the coset minimum onto any word of that coset lands in the next
  // level, which is what keeps the rounds in one reference frame
  const SubgroupChain chain(kronecker_generator(3));
  for (int t = 1; t < chain.levels(); ++t) {
    const BitVec& rep = chain.min_coset_rep(t);
    CHECK(chain.contains(t - 1, rep));
    CHECK_FALSE(chain.contains(t, rep));
    for (const BitVec& x : chain.members(t - 1)) {
      if (chain.contains(t, x)) continue;
      CHECK(chain.contains(t, x ^ rep));
    }
  }
}

TEST_CASE("streaming mode keeps profiles but not member lists") {
  // 18-bit space: too wide to materialize, profiles still exact
  std::vector<BitVec> cols;
  cols.push_back(BitVec((1u << 18) - 1, 18));  // overall parity
  cols.push_back(BitVec(1u, 18));              // last coordinate
  const SubgroupChain chain(cols);
  CHECK_FALSE(chain.materialized());
  CHECK_THROWS_AS(chain.members(0), std::logic_error);

  std::uint64_t total = 0;
  for (std::uint64_t c : chain.weight_profile(1)) total += c;
  CHECK(total == (1u << 17));
  CHECK(chain.weight_profile(1)[0] == 1);
  CHECK(chain.contains(1, BitVec(3u << 16, 18)));
  CHECK(chain.min_coset_rep(1).word() == 1u);
}
