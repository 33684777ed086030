#include "doctest.h"
#include "otcap/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

using namespace otcap;
using doctest::Approx;

TEST_CASE("doubled-bit erasure channel at q = 0.1") {
  const GecChannel ch = bsec_from_extension(0.1);
  REQUIRE(ch.has_matrix());
  const GecStats& st = ch.stats();
  CHECK(st.erasure_prob == Approx(0.18).epsilon(1e-12));
  CHECK(st.h_good == Approx(0.09501724567107636).epsilon(1e-12));
  CHECK(st.h_bad == Approx(1.0).epsilon(1e-12));
  CHECK(st.survive_mass == Approx(0.82).epsilon(1e-12));

  // two codeword inputs, four raw outputs, the mixed pair erased
  CHECK(ch.dmc().num_inputs == 2);
  CHECK(ch.dmc().num_outputs == 4);
  CHECK(ch.erasure_outputs().size() == 2);
  CHECK(ch.dmc().at(0, 0) == Approx(0.81));
  CHECK(ch.dmc().at(0, 3) == Approx(0.01));

  CHECK_THROWS_AS(bsec_from_extension(0.0), std::invalid_argument);
  CHECK_THROWS_AS(bsec_from_extension(1.0), std::invalid_argument);
}

TEST_CASE("decomposition rejects non-erasure partitions") {
  // erasure mass differs per input: 0.3 for x=0, 0.5 for x=1
  Dmc w;
  w.num_inputs = 2;
  w.num_outputs = 2;
  w.probs = {0.7, 0.3, 0.5, 0.5};
  const std::vector<double> uniform = {0.5, 0.5};
  try {
    GecChannel::decompose(w, uniform, {1});
    FAIL("expected a rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("not a generalized erasure channel") != std::string::npos);
  }

  // constant but above 1/2
  Dmc heavy;
  heavy.num_inputs = 2;
  heavy.num_outputs = 2;
  heavy.probs = {0.3, 0.7, 0.3, 0.7};
  try {
    GecChannel::decompose(heavy, uniform, {1});
    FAIL("expected a rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("unsupported erasure regime") != std::string::npos);
  }
}

TEST_CASE("a column may vary with the input as long as the class sum does not") {
  // two erasure outputs whose individual probabilities depend on x but whose
  // sum is 0.4 for both inputs; this is the "generalized" part
  Dmc w;
  w.num_inputs = 2;
  w.num_outputs = 3;
  w.probs = {0.6, 0.1, 0.3,
             0.6, 0.3, 0.1};
  const GecStats st = GecChannel::decompose(w, {0.5, 0.5}, {1, 2});
  CHECK(st.erasure_prob == Approx(0.4).epsilon(1e-12));
  CHECK(st.h_good == Approx(1.0).epsilon(1e-12));  // survivors carry no information here
}

TEST_CASE("weight-class helpers") {
  // counts {1,0,1} over 2 bits: the doubled-bit survivor class
  const std::vector<std::uint64_t> counts = {1, 0, 1};
  CHECK(weight_class_mass(counts, 2, 0.1) == Approx(0.82).epsilon(1e-12));
  CHECK(weight_class_entropy(counts, 2, 0.1) ==
        Approx(0.09501724567107636).epsilon(1e-10));
}

TEST_CASE("cascade round statistics at block length 4, q = 0.1") {
  const PolarAnalyzer& an = PolarAnalyzer::shared(2);
  REQUIRE(an.rounds() == 3);
  const double expect[3][3] = {
      {0.2952, 0.5422662510239928, 2.0950172456710763},
      {0.045970488081725325, 0.19003449134215258, 2.0},
      {0.024092801903628835, 0.0021521647342006376, 1.0},
  };
  for (int t = 1; t <= 3; ++t) {
    const PolarRoundStats st = an.round_stats(0.1, t);
    CHECK(st.erasure_prob == Approx(expect[t - 1][0]).epsilon(1e-10));
    CHECK(st.h_good == Approx(expect[t - 1][1]).epsilon(1e-10));
    CHECK(st.h_bad == Approx(expect[t - 1][2]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(an.round_stats(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(an.round_stats(0.1, 0), std::out_of_range);
}

TEST_CASE("explicit round channels decompose back to the profile statistics") {
  const PolarAnalyzer& an = PolarAnalyzer::shared(2);
  for (int t = 1; t <= an.rounds(); ++t) {
    const GecChannel ch = an.round_channel(0.1, t);
    REQUIRE(ch.has_matrix());
    const PolarRoundStats st = an.round_stats(0.1, t);
    CHECK(ch.stats().erasure_prob == Approx(st.erasure_prob).epsilon(1e-12));
    CHECK(ch.stats().h_good == Approx(st.h_good).epsilon(1e-12));
    CHECK(ch.stats().h_bad == Approx(st.h_bad).epsilon(1e-12));
  }
}

TEST_CASE("oversized round channels drop to summary form") {
  const PolarAnalyzer& an = PolarAnalyzer::shared(4);
  const GecChannel ch = an.round_channel(0.1, 1);
  CHECK_FALSE(ch.has_matrix());
  CHECK_THROWS_AS(ch.dmc(), std::logic_error);
  const PolarRoundStats st = an.round_stats(0.1, 1);
  CHECK(ch.stats().erasure_prob == Approx(st.erasure_prob).epsilon(1e-12));
  CHECK(ch.input_log2() == Approx(16.0));
}

TEST_CASE("noise statistics are symmetric in q <-> 1-q") {
  const PolarAnalyzer& an = PolarAnalyzer::shared(3);
  for (double q : {0.05, 0.2, 0.45}) {
    for (int t = 1; t <= an.rounds(); ++t) {
      const PolarRoundStats lo = an.round_stats(q, t);
      const PolarRoundStats hi = an.round_stats(1.0 - q, t);
      CHECK(lo.erasure_prob == Approx(hi.erasure_prob).epsilon(1e-12));
      CHECK(lo.h_good == Approx(hi.h_good).epsilon(1e-12));
      CHECK(lo.h_bad == Approx(hi.h_bad).epsilon(1e-12));
    }
  }
}
