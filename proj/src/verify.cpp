#include "otcap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "otcap/bounds.hpp"
#include "otcap/channels.hpp"
#include "otcap/report.hpp"

namespace otcap {

namespace {

const double kQGrid[] = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.49};

struct DevTracker {
  double max_dev = 0.0;
  std::string detail;

  void note(double dev, const std::string& where) {
    if (dev > max_dev) {
      max_dev = dev;
      detail = where;
    }
  }
};

CheckResult finish(const std::string& name, const DevTracker& dt, double tol) {
  CheckResult r;
  r.name = name;
  r.max_dev = dt.max_dev;
  r.tol = tol;
  r.pass = dt.max_dev <= tol;
  r.detail = dt.detail;
  return r;
}

std::string at_q(double q) { return "q=" + format_g12(q); }

/// Round statistics of the block-length-4 cascade, worked out by hand from
/// the 16 noise words. Round 1 splits on overall parity; the survivor class
/// after round 2 is the four words of the form (u,v,u,v); after round 3 only
/// the constant words remain.
void block4_forms(double q, double out[3][3]) {
  const double a = std::pow(1.0 - q, 4);   // weight 0
  const double b = q * q * (1.0 - q) * (1.0 - q);  // one weight-2 word
  const double c = std::pow(q, 4);         // weight 4
  const double z_even = a + 6.0 * b + c;
  const double q1 = q * q / ((1.0 - q) * (1.0 - q) + q * q);

  // round 1: erased class = odd parity
  out[0][0] = 0.5 * (1.0 - std::pow(1.0 - 2.0 * q, 4));
  {
    // survivors: entropy of the even class; carved: odd class
    const double pa = a / z_even, pb = b / z_even, pc = c / z_even;
    out[0][1] = -(pa * std::log2(pa) + 6.0 * pb * std::log2(pb) + pc * std::log2(pc));
    const double d = q * (1.0 - q);  // weight-1/3 words come in fours
    const double z_odd = 4.0 * d * ((1.0 - q) * (1.0 - q) + q * q);
    const double p1w = d * (1.0 - q) * (1.0 - q) / z_odd;
    const double p3w = d * q * q / z_odd;
    out[0][2] = -(4.0 * p1w * std::log2(p1w) + 4.0 * p3w * std::log2(p3w));
  }

  // round 2: survivors (u,v,u,v) carry two independent doubled bits
  out[1][0] = 4.0 * b / z_even;
  out[1][1] = 2.0 * binary_entropy(q1);
  out[1][2] = 2.0;  // carved coset: four equiprobable weight-2 words

  // round 3: survivors are the constant words
  const double z2 = a + 2.0 * b + c;
  out[2][0] = 2.0 * b / z2;
  out[2][1] = binary_entropy(c / (a + c));
  out[2][2] = 1.0;  // carved coset: 0101 and 1010
}

/// First-round term of the interactive scheme in closed form (independent of
/// the message-by-message enumeration in interactive_ska_bound).
double interactive_first_term_closed(double q) {
  const double a = std::pow(1.0 - q, 4);
  const double b = q * q * (1.0 - q) * (1.0 - q);
  const double c = std::pow(q, 4);
  const double z0 = a + 6.0 * b + c;
  const double alpha = (a + c) / z0;
  const double q1 = q * q / ((1.0 - q) * (1.0 - q) + q * q);
  const double qt = c / (a + c);
  const double pair = 2.0 * b / z0;
  const double h_pair = -(alpha * std::log2(alpha) + 3.0 * pair * std::log2(pair));
  const double gap = 2.0 + alpha * binary_entropy(q1) - h_pair - alpha * binary_entropy(qt);
  const double p1 = 4.0 * q * (1.0 - q) * ((1.0 - q) * (1.0 - q) + q * q);
  return 0.25 * p1 * gap;
}

}  // namespace

std::vector<CheckResult> run_consistency_battery(int s_max, double tol) {
  if (s_max < 1 || s_max > kDefaultSCap) {
    throw std::invalid_argument("run_consistency_battery: s_max must be in [1, " +
                                std::to_string(kDefaultSCap) + "]");
  }
  std::vector<CheckResult> out;

  if (s_max >= 2) {  // hand-derived round statistics at block length 4
    DevTracker dt;
    const PolarAnalyzer& an = PolarAnalyzer::shared(2);
    for (double q : kQGrid) {
      double forms[3][3];
      block4_forms(q, forms);
      for (int t = 1; t <= 3; ++t) {
        const PolarRoundStats st = an.round_stats(q, t);
        dt.note(std::abs(st.erasure_prob - forms[t - 1][0]), at_q(q) + " t=" + std::to_string(t) + " p");
        dt.note(std::abs(st.h_good - forms[t - 1][1]), at_q(q) + " t=" + std::to_string(t) + " h_good");
        dt.note(std::abs(st.h_bad - forms[t - 1][2]), at_q(q) + " t=" + std::to_string(t) + " h_bad");
      }
    }
    out.push_back(finish("block4-round-forms", dt, tol));
  }

  {  // closed-form first round vs chain enumeration
    DevTracker dt;
    for (int s = 1; s <= s_max; ++s) {
      for (double q : kQGrid) {
        const double dev = std::abs(first_round_term_closed(q, s) - first_round_term_enum(q, s));
        dt.note(dev, at_q(q) + " s=" + std::to_string(s));
      }
    }
    out.push_back(finish("first-term-routes", dt, tol));
  }

  {  // d/dq of the first-round term at q -> 0 approaches s
    DevTracker dt;
    for (int s = 1; s <= s_max; ++s) {
      dt.note(std::abs(first_round_small_q_slope(s) - s), "s=" + std::to_string(s));
    }
    out.push_back(finish("small-q-slopes", dt, 0.05));
  }

  {  // parity entropies: halving recursion vs direct enumeration vs gap form
    DevTracker dt;
    for (int j = 1; j <= 4; ++j) {
      for (double q : kQGrid) {
        const ParityEntropies rec = parity_entropies(q, j);
        const ParityEntropies dir = parity_entropies_direct(q, j);
        dt.note(std::abs(rec.even - dir.even), at_q(q) + " j=" + std::to_string(j) + " even");
        dt.note(std::abs(rec.odd - dir.odd), at_q(q) + " j=" + std::to_string(j) + " odd");
        dt.note(std::abs((rec.odd - rec.even) - parity_entropy_gap(q, j)),
                at_q(q) + " j=" + std::to_string(j) + " gap");
      }
    }
    // the recursion's round-1 entropies are the chain's round-1 entropies
    for (int s = 1; s <= s_max; ++s) {
      const PolarAnalyzer& an = PolarAnalyzer::shared(s);
      for (double q : kQGrid) {
        const PolarRoundStats st = an.round_stats(q, 1);
        const ParityEntropies pe = parity_entropies(q, s);
        dt.note(std::abs(st.h_good - pe.even), at_q(q) + " s=" + std::to_string(s) + " chain even");
        dt.note(std::abs(st.h_bad - pe.odd), at_q(q) + " s=" + std::to_string(s) + " chain odd");
      }
    }
    out.push_back(finish("parity-entropy-routes", dt, tol));
  }

  {  // one-level reductions coincide
    DevTracker dt;
    for (int i = 0; i <= 200; ++i) {
      const double q = 0.0025 + (0.4975 - 0.0025) * i / 200.0;
      const double ext = extension_bound(q);
      dt.note(std::abs(ext - recursive_bound(q, 1)), at_q(q) + " recursive:1");
      dt.note(std::abs(ext - polar_bound(q, 1)), at_q(q) + " polar:1");
    }
    out.push_back(finish("reduction-chain", dt, tol));
  }

  {  // explicit round channels decompose to the profile statistics
    DevTracker dt;
    for (int s = 1; s <= std::min(s_max, 3); ++s) {
      const PolarAnalyzer& an = PolarAnalyzer::shared(s);
      for (double q : {0.1, 0.3}) {
        for (int t = 1; t <= an.rounds(); ++t) {
          const GecChannel ch = an.round_channel(q, t);
          if (!ch.has_matrix()) continue;
          const PolarRoundStats st = an.round_stats(q, t);
          const std::string where = at_q(q) + " s=" + std::to_string(s) + " t=" + std::to_string(t);
          dt.note(std::abs(ch.stats().erasure_prob - st.erasure_prob), where + " p");
          dt.note(std::abs(ch.stats().h_good - st.h_good), where + " h_good");
          dt.note(std::abs(ch.stats().h_bad - st.h_bad), where + " h_bad");
        }
      }
    }
    out.push_back(finish("round-channel-decompose", dt, tol));
  }

  {  // noise statistics are symmetric under q <-> 1-q
    DevTracker dt;
    for (int s = 1; s <= s_max; ++s) {
      const PolarAnalyzer& an = PolarAnalyzer::shared(s);
      for (double q : {0.05, 0.2, 0.35}) {
        for (int t = 1; t <= an.rounds(); ++t) {
          const PolarRoundStats lo = an.round_stats(q, t);
          const PolarRoundStats hi = an.round_stats(1.0 - q, t);
          const std::string where = at_q(q) + " s=" + std::to_string(s) + " t=" + std::to_string(t);
          dt.note(std::abs(lo.erasure_prob - hi.erasure_prob), where + " p");
          dt.note(std::abs(lo.h_good - hi.h_good), where + " h_good");
          dt.note(std::abs(lo.h_bad - hi.h_bad), where + " h_bad");
        }
      }
    }
    out.push_back(finish("noise-symmetry", dt, tol));
  }

  {  // survival probabilities telescope into the class masses
    DevTracker dt;
    for (int s = 1; s <= s_max; ++s) {
      const PolarAnalyzer& an = PolarAnalyzer::shared(s);
      const SubgroupChain& chain = an.chain();
      const int n = an.block_len();
      for (double q : kQGrid) {
        double running = 1.0;
        for (int t = 1; t <= an.rounds(); ++t) {
          const PolarRoundStats st = an.round_stats(q, t);
          running *= 1.0 - st.erasure_prob;
          const std::string where = at_q(q) + " s=" + std::to_string(s) + " t=" + std::to_string(t);
          dt.note(std::abs(running - st.survive_mass), where + " telescoped");
          const double direct = weight_class_mass(chain.weight_profile(t), n, q);
          dt.note(std::abs(direct - st.survive_mass), where + " profile");
        }
      }
    }
    out.push_back(finish("survival-telescoping", dt, tol));
  }

  {  // every lower bound stays below the upper bound
    DevTracker dt;
    std::vector<MethodSpec> methods = {parse_method("extension"), parse_method("recursive:5")};
    if (s_max >= 2) {
      methods.push_back(parse_method("polar:2"));
      methods.push_back(parse_method("ska"));
      methods.push_back(parse_method("ska:literal"));
    }
    if (s_max >= 3) methods.push_back(parse_method("polar:3"));
    if (s_max >= 4) {
      methods.push_back(parse_method("polar:4"));
      methods.push_back(parse_method("hybrid:3:4"));
    }
    for (int i = 1; i <= 99; ++i) {
      const double q = i / 200.0;
      const double cap = upper_bound(q);
      for (const MethodSpec& m : methods) {
        const double v = evaluate_bound(m, q);
        dt.note(std::max(0.0, v - cap), at_q(q) + " " + m.label());
      }
    }
    out.push_back(finish("upper-dominance", dt, tol));
  }

  if (s_max >= 2) {  // interactive gain: enumerated exchange vs the closed
                     // chain form and vs the plain first round plus its
                     // explicit improvement
    DevTracker dt;
    for (double q : kQGrid) {
      const double improved = interactive_ska_bound(q);
      const double base = polar_bound(q, 2);
      const double replaced = base - first_round_term_enum(q, 2) + interactive_first_term_closed(q);
      dt.note(std::abs(improved - replaced), at_q(q) + " chain form");

      const double a = std::pow(1.0 - q, 4);
      const double b = q * q * (1.0 - q) * (1.0 - q);
      const double c = std::pow(q, 4);
      const double alpha = (a + c) / (a + 6.0 * b + c);
      const double q1 = q * q / ((1.0 - q) * (1.0 - q) + q * q);
      const double p1 = 4.0 * q * (1.0 - q) * ((1.0 - q) * (1.0 - q) + q * q);
      const double increment = 0.25 * p1 * (1.0 - alpha) * (1.0 - binary_entropy(q1));
      dt.note(std::abs(interactive_first_term_closed(q) -
                       (first_round_term_closed(q, 2) + increment)),
              at_q(q) + " increment form");
      dt.note(std::max(0.0, base - improved), at_q(q) + " dominance");
    }
    out.push_back(finish("interactive-gain-identity", dt, tol));
  }

  return out;
}

}  // namespace otcap
