#include "otcap/bounds.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "otcap/channels.hpp"

namespace otcap {

namespace {

void require_prob(double q, const char* who) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": q must be in [0,1]");
  }
}

void require_open_prob(double q, const char* who) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": q must be in (0,1)");
  }
}

template <std::size_t N>
double shannon(const std::array<double, N>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::uint64_t> binomial_row(int n) {
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int w = i; w >= 1; --w) row[static_cast<std::size_t>(w)] += row[static_cast<std::size_t>(w - 1)];
  }
  return row;
}

int parse_int_token(const std::string& tok, const std::string& whole) {
  if (tok.empty()) throw std::invalid_argument("malformed method: '" + whole + "'");
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed method: '" + whole + "'");
  }
  if (used != tok.size()) throw std::invalid_argument("malformed method: '" + whole + "'");
  return v;
}

}  // namespace

double binary_entropy(double p) {
  require_prob(p, "binary_entropy");
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double extension_bound(double q) {
  require_prob(q, "extension_bound");
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const double p1 = 2.0 * q * (1.0 - q);
  const double q1 = q * q / ((1.0 - q) * (1.0 - q) + q * q);
  return 0.5 * p1 * (1.0 - binary_entropy(q1));
}

double recursive_bound(double q, int depth) {
  require_prob(q, "recursive_bound");
  if (depth < 1) throw std::invalid_argument("recursive_bound: depth must be >= 1");
  if (q <= 0.0 || q >= 1.0) return 0.0;
  double total = 0.0;
  double factor = 1.0;
  double qt = q;
  for (int t = 1; t <= depth; ++t) {
    const double pt = 2.0 * qt * (1.0 - qt);
    const double qn = qt * qt / ((1.0 - qt) * (1.0 - qt) + qt * qt);
    total += factor * 0.5 * pt * (1.0 - binary_entropy(qn));
    factor *= 0.5 * (1.0 - 2.0 * pt);
    qt = qn;
  }
  return total;
}

double polar_bound(double q, int s) {
  require_prob(q, "polar_bound");
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const PolarAnalyzer& an = PolarAnalyzer::shared(s);
  const double n = static_cast<double>(an.block_len());
  double total = 0.0;
  double factor = 1.0;
  for (int t = 1; t <= an.rounds(); ++t) {
    const PolarRoundStats st = an.round_stats(q, t);
    if (st.erasure_prob > 0.5) break;
    total += factor * (st.erasure_prob / n) * std::max(0.0, st.h_bad - st.h_good);
    factor *= 1.0 - 2.0 * st.erasure_prob;
  }
  return total;
}

double hybrid_bound(double q, int switch_depth, int s) {
  require_prob(q, "hybrid_bound");
  if (switch_depth < 0) throw std::invalid_argument("hybrid_bound: switch depth must be >= 0");
  if (q <= 0.0 || q >= 1.0) return 0.0;
  double total = 0.0;
  double factor = 1.0;
  double qt = q;
  for (int t = 1; t <= switch_depth; ++t) {
    const double pt = 2.0 * qt * (1.0 - qt);
    const double qn = qt * qt / ((1.0 - qt) * (1.0 - qt) + qt * qt);
    total += factor * 0.5 * pt * (1.0 - binary_entropy(qn));
    factor *= 0.5 * (1.0 - 2.0 * pt);
    qt = qn;
  }
  return total + factor * polar_bound(qt, s);
}

double upper_bound(double q) {
  require_prob(q, "upper_bound");
  return binary_entropy(q);
}

double parity_odd_prob(double q, int j) {
  require_prob(q, "parity_odd_prob");
  if (j < 0) throw std::invalid_argument("parity_odd_prob: level must be >= 0");
  return 0.5 * (1.0 - std::pow(1.0 - 2.0 * q, static_cast<double>(std::uint64_t{1} << j)));
}

double both_odd_given_even(double q, int j) {
  require_open_prob(q, "both_odd_given_even");
  if (j < 1) throw std::invalid_argument("both_odd_given_even: level must be >= 1");
  const double p_half = parity_odd_prob(q, j - 1);
  const double p_full = parity_odd_prob(q, j);
  return p_half * p_half / (1.0 - p_full);
}

ParityEntropies parity_entropies(double q, int j) {
  require_open_prob(q, "parity_entropies");
  if (j < 0) throw std::invalid_argument("parity_entropies: level must be >= 0");
  ParityEntropies cur;  // j = 0: the parity is the bit itself
  for (int lvl = 1; lvl <= j; ++lvl) {
    const double qb = both_odd_given_even(q, lvl);
    ParityEntropies next;
    next.even = binary_entropy(qb) + (1.0 - qb) * 2.0 * cur.even + qb * 2.0 * cur.odd;
    next.odd = 1.0 + cur.even + cur.odd;
    cur = next;
  }
  return cur;
}

double parity_entropy_gap(double q, int j) {
  require_open_prob(q, "parity_entropy_gap");
  if (j < 0) throw std::invalid_argument("parity_entropy_gap: level must be >= 0");
  double d = 0.0;
  for (int lvl = 1; lvl <= j; ++lvl) {
    const double qb = both_odd_given_even(q, lvl);
    d = 1.0 - binary_entropy(qb) + (1.0 - 2.0 * qb) * d;
  }
  return d;
}

ParityEntropies parity_entropies_direct(double q, int j) {
  require_open_prob(q, "parity_entropies_direct");
  if (j < 0) throw std::invalid_argument("parity_entropies_direct: level must be >= 0");
  const int n = 1 << j;
  if (n > kMaxBitLen) {
    throw std::invalid_argument("parity_entropies_direct: block length 2^j exceeds " +
                                std::to_string(kMaxBitLen));
  }
  const std::vector<std::uint64_t> binom = binomial_row(n);
  std::vector<std::uint64_t> even(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::uint64_t> odd(static_cast<std::size_t>(n) + 1, 0);
  for (int w = 0; w <= n; ++w) {
    (w % 2 == 0 ? even : odd)[static_cast<std::size_t>(w)] = binom[static_cast<std::size_t>(w)];
  }
  ParityEntropies out;
  out.even = weight_class_entropy(even, n, q);
  out.odd = weight_class_entropy(odd, n, q);
  return out;
}

double first_round_term_closed(double q, int s) {
  require_prob(q, "first_round_term_closed");
  if (s < 1) throw std::invalid_argument("first_round_term_closed: need s >= 1");
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const double n = static_cast<double>(1 << s);
  double f = 0.0;
  double prod = 1.0;
  for (int i = 0; i < s; ++i) {
    const double qb = both_odd_given_even(q, s - i);
    f += prod * (1.0 - binary_entropy(qb));
    prod *= 1.0 - 2.0 * qb;
  }
  return f * parity_odd_prob(q, s) / n;
}

double first_round_term_enum(double q, int s) {
  require_prob(q, "first_round_term_enum");
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const PolarAnalyzer& an = PolarAnalyzer::shared(s);
  const PolarRoundStats st = an.round_stats(q, 1);
  return (st.erasure_prob / static_cast<double>(an.block_len())) * (st.h_bad - st.h_good);
}

double first_round_small_q_slope(int s) {
  const double q0 = 1e-6;
  const double step = 1e-7;
  return (first_round_term_closed(q0 + step, s) - first_round_term_closed(q0 - step, s)) /
         (2.0 * step);
}

double interactive_ska_bound(double q, SkaVariant variant) {
  require_prob(q, "interactive_ska_bound");
  if (q <= 0.0 || q >= 1.0) return 0.0;

  // Exact joint enumeration over length-4 words, coordinate 1 = MSB. The
  // three syndrome vectors below are the generator columns 2..4 at s = 2.
  constexpr int kC2 = 0b0101;
  constexpr int kC3 = 0b0011;
  constexpr int kC4 = 0b0001;
  const auto dot = [](int a, int b) { return std::popcount(static_cast<unsigned>(a & b)) & 1; };
  const auto pe = [q](int e) {
    const int w = std::popcount(static_cast<unsigned>(e));
    return std::pow(q, w) * std::pow(1.0 - q, 4 - w);
  };

  std::array<int, 8> even{};
  std::array<int, 8> odd{};
  int ne = 0;
  int no = 0;
  for (int v = 0; v < 16; ++v) {
    if (std::popcount(static_cast<unsigned>(v)) % 2 == 0) {
      even[static_cast<std::size_t>(ne++)] = v;
    } else {
      odd[static_cast<std::size_t>(no++)] = v;
    }
  }
  double z_even = 0.0;
  double z_odd = 0.0;
  for (int e : even) z_even += pe(e);
  for (int e : odd) z_odd += pe(e);
  const double p1 = z_odd;
  const double alpha = (pe(0) + pe(15)) / z_even;

  // Cost of announcing the two syndrome bits, given a non-erased observation.
  std::array<double, 64> ju{};  // (y << 2) | u1
  std::array<double, 16> py{};
  for (int x : even) {
    for (int e : even) {
      const int y = x ^ e;
      const int u1 = (dot(x, kC2) << 1) | dot(x, kC3);
      const double p = 0.125 * pe(e) / z_even;
      ju[static_cast<std::size_t>((y << 2) | u1)] += p;
      py[static_cast<std::size_t>(y)] += p;
    }
  }
  const double h_u1_given_y0 = shannon(ju) - shannon(py);

  // Cost of the conditional third syndrome bit (sent only when the receiver
  // reports the all-equal noise class).
  std::array<double, 96> jv{};  // ((y << 1) | u2) * 3 + u3, u3 in {0, 1, skip}
  std::array<double, 32> jc{};
  for (int x : even) {
    for (int e : even) {
      const int y = x ^ e;
      const int u2 = (dot(e, kC2) == 0 && dot(e, kC3) == 0) ? 1 : 0;
      const int u3 = u2 ? dot(x, kC4) : 2;
      const double p = 0.125 * pe(e) / z_even;
      jv[static_cast<std::size_t>(((y << 1) | u2) * 3 + u3)] += p;
      jc[static_cast<std::size_t>((y << 1) | u2)] += p;
    }
  }
  const double h_u3 = shannon(jv) - shannon(jc);

  // Equivocation of all announced bits at the other side, with the class
  // report replaced by an independent Bernoulli(alpha) stand-in.
  const bool erased_side = variant == SkaVariant::kErasureSide;
  const auto& cls = erased_side ? odd : even;
  const double zc = erased_side ? z_odd : z_even;
  std::array<double, 512> jw{};  // (((y << 1) | u2p) << 2 | u1) * ... packed below
  std::array<double, 32> jz{};
  for (int x : even) {
    for (int e : cls) {
      const int y = x ^ e;
      const int u1 = (dot(x, kC2) << 1) | dot(x, kC3);
      const double base = 0.125 * pe(e) / zc;
      for (int u2p = 0; u2p <= 1; ++u2p) {
        const double w = u2p ? alpha : 1.0 - alpha;
        const int u3p = u2p ? dot(x, kC4) : 2;
        const int key = ((((y << 1) | u2p) << 2) | u1) * 3 + u3p;
        jw[static_cast<std::size_t>(key)] += base * w;
        jz[static_cast<std::size_t>((y << 1) | u2p)] += base * w;
      }
    }
  }
  const double h_first = shannon(jw) - shannon(jz);

  const double gain_term = 0.25 * p1 * (h_first - h_u1_given_y0 - h_u3);
  const double base_term = first_round_term_enum(q, 2);
  return std::max(0.0, polar_bound(q, 2) - base_term + gain_term);
}

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::kExtension: return "extension";
    case Kind::kRecursive: return "recursive:" + std::to_string(depth);
    case Kind::kPolar: return "polar:" + std::to_string(s);
    case Kind::kSka: return "ska";
    case Kind::kSkaLiteral: return "ska:literal";
    case Kind::kHybrid: return "hybrid:" + std::to_string(depth) + ":" + std::to_string(s);
    case Kind::kUpper: return "upper";
  }
  return "?";
}

std::string MethodSpec::params() const {
  switch (kind) {
    case Kind::kExtension: return "";
    case Kind::kRecursive: return "T=" + std::to_string(depth);
    case Kind::kPolar: return "s=" + std::to_string(s);
    case Kind::kSka: return "variant=erasure-side";
    case Kind::kSkaLiteral: return "variant=literal";
    case Kind::kHybrid: return "T=" + std::to_string(depth) + ";s=" + std::to_string(s);
    case Kind::kUpper: return "";
  }
  return "";
}

MethodSpec parse_method(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, colon - start));
    start = colon + 1;
  }

  MethodSpec m;
  const std::string& head = parts[0];
  if (head == "extension" && parts.size() == 1) {
    m.kind = MethodSpec::Kind::kExtension;
    return m;
  }
  if (head == "upper" && parts.size() == 1) {
    m.kind = MethodSpec::Kind::kUpper;
    return m;
  }
  if (head == "ska") {
    if (parts.size() == 1) {
      m.kind = MethodSpec::Kind::kSka;
      return m;
    }
    if (parts.size() == 2 && parts[1] == "literal") {
      m.kind = MethodSpec::Kind::kSkaLiteral;
      return m;
    }
    throw std::invalid_argument("malformed method: '" + text + "'");
  }
  if (head == "recursive" && parts.size() == 2) {
    m.kind = MethodSpec::Kind::kRecursive;
    m.depth = parse_int_token(parts[1], text);
    if (m.depth < 1) throw std::invalid_argument("recursive depth must be >= 1 in '" + text + "'");
    return m;
  }
  if (head == "polar" && parts.size() == 2) {
    m.kind = MethodSpec::Kind::kPolar;
    m.s = parse_int_token(parts[1], text);
    if (m.s < 1) throw std::invalid_argument("cascade exponent must be >= 1 in '" + text + "'");
    return m;
  }
  if (head.rfind("polar-n", 0) == 0 && parts.size() == 1) {
    const int n = parse_int_token(head.substr(7), text);
    if (n < 2 || (n & (n - 1)) != 0) {
      throw std::invalid_argument("block length must be a power of two >= 2 in '" + text + "'");
    }
    m.kind = MethodSpec::Kind::kPolar;
    m.s = std::countr_zero(static_cast<unsigned>(n));
    return m;
  }
  if (head == "hybrid" && parts.size() == 3) {
    m.kind = MethodSpec::Kind::kHybrid;
    m.depth = parse_int_token(parts[1], text);
    m.s = parse_int_token(parts[2], text);
    if (m.depth < 0) throw std::invalid_argument("hybrid switch depth must be >= 0 in '" + text + "'");
    if (m.s < 1) throw std::invalid_argument("cascade exponent must be >= 1 in '" + text + "'");
    return m;
  }
  throw std::invalid_argument("unknown method: '" + text + "'");
}

double evaluate_bound(const MethodSpec& method, double q) {
  switch (method.kind) {
    case MethodSpec::Kind::kExtension: return extension_bound(q);
    case MethodSpec::Kind::kRecursive: return recursive_bound(q, method.depth);
    case MethodSpec::Kind::kPolar: return polar_bound(q, method.s);
    case MethodSpec::Kind::kSka: return interactive_ska_bound(q, SkaVariant::kErasureSide);
    case MethodSpec::Kind::kSkaLiteral: return interactive_ska_bound(q, SkaVariant::kLiteral);
    case MethodSpec::Kind::kHybrid: return hybrid_bound(q, method.depth, method.s);
    case MethodSpec::Kind::kUpper: return upper_bound(q);
  }
  throw std::logic_error("evaluate_bound: unhandled method kind");
}

std::vector<SweepRow> sweep_bounds(const std::vector<MethodSpec>& methods, double q_start,
                                   double q_end, double q_step) {
  if (!(q_start >= 0.0 && q_end <= 1.0 && q_start <= q_end)) {
    throw std::invalid_argument("sweep_bounds: need 0 <= q_start <= q_end <= 1");
  }
  if (!(q_step > 0.0)) throw std::invalid_argument("sweep_bounds: q_step must be positive");
  std::vector<SweepRow> rows;
  for (int k = 0;; ++k) {
    const double q_raw = q_start + static_cast<double>(k) * q_step;
    if (q_raw > q_end + 0.5 * q_step) break;
    SweepRow row;
    row.q = std::min(q_raw, q_end);
    row.values.reserve(methods.size());
    for (const MethodSpec& m : methods) row.values.push_back(evaluate_bound(m, row.q));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace otcap
