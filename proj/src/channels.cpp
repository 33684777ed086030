#include "otcap/channels.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace otcap {

namespace {

double clamp_entropy(double h) { return h < 0.0 && h > -1e-9 ? 0.0 : h; }

}  // namespace

void Dmc::validate() const {
  if (num_inputs < 1 || num_outputs < 1) throw std::invalid_argument("Dmc: empty alphabet");
  if (probs.size() != static_cast<std::size_t>(num_inputs) * static_cast<std::size_t>(num_outputs)) {
    throw std::invalid_argument("Dmc: matrix size does not match alphabets");
  }
  for (int x = 0; x < num_inputs; ++x) {
    double row = 0.0;
    for (int y = 0; y < num_outputs; ++y) {
      const double v = at(x, y);
      if (v < -kProbTol || v > 1.0 + kProbTol) {
        throw std::invalid_argument("Dmc: entry out of [0,1] at row " + std::to_string(x));
      }
      row += v;
    }
    if (std::abs(row - 1.0) > kProbTol * static_cast<double>(num_outputs)) {
      throw std::invalid_argument("Dmc: row " + std::to_string(x) + " sums to " + std::to_string(row));
    }
  }
}

Dmc bsc(double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("bsc: crossover must be in [0,1]");
  Dmc w;
  w.num_inputs = 2;
  w.num_outputs = 2;
  w.probs = {1.0 - q, q, q, 1.0 - q};
  return w;
}

double conditional_entropy_on_class(const Dmc& w, const std::vector<double>& px,
                                    const std::vector<int>& output_class) {
  if (static_cast<int>(px.size()) != w.num_inputs) {
    throw std::invalid_argument("conditional_entropy_on_class: input dist size mismatch");
  }
  double mass = 0.0;
  double acc = 0.0;
  for (int y : output_class) {
    double py = 0.0;
    for (int x = 0; x < w.num_inputs; ++x) py += px[static_cast<std::size_t>(x)] * w.at(x, y);
    if (py <= 0.0) continue;
    mass += py;
    for (int x = 0; x < w.num_inputs; ++x) {
      const double joint = px[static_cast<std::size_t>(x)] * w.at(x, y);
      if (joint > 0.0) acc += joint * std::log2(py / joint);
    }
  }
  if (mass <= 0.0) return 0.0;
  return clamp_entropy(acc / mass);
}

double weight_class_mass(const std::vector<std::uint64_t>& counts, int n, double q) {
  if (static_cast<int>(counts.size()) != n + 1) {
    throw std::invalid_argument("weight_class_mass: counts must have n+1 slots");
  }
  double z = 0.0;
  for (int w = 0; w <= n; ++w) {
    if (!counts[static_cast<std::size_t>(w)]) continue;
    z += static_cast<double>(counts[static_cast<std::size_t>(w)]) *
         std::pow(q, w) * std::pow(1.0 - q, n - w);
  }
  return z;
}

double weight_class_entropy(const std::vector<std::uint64_t>& counts, int n, double q) {
  const double z = weight_class_mass(counts, n, q);
  if (z <= 0.0) return 0.0;
  double h = 0.0;
  for (int w = 0; w <= n; ++w) {
    if (!counts[static_cast<std::size_t>(w)]) continue;
    const double pw = std::pow(q, w) * std::pow(1.0 - q, n - w) / z;
    if (pw > 0.0) h -= static_cast<double>(counts[static_cast<std::size_t>(w)]) * pw * std::log2(pw);
  }
  return clamp_entropy(h);
}

GecStats GecChannel::decompose(const Dmc& w, const std::vector<double>& input_dist,
                               const std::vector<int>& erasure_outputs) {
  w.validate();
  if (static_cast<int>(input_dist.size()) != w.num_inputs) {
    throw std::invalid_argument("GecChannel: input dist size mismatch");
  }
  double dist_sum = 0.0;
  for (double p : input_dist) {
    if (p < -kProbTol) throw std::invalid_argument("GecChannel: negative input probability");
    dist_sum += p;
  }
  if (std::abs(dist_sum - 1.0) > kProbTol * static_cast<double>(w.num_inputs)) {
    throw std::invalid_argument("GecChannel: input dist does not sum to 1");
  }
  std::vector<bool> in_class(static_cast<std::size_t>(w.num_outputs), false);
  for (int y : erasure_outputs) {
    if (y < 0 || y >= w.num_outputs) throw std::invalid_argument("GecChannel: erasure output id out of range");
    if (in_class[static_cast<std::size_t>(y)]) throw std::invalid_argument("GecChannel: duplicate erasure output id");
    in_class[static_cast<std::size_t>(y)] = true;
  }

  // The defining property: the total probability of landing in the erasure
  // class must not depend on the input symbol.
  double p_min = 1.0;
  double p_max = 0.0;
  for (int x = 0; x < w.num_inputs; ++x) {
    double px_erase = 0.0;
    for (int y : erasure_outputs) px_erase += w.at(x, y);
    p_min = std::min(p_min, px_erase);
    p_max = std::max(p_max, px_erase);
  }
  if (w.num_inputs > 0 && p_max - p_min > 1e-9) {
    throw std::invalid_argument(
        "not a generalized erasure channel: erasure probability varies with the input (" +
        std::to_string(p_min) + " .. " + std::to_string(p_max) + ")");
  }
  const double p = 0.5 * (p_min + p_max);
  if (p <= 0.0 || p > 0.5 + 1e-12) {
    throw std::invalid_argument("unsupported erasure regime: erasure probability " +
                                std::to_string(p) + " outside (0, 1/2]");
  }

  std::vector<int> good;
  good.reserve(static_cast<std::size_t>(w.num_outputs) - erasure_outputs.size());
  for (int y = 0; y < w.num_outputs; ++y) {
    if (!in_class[static_cast<std::size_t>(y)]) good.push_back(y);
  }
  GecStats st;
  st.erasure_prob = p;
  st.h_good = conditional_entropy_on_class(w, input_dist, good);
  st.h_bad = conditional_entropy_on_class(w, input_dist, erasure_outputs);
  st.survive_mass = 1.0 - p;
  return st;
}

GecChannel GecChannel::from_dmc(Dmc w, std::vector<double> input_dist,
                                std::vector<int> erasure_outputs) {
  GecChannel ch;
  ch.stats_ = decompose(w, input_dist, erasure_outputs);
  ch.input_log2_ = std::log2(static_cast<double>(w.num_inputs));
  ch.dmc_ = std::move(w);
  ch.input_dist_ = std::move(input_dist);
  ch.erasure_outputs_ = std::move(erasure_outputs);
  return ch;
}

GecChannel GecChannel::from_stats(GecStats stats, double input_log2) {
  if (stats.erasure_prob <= 0.0 || stats.erasure_prob > 0.5 + 1e-12) {
    throw std::invalid_argument("unsupported erasure regime: erasure probability " +
                                std::to_string(stats.erasure_prob) + " outside (0, 1/2]");
  }
  GecChannel ch;
  ch.stats_ = stats;
  ch.input_log2_ = input_log2;
  return ch;
}

const Dmc& GecChannel::dmc() const {
  if (!dmc_) throw std::logic_error("GecChannel: no explicit matrix for this channel");
  return *dmc_;
}

const std::vector<double>& GecChannel::input_dist() const {
  if (!dmc_) throw std::logic_error("GecChannel: no explicit matrix for this channel");
  return input_dist_;
}

const std::vector<int>& GecChannel::erasure_outputs() const {
  if (!dmc_) throw std::logic_error("GecChannel: no explicit matrix for this channel");
  return erasure_outputs_;
}

GecChannel bsec_from_extension(double q) {
  if (q <= 0.0 || q >= 1.0) {
    throw std::invalid_argument("bsec_from_extension: need q in (0,1), the erasure class is empty at the endpoints");
  }
  Dmc w;
  w.num_inputs = 2;   // the repeated-bit codewords 00 and 11
  w.num_outputs = 4;  // received pairs 00, 01, 10, 11
  const double a = (1.0 - q) * (1.0 - q);
  const double b = (1.0 - q) * q;
  const double c = q * q;
  w.probs = {a, b, b, c,
             c, b, b, a};
  return GecChannel::from_dmc(std::move(w), {0.5, 0.5}, {1, 2});
}

PolarAnalyzer::PolarAnalyzer(int s, int s_cap)
    : s_(s), gen_(kronecker_generator(s, s_cap)), chain_(gen_) {}

PolarRoundStats PolarAnalyzer::round_stats(double q, int t) const {
  if (t < 1 || t > rounds()) throw std::out_of_range("PolarAnalyzer: round index out of range");
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("PolarAnalyzer: need q in (0,1)");
  const int n = block_len();
  const double z_prev = weight_class_mass(chain_.weight_profile(t - 1), n, q);
  const double z_cur = weight_class_mass(chain_.weight_profile(t), n, q);
  PolarRoundStats st;
  st.t = t;
  st.erasure_prob = 1.0 - z_cur / z_prev;
  st.h_good = weight_class_entropy(chain_.weight_profile(t), n, q);
  st.h_bad = weight_class_entropy(chain_.coset_weight_profile(t), n, q);
  st.survive_mass = z_cur;
  return st;
}

std::vector<PolarRoundStats> PolarAnalyzer::all_round_stats(double q) const {
  std::vector<PolarRoundStats> out;
  out.reserve(static_cast<std::size_t>(rounds()));
  for (int t = 1; t <= rounds(); ++t) out.push_back(round_stats(q, t));
  return out;
}

GecChannel PolarAnalyzer::round_channel(double q, int t) const {
  const PolarRoundStats st = round_stats(q, t);
  const int n = block_len();
  const int in_log2 = n - (t - 1);
  const std::size_t m1 = std::size_t{1} << in_log2;
  const std::size_t entries = m1 * m1 * 2;
  if (entries > kMaxExplicitEntries || !chain_.materialized()) {
    GecStats gs;
    gs.erasure_prob = st.erasure_prob;
    gs.h_good = st.h_good;
    gs.h_bad = st.h_bad;
    gs.survive_mass = 1.0 - st.erasure_prob;
    return GecChannel::from_stats(gs, static_cast<double>(in_log2));
  }

  const auto& lv = chain_.members(t - 1);
  const double z_prev = weight_class_mass(chain_.weight_profile(t - 1), n, q);
  std::vector<int> idx_of(std::size_t{1} << n, -1);
  for (std::size_t i = 0; i < lv.size(); ++i) idx_of[lv[i].word()] = static_cast<int>(i);

  Dmc w;
  w.num_inputs = static_cast<int>(m1);
  w.num_outputs = static_cast<int>(2 * m1);
  w.probs.assign(m1 * m1 * 2, 0.0);
  const BitVec& check = chain_.column(t - 1);
  for (std::size_t i = 0; i < lv.size(); ++i) {
    for (const BitVec& e : lv) {
      const double pe = std::pow(q, e.weight()) * std::pow(1.0 - q, n - e.weight()) / z_prev;
      const int j = idx_of[(lv[i] ^ e).word()];
      const int flag = syndrome(e, check);
      w.probs[i * (2 * m1) + static_cast<std::size_t>(j) + static_cast<std::size_t>(flag) * m1] += pe;
    }
  }
  std::vector<int> erased;
  erased.reserve(m1);
  for (std::size_t j = m1; j < 2 * m1; ++j) erased.push_back(static_cast<int>(j));
  return GecChannel::from_dmc(std::move(w), std::vector<double>(m1, 1.0 / static_cast<double>(m1)),
                              std::move(erased));
}

const PolarAnalyzer& PolarAnalyzer::shared(int s) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PolarAnalyzer>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[s];
  if (!slot) slot = std::make_unique<PolarAnalyzer>(s);
  return *slot;
}

}  // namespace otcap
