#include "otcap/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace otcap {

namespace {

constexpr double kExactTol = 1e-12;

int symbol_width(int num_symbols) {
  int w = 1;
  while ((1 << w) < num_symbols) ++w;
  return w;
}

void append_symbol_bits(Bits& out, int sym, int width) {
  for (int k = width - 1; k >= 0; --k) {
    out.push_back(static_cast<std::uint8_t>((sym >> k) & 1));
  }
}

Hash128 pack_tag(const Bits& bits) {
  if (bits.size() > 128) throw std::invalid_argument("pack_tag: tag wider than 128 bits");
  Hash128 h;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (!bits[i]) continue;
    if (i < 64) {
      h.lo |= std::uint64_t{1} << i;
    } else {
      h.hi |= std::uint64_t{1} << (i - 64);
    }
  }
  return h;
}

int sample_from(const std::vector<double>& dist, Prng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
    acc += dist[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(dist.size()) - 1;
}

double tag_rule_gap(const GecChannel& ch, SamplerFault fault) {
  const Dmc& w = ch.dmc();
  std::vector<bool> erased(static_cast<std::size_t>(w.num_outputs), false);
  for (int y : ch.erasure_outputs()) erased[static_cast<std::size_t>(y)] = true;
  const double keep = fault == SamplerFault::kKeepAllGood
                          ? 1.0
                          : keep_good_prob(ch.stats().erasure_prob);
  double gap = 0.0;
  for (int x = 0; x < w.num_inputs; ++x) {
    double p_erase = 0.0;
    for (int y = 0; y < w.num_outputs; ++y) {
      if (erased[static_cast<std::size_t>(y)]) p_erase += w.at(x, y);
    }
    const double p_good = (1.0 - p_erase) * keep;
    gap = std::max(gap, std::abs(p_good - p_erase));
  }
  return gap;
}

}  // namespace

double keep_good_prob(double erasure_prob) {
  if (!(erasure_prob > 0.0 && erasure_prob < 1.0)) {
    throw std::invalid_argument("keep_good_prob: erasure probability outside (0,1)");
  }
  return erasure_prob / (1.0 - erasure_prob);
}

LengthParams derive_lengths(int n_blocks, double p, double h_good, double h_bad, double delta_m,
                            double delta_kappa, double delta_l) {
  if (n_blocks < 1) throw std::invalid_argument("derive_lengths: need at least one block");
  if (!(p > 0.0 && p <= 0.5 + 1e-12)) {
    throw std::invalid_argument("derive_lengths: erasure probability " + std::to_string(p) +
                                " outside (0, 1/2]");
  }
  if (!(h_good >= 0.0) || !(h_bad >= 0.0)) {
    throw std::invalid_argument("derive_lengths: entropies must be nonnegative");
  }
  if (!(delta_m > 0.0) || !(delta_kappa >= 0.0) || !(delta_l >= 0.0)) {
    throw std::invalid_argument("derive_lengths: margins must be positive");
  }
  if (delta_m >= p) {
    throw std::invalid_argument("derive_lengths: erasure margin " + std::to_string(delta_m) +
                                " must stay below the erasure probability " + std::to_string(p));
  }
  LengthParams out;
  out.m = static_cast<int>(std::floor(static_cast<double>(n_blocks) * (p - delta_m)));
  if (out.m < 1) throw std::invalid_argument("derive_lengths: margin leaves no usable blocks");
  out.kappa = static_cast<int>(std::ceil(static_cast<double>(out.m) * (h_good + delta_kappa)));
  out.l = static_cast<int>(std::floor(static_cast<double>(out.m) * (h_bad - delta_l))) - out.kappa;
  if (out.l < 1) {
    throw std::invalid_argument("derive_lengths: no extractable key at these parameters (l = " +
                                std::to_string(out.l) + ")");
  }
  return out;
}

std::optional<std::vector<int>> reconcile_decode(const DecodeProblem& pr) {
  const auto& pos = pr.positions;
  const int n = static_cast<int>(pos.size());
  if (pr.visit_cap < 1) throw std::invalid_argument("reconcile_decode: visit cap must be >= 1");
  for (const DecodePosition& p : pos) {
    if (p.alts.empty()) throw std::invalid_argument("reconcile_decode: position with no alternatives");
    if (p.alts[0].tag_delta.lo != 0 || p.alts[0].tag_delta.hi != 0) {
      throw std::invalid_argument("reconcile_decode: top alternative must carry a zero tag delta");
    }
    for (std::size_t a = 1; a < p.alts.size(); ++a) {
      if (p.alts[a].log2p > p.alts[a - 1].log2p) {
        throw std::invalid_argument("reconcile_decode: alternatives must be sorted by probability");
      }
    }
  }

  // Positions that actually have a second choice, most probable flip first.
  std::vector<int> ord;
  for (int i = 0; i < n; ++i) {
    if (pos[static_cast<std::size_t>(i)].alts.size() > 1) ord.push_back(i);
  }
  const auto gap1 = [&pos](int pid) {
    const auto& a = pos[static_cast<std::size_t>(pid)].alts;
    return a[1].log2p - a[0].log2p;
  };
  std::sort(ord.begin(), ord.end(), [&](int a, int b) {
    const double ga = gap1(a);
    const double gb = gap1(b);
    if (ga != gb) return ga > gb;
    return a < b;
  });
  const int f = static_cast<int>(ord.size());

  const auto build_result =
      [&pos, &ord](const std::vector<std::pair<std::uint16_t, std::uint16_t>>& flips) {
        std::vector<int> syms;
        syms.reserve(pos.size());
        for (const DecodePosition& p : pos) syms.push_back(p.alts[0].symbol);
        for (const auto& [oi, alt] : flips) {
          const int pid = ord[static_cast<std::size_t>(oi)];
          syms[static_cast<std::size_t>(pid)] =
              pos[static_cast<std::size_t>(pid)].alts[static_cast<std::size_t>(alt)].symbol;
        }
        return syms;
      };

  std::int64_t visited = 0;

  if (f == 0) {
    ++visited;
    if (pr.base_tag == pr.target) return build_result({});
    return std::nullopt;
  }

  bool homogeneous = true;
  const double g0 = gap1(ord[0]);
  for (int oi = 0; oi < f && homogeneous; ++oi) {
    const int pid = ord[static_cast<std::size_t>(oi)];
    if (pos[static_cast<std::size_t>(pid)].alts.size() != 2 || gap1(pid) != g0) {
      homogeneous = false;
    }
  }

  if (homogeneous) {
    // All deviations cost the same, so candidates order by deviation count:
    // enumerate flip sets by weight, lexicographically within a weight, and
    // maintain the candidate tag incrementally.
    std::vector<Hash128> d(static_cast<std::size_t>(f));
    for (int oi = 0; oi < f; ++oi) {
      d[static_cast<std::size_t>(oi)] =
          pos[static_cast<std::size_t>(ord[static_cast<std::size_t>(oi)])].alts[1].tag_delta;
    }
    for (int k = 0; k <= f; ++k) {
      if (k == 0) {
        ++visited;
        if (pr.base_tag == pr.target) return build_result({});
        if (visited >= pr.visit_cap) return std::nullopt;
        continue;
      }
      std::vector<int> c(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) c[static_cast<std::size_t>(j)] = j;
      Hash128 tag = pr.base_tag;
      for (int j = 0; j < k; ++j) tag ^= d[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
      while (true) {
        ++visited;
        if (tag == pr.target) {
          std::vector<std::pair<std::uint16_t, std::uint16_t>> flips;
          flips.reserve(static_cast<std::size_t>(k));
          for (int j = 0; j < k; ++j) {
            flips.emplace_back(static_cast<std::uint16_t>(c[static_cast<std::size_t>(j)]), 1);
          }
          return build_result(flips);
        }
        if (visited >= pr.visit_cap) return std::nullopt;
        int i = k - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == f - k + i) --i;
        if (i < 0) break;
        for (int j = i; j < k; ++j) tag ^= d[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
          c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
        }
        for (int j = i; j < k; ++j) tag ^= d[static_cast<std::size_t>(c[static_cast<std::size_t>(j)])];
      }
    }
    return std::nullopt;
  }

  // General case: best-first over deviation patterns. Each pattern is reached
  // exactly once (bump the last deviation deeper, extend to the next eligible
  // position, or shift the last deviation one position over), and each of the
  // three moves can only lower the score, so the heap pops in posterior order.
  struct HeapNode {
    double score;
    Hash128 tag;
    std::vector<std::pair<std::uint16_t, std::uint16_t>> flips;
  };
  struct NodeLess {
    bool operator()(const HeapNode& a, const HeapNode& b) const {
      if (a.score != b.score) return a.score < b.score;
      return a.flips > b.flips;
    }
  };

  double base_score = 0.0;
  for (const DecodePosition& p : pos) base_score += p.alts[0].log2p;

  const auto alt_of = [&pos, &ord](int oi, int a) -> const DecodeAlternative& {
    return pos[static_cast<std::size_t>(ord[static_cast<std::size_t>(oi)])]
        .alts[static_cast<std::size_t>(a)];
  };

  std::priority_queue<HeapNode, std::vector<HeapNode>, NodeLess> heap;
  heap.push({base_score, pr.base_tag, {}});
  while (!heap.empty()) {
    HeapNode cur = heap.top();
    heap.pop();
    ++visited;
    if (cur.tag == pr.target) return build_result(cur.flips);
    if (visited >= pr.visit_cap) return std::nullopt;

    if (!cur.flips.empty()) {
      const auto [oi, a] = cur.flips.back();
      const auto& alts = pos[static_cast<std::size_t>(ord[oi])].alts;
      if (static_cast<std::size_t>(a) + 1 < alts.size()) {
        HeapNode child = cur;
        child.score += alt_of(oi, a + 1).log2p - alt_of(oi, a).log2p;
        child.tag ^= alt_of(oi, a + 1).tag_delta;
        child.tag ^= alt_of(oi, a).tag_delta;
        child.flips.back().second = static_cast<std::uint16_t>(a + 1);
        heap.push(std::move(child));
      }
      if (a == 1 && static_cast<int>(oi) + 1 < f) {
        HeapNode child = cur;
        child.score += gap1(ord[static_cast<std::size_t>(oi) + 1]) - gap1(ord[oi]);
        child.tag ^= alt_of(oi, 1).tag_delta;
        child.tag ^= alt_of(static_cast<int>(oi) + 1, 1).tag_delta;
        child.flips.back().first = static_cast<std::uint16_t>(oi + 1);
        heap.push(std::move(child));
      }
    }
    const int next_oi = cur.flips.empty() ? 0 : static_cast<int>(cur.flips.back().first) + 1;
    if (next_oi < f) {
      HeapNode child = cur;
      child.score += gap1(ord[static_cast<std::size_t>(next_oi)]);
      child.tag ^= alt_of(next_oi, 1).tag_delta;
      child.flips.emplace_back(static_cast<std::uint16_t>(next_oi), 1);
      heap.push(std::move(child));
    }
  }
  return std::nullopt;
}

TrialOutcome run_trial(const GecChannel& ch, const ProtocolConfig& cfg, std::uint64_t trial,
                       Transcript* transcript) {
  const Dmc& w = ch.dmc();
  const std::vector<double>& pdist = ch.input_dist();
  const int m = cfg.len.m;
  const int kappa = cfg.len.kappa;
  const int l = cfg.len.l;
  if (cfg.n_blocks < 1 || m < 1 || kappa < 0 || l < 0) {
    throw std::invalid_argument("run_trial: bad lengths");
  }
  if (kappa > 128) {
    throw std::invalid_argument("run_trial: reconciliation tag wider than 128 bits (kappa = " +
                                std::to_string(kappa) + ")");
  }
  std::vector<bool> erased(static_cast<std::size_t>(w.num_outputs), false);
  for (int y : ch.erasure_outputs()) erased[static_cast<std::size_t>(y)] = true;
  const double keep =
      cfg.fault == SamplerFault::kKeepAllGood ? 1.0 : keep_good_prob(ch.stats().erasure_prob);
  const int width = symbol_width(w.num_inputs);

  Prng rng = Prng::derive(cfg.seed, trial);
  TrialOutcome out;
  Transcript local;
  Transcript& tr = transcript ? *transcript : local;
  tr = Transcript{};
  tr.stream = trial;

  std::vector<std::vector<double>> rows(static_cast<std::size_t>(w.num_inputs));
  for (int x = 0; x < w.num_inputs; ++x) {
    rows[static_cast<std::size_t>(x)].assign(w.probs.begin() + static_cast<std::ptrdiff_t>(x) * w.num_outputs,
                                             w.probs.begin() + static_cast<std::ptrdiff_t>(x + 1) * w.num_outputs);
  }

  tr.x_syms.reserve(static_cast<std::size_t>(cfg.n_blocks));
  tr.y_syms.reserve(static_cast<std::size_t>(cfg.n_blocks));
  tr.v.reserve(static_cast<std::size_t>(cfg.n_blocks));
  std::vector<int> pool_good;
  std::vector<int> pool_bad;
  for (int i = 0; i < cfg.n_blocks; ++i) {
    const int x = sample_from(pdist, rng);
    const int y = sample_from(rows[static_cast<std::size_t>(x)], rng);
    tr.x_syms.push_back(x);
    tr.y_syms.push_back(y);
    int v;
    if (erased[static_cast<std::size_t>(y)]) {
      v = 1;
      pool_bad.push_back(i);
    } else if (rng.next_double() < keep) {
      v = 0;
      pool_good.push_back(i);
    } else {
      v = 2;
    }
    tr.v.push_back(v);
  }
  out.good_count = static_cast<int>(pool_good.size());
  out.bad_count = static_cast<int>(pool_bad.size());

  if (out.good_count < m || out.bad_count < m) {
    out.aborted = true;
    tr.aborted = true;
    return out;
  }

  const int b = rng.next_bit();
  out.b = b;
  tr.b = b;
  const std::vector<int> kept_good(pool_good.begin(), pool_good.begin() + m);
  const std::vector<int> kept_bad(pool_bad.begin(), pool_bad.begin() + m);
  tr.i0 = b == 0 ? kept_good : kept_bad;
  tr.i1 = b == 0 ? kept_bad : kept_good;
  out.first_i0 = tr.i0.front();
  out.last_i0 = tr.i0.back();

  tr.k0 = random_bits(rng, l);
  tr.k1 = random_bits(rng, l);
  const int in_bits = m * width;
  tr.g_seed = random_bits(rng, toeplitz_seed_len(in_bits, kappa));
  tr.f_seed = random_bits(rng, l > 0 ? surjective_seed_len(in_bits) : 0);

  const auto pack_set = [&](const std::vector<int>& set) {
    Bits bits;
    bits.reserve(static_cast<std::size_t>(in_bits));
    for (int idx : set) append_symbol_bits(bits, tr.x_syms[static_cast<std::size_t>(idx)], width);
    return bits;
  };
  const Bits bits0 = pack_set(tr.i0);
  const Bits bits1 = pack_set(tr.i1);
  tr.c0 = toeplitz_hash(tr.g_seed, bits0, kappa);
  tr.c1 = toeplitz_hash(tr.g_seed, bits1, kappa);
  tr.masked0 = l > 0 ? xor_bits(tr.k0, surjective_hash(tr.f_seed, bits0, l)) : Bits{};
  tr.masked1 = l > 0 ? xor_bits(tr.k1, surjective_hash(tr.f_seed, bits1, l)) : Bits{};

  // Receiver side: decode the symbols of the good set against its tag.
  const std::vector<int>& decode_set = kept_good;
  const Bits& c_b = b == 0 ? tr.c0 : tr.c1;
  const Bits& masked_b = b == 0 ? tr.masked0 : tr.masked1;
  const Bits& k_b = b == 0 ? tr.k0 : tr.k1;

  const PackedToeplitz packed(tr.g_seed, in_bits, kappa);
  DecodeProblem prob;
  prob.visit_cap = cfg.list_cap;
  prob.positions.resize(static_cast<std::size_t>(m));
  Bits map_bits;
  map_bits.reserve(static_cast<std::size_t>(in_bits));
  for (int p = 0; p < m; ++p) {
    const int y = tr.y_syms[static_cast<std::size_t>(decode_set[static_cast<std::size_t>(p)])];
    std::vector<DecodeAlternative> alts;
    for (int x = 0; x < w.num_inputs; ++x) {
      const double post = pdist[static_cast<std::size_t>(x)] * w.at(x, y);
      if (post <= 0.0) continue;
      DecodeAlternative a;
      a.symbol = x;
      a.log2p = std::log2(post);
      alts.push_back(a);
    }
    std::sort(alts.begin(), alts.end(), [](const DecodeAlternative& a, const DecodeAlternative& b) {
      if (a.log2p != b.log2p) return a.log2p > b.log2p;
      return a.symbol < b.symbol;
    });
    if (static_cast<int>(alts.size()) > cfg.alt_cap) alts.resize(static_cast<std::size_t>(cfg.alt_cap));
    const int map_sym = alts[0].symbol;
    for (DecodeAlternative& a : alts) {
      const int diff = a.symbol ^ map_sym;
      Hash128 delta;
      for (int k = 0; k < width; ++k) {
        if ((diff >> (width - 1 - k)) & 1) delta ^= packed.column(p * width + k);
      }
      a.tag_delta = delta;
    }
    append_symbol_bits(map_bits, map_sym, width);
    prob.positions[static_cast<std::size_t>(p)].alts = std::move(alts);
  }
  prob.base_tag = packed.apply(map_bits);
  prob.target = pack_tag(c_b);

  const auto decoded = reconcile_decode(prob);
  if (!decoded) {
    out.decode_failed = true;
    out.key_error = true;
    tr.decode_failed = true;
    tr.key_error = true;
    return out;
  }
  Bits xhat_bits;
  xhat_bits.reserve(static_cast<std::size_t>(in_bits));
  for (int p = 0; p < m; ++p) append_symbol_bits(xhat_bits, (*decoded)[static_cast<std::size_t>(p)], width);
  tr.khat = l > 0 ? xor_bits(masked_b, surjective_hash(tr.f_seed, xhat_bits, l)) : Bits{};
  out.key_error = !bits_equal(tr.khat, k_b);
  tr.key_error = out.key_error;
  return out;
}

ReceiverPrivacyAudit audit_receiver_privacy(const GecChannel& ch, const ProtocolConfig& cfg,
                                            int trials) {
  if (trials < 2) throw std::invalid_argument("audit_receiver_privacy: need at least two trials");
  ReceiverPrivacyAudit audit;
  audit.exact_gap = tag_rule_gap(ch, cfg.fault);
  audit.exact_ok = audit.exact_gap <= kExactTol;

  std::vector<double> first0, first1, last0, last1;
  for (int t = 0; t < trials; ++t) {
    const TrialOutcome o = run_trial(ch, cfg, static_cast<std::uint64_t>(t));
    if (o.aborted) continue;
    ++audit.trials_used;
    if (o.b == 0) {
      first0.push_back(o.first_i0);
      last0.push_back(o.last_i0);
    } else {
      first1.push_back(o.first_i0);
      last1.push_back(o.last_i0);
    }
  }
  const double p_first = chi_square_homogeneity_p(first0, first1);
  const double p_last = chi_square_homogeneity_p(last0, last1);
  audit.chi2_p = std::min(1.0, 2.0 * std::min(p_first, p_last));
  return audit;
}

SenderPrivacyAudit audit_sender_privacy(int m, int kappa, int l, double theta, int n_seeds,
                                        std::uint64_t seed) {
  if (m < 1 || m > 20) throw std::invalid_argument("audit_sender_privacy: m must be in [1, 20]");
  if (l < 0 || l > m) throw std::invalid_argument("audit_sender_privacy: l must be in [0, m]");
  if (kappa < 0 || kappa + l > 24) {
    throw std::invalid_argument("audit_sender_privacy: joint alphabet too large");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("audit_sender_privacy: theta must be in (0,1)");
  }
  if (n_seeds < 1) throw std::invalid_argument("audit_sender_privacy: need at least one seed");

  const std::size_t space = std::size_t{1} << m;
  std::vector<double> px(space);
  for (std::size_t x = 0; x < space; ++x) {
    const int wt = std::popcount(static_cast<unsigned>(x));
    px[x] = std::pow(theta, wt) * std::pow(1.0 - theta, m - wt);
  }

  const double uniform = std::pow(2.0, -l);
  const std::size_t tag_space = std::size_t{1} << kappa;
  const std::size_t key_space = std::size_t{1} << l;
  SenderPrivacyAudit audit;
  audit.seeds = n_seeds;
  Prng rng = Prng::derive(seed, 0x5eed);
  for (int s = 0; s < n_seeds; ++s) {
    const Bits g_seed = random_bits(rng, toeplitz_seed_len(m, kappa));
    const Bits f_seed = random_bits(rng, l > 0 ? surjective_seed_len(m) : 0);
    std::vector<double> joint(tag_space * key_space, 0.0);
    std::vector<double> pc(tag_space, 0.0);
    Bits in(static_cast<std::size_t>(m));
    for (std::size_t x = 0; x < space; ++x) {
      for (int i = 0; i < m; ++i) in[static_cast<std::size_t>(i)] = (x >> (m - 1 - i)) & 1;
      const Bits c = toeplitz_hash(g_seed, in, kappa);
      const Bits sk = l > 0 ? surjective_hash(f_seed, in, l) : Bits{};
      std::size_t ci = 0;
      for (std::uint8_t bit : c) ci = (ci << 1) | bit;
      std::size_t si = 0;
      for (std::uint8_t bit : sk) si = (si << 1) | bit;
      joint[ci * key_space + si] += px[x];
      pc[ci] += px[x];
    }
    double d = 0.0;
    for (std::size_t ci = 0; ci < tag_space; ++ci) {
      for (std::size_t si = 0; si < key_space; ++si) {
        d += std::abs(joint[ci * key_space + si] - uniform * pc[ci]);
      }
    }
    d *= 0.5;
    audit.avg_dist += d;
    audit.max_dist = std::max(audit.max_dist, d);
  }
  audit.avg_dist /= static_cast<double>(n_seeds);
  return audit;
}

SimReport simulate_bsec(const BsecSimConfig& cfg) {
  if (cfg.n_uses < 2) throw std::invalid_argument("simulate_bsec: need at least two channel uses");
  if (cfg.trials < 1) throw std::invalid_argument("simulate_bsec: need at least one trial");
  const GecChannel ch = bsec_from_extension(cfg.q);
  const GecStats& st = ch.stats();

  SimReport rep;
  rep.q = cfg.q;
  rep.n_uses = cfg.n_uses;
  rep.n_blocks = cfg.n_uses / 2;
  rep.trials = cfg.trials;
  rep.delta_m = cfg.delta_m;
  rep.delta_kappa = cfg.delta_kappa;
  rep.delta_l = cfg.delta_l;
  rep.seed = cfg.seed;
  rep.list_cap = cfg.list_cap;
  rep.len = derive_lengths(rep.n_blocks, st.erasure_prob, st.h_good, st.h_bad, cfg.delta_m,
                           cfg.delta_kappa, cfg.delta_l);

  ProtocolConfig pc;
  pc.n_blocks = rep.n_blocks;
  pc.len = rep.len;
  pc.seed = cfg.seed;
  pc.list_cap = cfg.list_cap;
  pc.fault = cfg.fault;

  std::vector<double> first0, first1, last0, last1;
  for (int t = 0; t < cfg.trials; ++t) {
    const TrialOutcome o = run_trial(ch, pc, static_cast<std::uint64_t>(t));
    if (o.aborted) {
      ++rep.aborts;
      continue;
    }
    if (o.decode_failed) ++rep.decode_failures;
    if (o.key_error) ++rep.key_errors;
    if (o.b == 0) {
      first0.push_back(o.first_i0);
      last0.push_back(o.last_i0);
    } else {
      first1.push_back(o.first_i0);
      last1.push_back(o.last_i0);
    }
  }
  const int completed = cfg.trials - rep.aborts;
  rep.abort_rate = static_cast<double>(rep.aborts) / static_cast<double>(cfg.trials);
  rep.key_error_rate =
      completed > 0 ? static_cast<double>(rep.key_errors) / static_cast<double>(completed) : 0.0;
  rep.key_error_ci = completed > 0 ? wilson_interval(rep.key_errors, completed) : WilsonInterval{};
  const int correct = completed - rep.key_errors;
  rep.realized_rate = static_cast<double>(correct) * static_cast<double>(rep.len.l) /
                      (static_cast<double>(cfg.trials) * static_cast<double>(cfg.n_uses));
  rep.privacy_exact_ok = tag_rule_gap(ch, cfg.fault) <= kExactTol;
  const double p_first = chi_square_homogeneity_p(first0, first1);
  const double p_last = chi_square_homogeneity_p(last0, last1);
  rep.privacy_chi2_p = std::min(1.0, 2.0 * std::min(p_first, p_last));
  return rep;
}

CascadeReport run_cascade(const CascadeConfig& cfg) {
  const PolarAnalyzer& an = PolarAnalyzer::shared(cfg.s);
  const SubgroupChain& chain = an.chain();
  const int n = an.block_len();
  if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw std::invalid_argument("run_cascade: need q in (0,1)");
  if (cfg.trials < 1) throw std::invalid_argument("run_cascade: need at least one trial");
  const int n_blocks = cfg.n_uses / n;
  if (n_blocks < 1) {
    throw std::invalid_argument("run_cascade: fewer channel uses than one block");
  }
  if (!chain.materialized()) {
    throw std::logic_error("run_cascade: member lists unavailable at this block length");
  }

  CascadeReport rep;
  rep.s = cfg.s;
  rep.n_uses = cfg.n_uses;
  rep.n_blocks = n_blocks;
  rep.trials = cfg.trials;
  rep.q = cfg.q;
  rep.seed = cfg.seed;

  // Deterministic schedule from expected pool sizes; every trial uses the
  // same per-round lengths, as real parties would agree on in advance.
  const std::vector<PolarRoundStats> stats = an.all_round_stats(cfg.q);
  int alive = n_blocks;
  int last_round = 0;
  for (int t = 1; t <= an.rounds(); ++t) {
    const PolarRoundStats& st = stats[static_cast<std::size_t>(t - 1)];
    if (st.erasure_prob > 0.5) break;
    CascadeRound r;
    r.t = t;
    r.erasure_prob = st.erasure_prob;
    r.h_good = st.h_good;
    r.h_bad = st.h_bad;
    r.delta_m = std::min(cfg.delta_m, st.erasure_prob / 2.0);
    r.expected_alive = alive;
    if (alive >= 1) {
      try {
        r.len = derive_lengths(alive, st.erasure_prob, st.h_good, st.h_bad, r.delta_m,
                               cfg.delta_kappa, cfg.delta_l);
        // tags are packed into 128 bits; a wider round stays in the table
        // (lengths visible) but is skipped, its blocks passing through
        r.scheduled = r.len.kappa <= 128;
      } catch (const std::invalid_argument&) {
        r.scheduled = false;
      }
    }
    const int expected_good =
        static_cast<int>(std::floor(static_cast<double>(alive) * (1.0 - st.erasure_prob)));
    alive = expected_good - (r.scheduled ? r.len.m : 0);
    if (alive < 0) alive = 0;
    rep.rounds.push_back(r);
    last_round = t;
  }

  // Per-round decode alternatives: the candidate noise words of the survivor
  // class, most probable first, shared by every position of that round.
  struct RoundAlts {
    std::vector<std::uint32_t> words;
    std::vector<double> log2p;
  };
  std::vector<RoundAlts> round_alts(static_cast<std::size_t>(last_round));
  for (int t = 1; t <= last_round; ++t) {
    const auto& members = chain.members(t);
    std::vector<std::uint32_t> ws;
    ws.reserve(members.size());
    for (const BitVec& e : members) ws.push_back(e.word());
    std::sort(ws.begin(), ws.end(), [&](std::uint32_t a, std::uint32_t b) {
      const int wa = std::popcount(a);
      const int wb = std::popcount(b);
      const double la = wa * std::log2(cfg.q) + (n - wa) * std::log2(1.0 - cfg.q);
      const double lb = wb * std::log2(cfg.q) + (n - wb) * std::log2(1.0 - cfg.q);
      if (la != lb) return la > lb;
      return a < b;
    });
    if (static_cast<int>(ws.size()) > cfg.alt_cap) ws.resize(static_cast<std::size_t>(cfg.alt_cap));
    RoundAlts ra;
    ra.words = ws;
    for (std::uint32_t wd : ws) {
      const int wt = std::popcount(wd);
      ra.log2p.push_back(wt * std::log2(cfg.q) + (n - wt) * std::log2(1.0 - cfg.q));
    }
    round_alts[static_cast<std::size_t>(t - 1)] = std::move(ra);
  }

  std::int64_t correct_bits = 0;
  const std::uint32_t mask = (n == 32) ? 0xffffffffu : ((std::uint32_t{1} << n) - 1);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    Prng rng = Prng::derive(cfg.seed, static_cast<std::uint64_t>(trial));
    std::vector<std::uint32_t> xw(static_cast<std::size_t>(n_blocks));
    std::vector<std::uint32_t> ew(static_cast<std::size_t>(n_blocks));
    for (int i = 0; i < n_blocks; ++i) {
      xw[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rng.next_u64()) & mask;
      std::uint32_t e = 0;
      for (int bit = 0; bit < n; ++bit) {
        e = (e << 1) | (rng.next_double() < cfg.q ? 1u : 0u);
      }
      ew[static_cast<std::size_t>(i)] = e;
    }

    std::vector<int> alive_ids(static_cast<std::size_t>(n_blocks));
    for (int i = 0; i < n_blocks; ++i) alive_ids[static_cast<std::size_t>(i)] = i;

    for (int t = 1; t <= last_round; ++t) {
      CascadeRound& r = rep.rounds[static_cast<std::size_t>(t - 1)];
      if (t >= 2) {
        // Reveal the previous syndrome and pull every block back into the
        // canonical frame of the survivor class.
        const BitVec& col = chain.column(t - 2);
        const BitVec& shift = chain.min_coset_rep(t - 1);
        for (int id : alive_ids) {
          BitVec x(xw[static_cast<std::size_t>(id)], n);
          if (syndrome(x, col)) {
            xw[static_cast<std::size_t>(id)] = (x ^ shift).word();
          }
        }
      }
      const BitVec check = chain.column(t - 1);
      std::vector<int> good;
      std::vector<int> bad;
      for (int id : alive_ids) {
        if (syndrome(BitVec(ew[static_cast<std::size_t>(id)], n), check)) {
          bad.push_back(id);
        } else {
          good.push_back(id);
        }
      }
      if (!r.scheduled) {
        alive_ids = std::move(good);
        continue;
      }
      const int m = r.len.m;
      if (static_cast<int>(good.size()) < m || static_cast<int>(bad.size()) < m) {
        ++r.aborts;
        alive_ids = std::move(good);
        continue;
      }
      ++r.instances;
      const std::vector<int> inst(good.begin(), good.begin() + m);
      alive_ids.assign(good.begin() + m, good.end());

      const int l = r.len.l;
      const int kappa = r.len.kappa;
      const int in_bits = m * n;
      const Bits k_good = random_bits(rng, l);
      const Bits g_seed = random_bits(rng, toeplitz_seed_len(in_bits, kappa));
      const Bits f_seed = random_bits(rng, surjective_seed_len(in_bits));

      Bits xbits;
      xbits.reserve(static_cast<std::size_t>(in_bits));
      for (int id : inst) {
        append_symbol_bits(xbits, static_cast<int>(xw[static_cast<std::size_t>(id)]), n);
      }
      const Bits c_good = toeplitz_hash(g_seed, xbits, kappa);
      const Bits masked = xor_bits(k_good, surjective_hash(f_seed, xbits, l));

      const PackedToeplitz packed(g_seed, in_bits, kappa);
      const RoundAlts& ra = round_alts[static_cast<std::size_t>(t - 1)];
      DecodeProblem prob;
      prob.visit_cap = cfg.list_cap;
      prob.positions.resize(static_cast<std::size_t>(m));
      Bits map_bits;
      map_bits.reserve(static_cast<std::size_t>(in_bits));
      for (int p = 0; p < m; ++p) {
        const int id = inst[static_cast<std::size_t>(p)];
        const std::uint32_t y = xw[static_cast<std::size_t>(id)] ^ ew[static_cast<std::size_t>(id)];
        std::vector<DecodeAlternative> alts;
        alts.reserve(ra.words.size());
        const std::uint32_t map_word = y ^ ra.words[0];
        for (std::size_t a = 0; a < ra.words.size(); ++a) {
          DecodeAlternative alt;
          alt.symbol = static_cast<int>(y ^ ra.words[a]);
          alt.log2p = ra.log2p[a];
          const std::uint32_t diff = ra.words[a] ^ ra.words[0];
          Hash128 delta;
          for (int bit = 0; bit < n; ++bit) {
            if ((diff >> (n - 1 - bit)) & 1) delta ^= packed.column(p * n + bit);
          }
          alt.tag_delta = delta;
          alts.push_back(alt);
        }
        append_symbol_bits(map_bits, static_cast<int>(map_word), n);
        prob.positions[static_cast<std::size_t>(p)].alts = std::move(alts);
      }
      prob.base_tag = packed.apply(map_bits);
      prob.target = pack_tag(c_good);

      const auto decoded = reconcile_decode(prob);
      if (!decoded) {
        ++r.decode_failures;
        ++r.key_errors;
        continue;
      }
      Bits xhat;
      xhat.reserve(static_cast<std::size_t>(in_bits));
      for (int p = 0; p < m; ++p) append_symbol_bits(xhat, (*decoded)[static_cast<std::size_t>(p)], n);
      const Bits khat = xor_bits(masked, surjective_hash(f_seed, xhat, l));
      if (!bits_equal(khat, k_good)) {
        ++r.key_errors;
      } else {
        correct_bits += l;
      }
    }
  }
  rep.realized_rate = static_cast<double>(correct_bits) /
                      (static_cast<double>(cfg.trials) * static_cast<double>(cfg.n_uses));
  return rep;
}

}  // namespace otcap
