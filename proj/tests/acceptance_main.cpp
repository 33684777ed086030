// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line with the measured quantities; the process exit code is the number of
// failed criteria. Criterion 9 exercises the installed CLI binary when its
// path is passed as argv[1], and falls back to in-process rendering otherwise.

#include "otcap/bounds.hpp"
#include "otcap/channels.hpp"
#include "otcap/protocol.hpp"
#include "otcap/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace otcap;

namespace {

int g_failures = 0;

void verdict(int num, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", num, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void note(const std::string& text) {
  std::printf("  note: %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<double> kQGrid = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.49};

// ---- 1: closed forms vs exact enumeration, timed ----
void criterion_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  double dev = 0.0;
  const PolarAnalyzer& four = PolarAnalyzer::shared(2);
  for (double q : kQGrid) {
    const double a = 1.0 - q, p1 = 4 * q * a * (a * a + q * q);
    const double p2 = 4 * q * q * a * a / (1 - p1);
    const double p3 = 2 * q * q * a * a / ((1 - p1) * (1 - p2));
    const double closed[3] = {p1, p2, p3};
    for (int t = 1; t <= 3; ++t) {
      dev = std::max(dev, std::fabs(four.round_stats(q, t).erasure_prob - closed[t - 1]));
    }
    for (int s = 1; s <= 4; ++s) {
      dev = std::max(dev, std::fabs(first_round_term_closed(q, s) - first_round_term_enum(q, s)));
    }
  }
  const double el = seconds_since(t0);
  verdict(1, dev <= 1e-9 && el < 5.0,
          "block-4 erasure chain and first-round term: closed forms vs enumeration, max dev " +
              fmt(dev) + ", " + fmt(el) + " s");
}

// ---- 2: small-q slope of the first-round term approaches s ----
void criterion_slopes() {
  double worst = 0.0;
  std::string slopes;
  for (int s = 1; s <= 4; ++s) {
    const double sl = first_round_small_q_slope(s);
    worst = std::max(worst, std::fabs(sl - s));
    slopes += (s > 1 ? ", " : "") + fmt(sl);
  }
  verdict(2, worst <= 0.05, "finite-difference slopes near q = 0 are " + slopes +
                                " for s = 1..4, max |slope - s| " + fmt(worst));
}

// ---- 3: the three length-2 reductions coincide ----
void criterion_reductions() {
  double dev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double q = 0.0025 + (0.4975 - 0.0025) * i / 200.0;
    const double e = extension_bound(q);
    dev = std::max(dev, std::fabs(e - recursive_bound(q, 1)));
    dev = std::max(dev, std::fabs(e - polar_bound(q, 1)));
  }
  verdict(3, dev <= 1e-12,
          "extension = recursive(1) = cascade(s=1) on 201 grid points, max dev " + fmt(dev));
}

// ---- 4: shape of the emitted curve family ----
void criterion_curve_family() {
  std::vector<MethodSpec> methods;
  for (const char* name :
       {"extension", "recursive:5", "polar:2", "polar:3", "polar:4", "ska", "upper"}) {
    methods.push_back(parse_method(name));
  }
  const std::vector<SweepRow> rows = sweep_bounds(methods, 0.005, 0.495, 0.005);
  const std::size_t ext = 0, rec5 = 1, pol2 = 2, pol3 = 3, pol4 = 4, ska = 5, up = 6;

  double sym_dev = 0.0;
  for (const SweepRow& r : rows) {
    for (std::size_t j = 0; j + 1 < methods.size(); ++j) {
      sym_dev = std::max(
          sym_dev, std::fabs(evaluate_bound(methods[j], r.q) - evaluate_bound(methods[j], 1 - r.q)));
    }
  }

  bool positive_low = true;   // block-4 cascade above recursive(5) up to q = 0.15
  double cross_q = -1.0;      // first grid point where the order flips
  bool ska_dominates = true;  // interactive curve never below the s = 2 cascade
  bool below_upper = true;
  double mono_break = -1.0;  // first grid q where s-monotonicity fails
  for (const SweepRow& r : rows) {
    const double diff = r.values[pol2] - r.values[rec5];
    if (r.q <= 0.15 + 1e-12 && diff <= 0) positive_low = false;
    if (cross_q < 0 && diff < 0) cross_q = r.q;
    if (r.values[ska] < r.values[pol2] - 1e-12) ska_dominates = false;
    for (std::size_t j = 0; j + 1 < methods.size(); ++j) {
      if (r.values[j] > r.values[up] + 1e-12) below_upper = false;
    }
    const bool mono =
        r.values[pol2] <= r.values[pol3] + 1e-12 && r.values[pol3] <= r.values[pol4] + 1e-12;
    if (!mono && mono_break < 0) mono_break = r.q;
  }
  const bool crossover_ok = positive_low && cross_q > 0.15 && cross_q < 0.25;
  const bool mono_small_q = mono_break < 0 || mono_break > 0.025 + 1e-12;
  (void)ext;

  verdict(4,
          sym_dev <= 1e-9 && crossover_ok && mono_small_q && ska_dominates && below_upper,
          "curve family: symmetry dev " + fmt(sym_dev) + ", block-4 cascade overtakes recursive(5) until q = " +
              fmt(cross_q) + ", s-monotone region ends at q = " + fmt(mono_break) +
              ", interactive >= s=2 cascade and everything <= h(q) on the grid");
  if (mono_break > 0) {
    note("higher-s cascades win only at small q: by q = " + fmt(mono_break) +
         " the deeper rounds start dying (p_t > 1/2 sooner), so s = 2 overtakes s = 4 well "
         "before the crossover with recursive(5)");
  }
}

// ---- 5: parity-entropy recursions vs direct enumeration ----
void criterion_parity_routes() {
  double dev = 0.0;
  for (int j = 1; j <= 4; ++j) {
    for (double q : kQGrid) {
      const ParityEntropies rec = parity_entropies(q, j);
      const ParityEntropies dir = parity_entropies_direct(q, j);
      dev = std::max(dev, std::fabs(rec.even - dir.even));
      dev = std::max(dev, std::fabs(rec.odd - dir.odd));
      dev = std::max(dev, std::fabs(parity_entropy_gap(q, j) - (rec.odd - rec.even)));
    }
  }
  verdict(5, dev <= 1e-9, "both entropy recursions vs direct enumeration, j <= 4, max dev " + fmt(dev));
}

// ---- 6: finite-length protocol at the pinned operating point ----
void criterion_protocol() {
  BsecSimConfig cfg;
  cfg.q = 0.1;
  cfg.n_uses = 2000;
  cfg.delta_m = cfg.delta_kappa = cfg.delta_l = 0.03;
  cfg.trials = 1000;
  cfg.seed = 1;
  cfg.list_cap = 1 << 25;  // covers every error pattern of weight <= 4 at m = 150

  const auto t0 = std::chrono::steady_clock::now();
  const SimReport rep = simulate_bsec(cfg);
  const double el = seconds_since(t0);
  const bool pass = rep.abort_rate <= 0.05 && rep.key_error_rate <= 0.05 && el < 60.0;
  verdict(6, pass,
          "q = 0.1, n = 2000, margins 0.03, 1000 trials, seed 1: abort rate " +
              fmt(rep.abort_rate) + ", key-error rate " + fmt(rep.key_error_rate) + " (ci " +
              fmt(rep.key_error_ci.lo) + ".." + fmt(rep.key_error_ci.hi) + ", target <= 0.05), " +
              fmt(el) + " s");
  if (!pass) {
    note("the 0.03 margin puts the reconciliation tag at kappa = " + std::to_string(rep.len.kappa) +
         " bits for m = " + std::to_string(rep.len.m) +
         ": weight-3/4 noise patterns make the decoder scan 10^5..10^7 candidates and each one "
         "matches a " + std::to_string(rep.len.kappa) +
         "-bit tag by chance at rate 2^-" + std::to_string(rep.len.kappa) +
         ", and weight >= 5 patterns (3.8% of trials) collide long before the search reaches them");
    BsecSimConfig wide = cfg;
    wide.delta_kappa = 0.1;
    const SimReport w = simulate_bsec(wide);
    note("same scheme with delta_kappa = 0.1 (kappa = " + std::to_string(w.len.kappa) +
         "): abort rate " + fmt(w.abort_rate) + ", key-error rate " + fmt(w.key_error_rate) +
         " - both inside the 0.05 margins, so the gap is tag length, not the decoder");
  }
}

// ---- 7: receiver-side privacy audit plus fault injection ----
void criterion_receiver_privacy() {
  const GecChannel ch = bsec_from_extension(0.1);
  ProtocolConfig cfg;
  cfg.n_blocks = 200;
  cfg.len = derive_lengths(200, ch.stats().erasure_prob, ch.stats().h_good, ch.stats().h_bad,
                           0.05, 0.05, 0.05);
  cfg.seed = 12;
  const ReceiverPrivacyAudit honest = audit_receiver_privacy(ch, cfg, 300);

  ProtocolConfig broken = cfg;
  broken.fault = SamplerFault::kKeepAllGood;
  const ReceiverPrivacyAudit bad = audit_receiver_privacy(ch, broken, 300);

  verdict(7,
          honest.exact_ok && honest.exact_gap <= 1e-12 && honest.chi2_p > 0.01 &&
              !bad.exact_ok && bad.exact_gap > 0.5,
          "honest sampler: exact gap " + fmt(honest.exact_gap) + ", chi2 p " + fmt(honest.chi2_p) +
              "; keep-all-good fault: exact gap " + fmt(bad.exact_gap) + ", chi2 p " +
              fmt(bad.chi2_p));
}

// ---- 8: sender-side privacy of the masked keys ----
void criterion_sender_privacy() {
  const SenderPrivacyAudit uniform = audit_sender_privacy(10, 0, 10, 0.5, 25, 8);
  const int l = static_cast<int>(std::floor(10 * (binary_entropy(0.47) - 0.1)));
  const SenderPrivacyAudit biased = audit_sender_privacy(10, 0, l, 0.47, 100, 8);
  verdict(8, uniform.max_dist <= 1e-12 && biased.avg_dist <= 0.05,
          "uniform inputs, l = m = 10: max distance " + fmt(uniform.max_dist) +
              "; theta = 0.47 inputs, l = " + std::to_string(l) + ": avg distance " +
              fmt(biased.avg_dist) + " over 100 seeds (target <= 0.05)");
}

// ---- 9: byte-identical reports on identical flags ----
std::string run_capture(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    *status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  *status = pclose(p);
  return out;
}

void criterion_determinism(const char* cli_path) {
  bool pass = false;
  std::string detail;
  if (cli_path != nullptr) {
    const std::string base = std::string("'") + cli_path + "'";
    const std::string bsec = base + " simulate --scheme bsec --q 0.1 --n 800 --trials 40 --seed 5";
    const std::string polar = base + " simulate --scheme polar --s 2 --q 0.1 --n 1024 --trials 5 --seed 3";
    int s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    const std::string a = run_capture(bsec, &s1), b = run_capture(bsec, &s2);
    const std::string c = run_capture(polar, &s3), d = run_capture(polar, &s4);
    pass = s1 == 0 && s2 == 0 && s3 == 0 && s4 == 0 && !a.empty() && a == b && !c.empty() && c == d;
    detail = "CLI runs repeated with identical flags: bsec " + std::to_string(a.size()) +
             " bytes, polar " + std::to_string(c.size()) + " bytes, both byte-identical";
    if (!pass) detail += " (MISMATCH or nonzero exit)";
  } else {
    BsecSimConfig cfg;
    cfg.n_uses = 800;
    cfg.trials = 40;
    cfg.seed = 5;
    CascadeConfig cas;
    cas.n_uses = 1024;
    cas.trials = 5;
    cas.seed = 3;
    pass = render_sim_json(simulate_bsec(cfg)) == render_sim_json(simulate_bsec(cfg)) &&
           render_cascade_json(run_cascade(cas)) == render_cascade_json(run_cascade(cas));
    detail = "in-process reports rendered twice are byte-identical (CLI path not provided)";
  }
  verdict(9, pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  criterion_closed_forms();
  criterion_slopes();
  criterion_reductions();
  criterion_curve_family();
  criterion_parity_routes();
  criterion_protocol();
  criterion_receiver_privacy();
  criterion_sender_privacy();
  criterion_determinism(argc > 1 ? argv[1] : nullptr);
  std::printf("%d/9 criteria passed\n", 9 - g_failures);
  return g_failures;
}
