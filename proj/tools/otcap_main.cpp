#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otcap/bounds.hpp"
#include "otcap/channels.hpp"
#include "otcap/protocol.hpp"
#include "otcap/report.hpp"
#include "otcap/verify.hpp"

namespace {

constexpr const char* kDefaultMethods =
    "extension,recursive:5,polar:2,polar:3,polar:4,ska,upper";

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OT_POLAR_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    throw std::runtime_error(std::string("OT_POLAR_SEED is not an integer: ") + env);
  }
  return 1;
}

int cmd_bounds(double q_start, double q_end, double q_step, const std::string& methods_arg,
               const std::string& out_path, const std::string& svg_path) {
  std::vector<otcap::MethodSpec> methods;
  for (const std::string& tok : split_csv(methods_arg)) {
    if (!tok.empty()) methods.push_back(otcap::parse_method(tok));
  }
  if (methods.empty()) throw std::invalid_argument("no methods requested");
  const auto rows = otcap::sweep_bounds(methods, q_start, q_end, q_step);
  const std::string csv = otcap::render_bounds_csv(methods, rows);
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(out_path, csv);
    std::fprintf(stderr, "wrote %s (%zu grid points, %zu methods)\n", out_path.c_str(),
                 rows.size(), methods.size());
  }
  if (!svg_path.empty()) {
    write_file(svg_path, otcap::render_bounds_svg(methods, rows));
    std::fprintf(stderr, "wrote %s\n", svg_path.c_str());
  }
  return 0;
}

int cmd_simulate(const std::string& scheme, double q, int s, int n, double delta,
                 double delta_kappa, double delta_l, int trials, std::uint64_t seed,
                 std::int64_t list_cap, int alt_cap, const std::string& fault,
                 const std::string& out_path) {
  std::string json;
  if (scheme == "bsec") {
    otcap::BsecSimConfig cfg;
    cfg.q = q;
    cfg.n_uses = n;
    cfg.delta_m = delta;
    cfg.delta_kappa = delta_kappa >= 0 ? delta_kappa : delta;
    cfg.delta_l = delta_l >= 0 ? delta_l : delta;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.list_cap = list_cap;
    cfg.fault = fault == "keep-all-good" ? otcap::SamplerFault::kKeepAllGood
                                         : otcap::SamplerFault::kNone;
    json = otcap::render_sim_json(otcap::simulate_bsec(cfg));
  } else if (scheme == "polar") {
    otcap::CascadeConfig cfg;
    cfg.s = s;
    cfg.q = q;
    cfg.n_uses = n;
    cfg.delta_m = delta;
    cfg.delta_kappa = delta_kappa >= 0 ? delta_kappa : delta;
    cfg.delta_l = delta_l >= 0 ? delta_l : delta;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.list_cap = list_cap;
    cfg.alt_cap = alt_cap;
    json = otcap::render_cascade_json(otcap::run_cascade(cfg));
  } else {
    throw std::invalid_argument("unknown scheme: '" + scheme + "' (use bsec or polar)");
  }
  if (out_path.empty()) {
    std::fputs(json.c_str(), stdout);
  } else {
    write_file(out_path, json);
    std::fprintf(stderr, "wrote %s\n", out_path.c_str());
  }
  return 0;
}

int cmd_verify(int s_max, double tolerance) {
  const auto results = otcap::run_consistency_battery(s_max, tolerance);
  int failed = 0;
  std::size_t name_w = 0;
  for (const auto& r : results) name_w = std::max(name_w, r.name.size());
  for (const auto& r : results) {
    if (!r.pass) ++failed;
    std::printf("%-6s %-*s max_dev=%-14.6g tol=%-8.3g %s\n", r.pass ? "ok" : "FAIL",
                static_cast<int>(name_w), r.name.c_str(), r.max_dev, r.tol,
                r.detail.c_str());
  }
  std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}

int cmd_polar_info(double q, int s) {
  const otcap::PolarAnalyzer& an = otcap::PolarAnalyzer::shared(s);
  const int n = an.block_len();
  std::printf("block length N=%d, rounds=%d, q=%s\n", n, an.rounds(),
              otcap::format_g12(q).c_str());
  std::printf("%3s %-12s %-12s %-12s %-12s %-12s %s\n", "t", "p_t", "h_good", "h_bad", "term",
              "cumulative", "shift");
  double factor = 1.0;
  double total = 0.0;
  for (int t = 1; t <= an.rounds(); ++t) {
    const otcap::PolarRoundStats st = an.round_stats(q, t);
    if (st.erasure_prob > 0.5) {
      std::printf("%3d %-12.6g (stopped: erasure probability above 1/2)\n", t, st.erasure_prob);
      break;
    }
    const double term =
        factor * st.erasure_prob / n * std::max(0.0, st.h_bad - st.h_good);
    total += term;
    factor *= 1.0 - 2.0 * st.erasure_prob;
    std::printf("%3d %-12.6g %-12.6g %-12.6g %-12.6g %-12.6g %s\n", t, st.erasure_prob,
                st.h_good, st.h_bad, term, total, an.shift(t).to_string().c_str());
  }
  std::printf("rate lower bound: %s\n", otcap::format_g12(otcap::polar_bound(q, s)).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oblivious transfer rate bounds and protocol simulation over noisy channels"};
  app.require_subcommand(1);

  // bounds
  double q_start = 0.005, q_end = 0.495, q_step = 0.005;
  std::string methods = kDefaultMethods;
  std::string out_path, svg_path;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate rate bounds on a q grid (CSV)");
  bounds->add_option("--q-start", q_start, "first grid point")->capture_default_str();
  bounds->add_option("--q-end", q_end, "last grid point")->capture_default_str();
  bounds->add_option("--q-step", q_step, "grid step")->capture_default_str();
  bounds->add_option("--methods", methods, "comma-separated method list")->capture_default_str();
  bounds->add_option("--out", out_path, "CSV output path (stdout when omitted)");
  bounds->add_option("--svg", svg_path, "also render an SVG plot to this path");

  // simulate
  std::string scheme = "bsec";
  double sim_q = 0.1;
  int sim_s = 2;
  int sim_n = -1;
  double delta = 0.05, delta_kappa = -1.0, delta_l = -1.0;
  int trials = -1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::int64_t list_cap = std::int64_t{1} << 20;
  int alt_cap = 16;
  std::string fault;
  std::string sim_out;
  CLI::App* simulate = app.add_subcommand("simulate", "run the transfer protocol and audit it");
  simulate->add_option("--scheme", scheme, "bsec or polar")->capture_default_str();
  simulate->add_option("--q", sim_q, "crossover probability")->capture_default_str();
  simulate->add_option("--s", sim_s, "cascade exponent (polar scheme)")->capture_default_str();
  simulate->add_option("--n", sim_n, "channel uses per trial (default 2000 bsec, 4096 polar)");
  simulate->add_option("--delta", delta, "margin for all three lengths")->capture_default_str();
  simulate->add_option("--delta-kappa", delta_kappa, "override the tag margin");
  simulate->add_option("--delta-l", delta_l, "override the key margin");
  simulate->add_option("--trials", trials, "trials (default 200 bsec, 50 polar)");
  simulate->add_option_function<std::uint64_t>(
      "--seed",
      [&seed, &seed_given](const std::uint64_t& v) {
        seed = v;
        seed_given = true;
      },
      "base RNG seed (default: OT_POLAR_SEED env or 1)");
  simulate->add_option("--list-cap", list_cap, "decoder candidate budget")->capture_default_str();
  simulate->add_option("--alt-cap", alt_cap, "per-position alternative cap (polar scheme)")
      ->capture_default_str();
  simulate->add_option("--fault", fault, "inject a sampler defect: keep-all-good");
  simulate->add_option("--out", sim_out, "JSON output path (stdout when omitted)");

  // verify
  int s_max = 4;
  double tolerance = 1e-9;
  CLI::App* verify = app.add_subcommand("verify", "run the internal consistency battery");
  verify->add_option("--s-max", s_max, "largest cascade exponent to check")->capture_default_str();
  verify->add_option("--tolerance", tolerance, "agreement tolerance")->capture_default_str();

  // polar-info
  double info_q = 0.1;
  int info_s = 2;
  CLI::App* info = app.add_subcommand("polar-info", "per-round cascade statistics at one q");
  info->add_option("--q", info_q, "crossover probability")->capture_default_str();
  info->add_option("--s", info_s, "cascade exponent")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bounds->parsed()) {
      return cmd_bounds(q_start, q_end, q_step, methods, out_path, svg_path);
    }
    if (simulate->parsed()) {
      if (!seed_given) seed = default_seed();
      if (sim_n < 0) sim_n = scheme == "polar" ? 4096 : 2000;
      if (trials < 0) trials = scheme == "polar" ? 50 : 200;
      if (!fault.empty() && fault != "keep-all-good") {
        throw std::invalid_argument("unknown fault: '" + fault + "'");
      }
      return cmd_simulate(scheme, sim_q, sim_s, sim_n, delta, delta_kappa, delta_l, trials, seed,
                          list_cap, alt_cap, fault, sim_out);
    }
    if (verify->parsed()) return cmd_verify(s_max, tolerance);
    if (info->parsed()) return cmd_polar_info(info_q, info_s);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
