#include "doctest.h"
#include "otcap/report.hpp"

#include <stdexcept>
#include <string>
#include <vector>

using namespace otcap;

namespace {

int count_occurrences(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (std::size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("number formatting is short and stable") {
  CHECK(format_g12(0.1) == "0.1");
  CHECK(format_g12(0.25) == "0.25");
  CHECK(format_g12(2.0) == "2");
  CHECK(format_g12(0.08144844788960313) == "0.0814484478896");
}

TEST_CASE("csv rows are exact") {
  const std::vector<MethodSpec> methods = {parse_method("extension"), parse_method("polar:2"),
                                           parse_method("ska:literal")};
  const std::vector<SweepRow> rows = sweep_bounds(methods, 0.1, 0.1, 0.01);
  REQUIRE(rows.size() == 1);

  std::string want = "q,method,params,rate\n";
  want += "0.1,extension,," + format_g12(extension_bound(0.1)) + "\n";
  want += "0.1,polar,s=2," + format_g12(polar_bound(0.1, 2)) + "\n";
  want += "0.1,ska,variant=literal," +
          format_g12(interactive_ska_bound(0.1, SkaVariant::kLiteral)) + "\n";
  CHECK(render_bounds_csv(methods, rows) == want);

  std::vector<SweepRow> bad = rows;
  bad[0].values.pop_back();
  CHECK_THROWS_AS(render_bounds_csv(methods, bad), std::invalid_argument);
}

TEST_CASE("svg has one polyline per method") {
  const std::vector<MethodSpec> methods = {parse_method("extension"), parse_method("upper")};
  const std::vector<SweepRow> rows = sweep_bounds(methods, 0.05, 0.45, 0.05);
  const std::string svg = render_bounds_svg(methods, rows);

  CHECK(svg.substr(0, 4) == "<svg");
  CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  CHECK(count_occurrences(svg, "<polyline") == 2);
  CHECK(count_occurrences(svg, "#1f77b4") == 2);  // curve and its legend stroke
  CHECK(count_occurrences(svg, "#d62728") == 2);
  CHECK(svg.find("crossover probability q") != std::string::npos);
  CHECK(svg.find("rate (bits per use)") != std::string::npos);
  CHECK(svg.find(">extension<") != std::string::npos);
  CHECK(svg.find(">upper<") != std::string::npos);

  CHECK_THROWS_AS(render_bounds_svg(methods, {}), std::invalid_argument);
}

TEST_CASE("simulation json renders byte-identical across runs") {
  BsecSimConfig cfg;
  cfg.q = 0.1;
  cfg.n_uses = 600;
  cfg.trials = 30;
  cfg.seed = 11;
  const std::string a = render_sim_json(simulate_bsec(cfg));
  const std::string b = render_sim_json(simulate_bsec(cfg));
  CHECK(a == b);
  CHECK(a.find("\"scheme\": \"bsec\"") != std::string::npos);
  CHECK(a.find("\"lengths\": {\"m\": 39, \"kappa\": 6, \"l\": 31}") != std::string::npos);
  CHECK(a.find("\"key_error_ci\": [") != std::string::npos);
  CHECK(a.find("timestamp") == std::string::npos);
  CHECK(a.back() == '\n');
}

TEST_CASE("cascade json renders byte-identical across runs") {
  CascadeConfig cfg;
  cfg.s = 2;
  cfg.q = 0.1;
  cfg.n_uses = 1024;
  cfg.trials = 3;
  cfg.seed = 7;
  const std::string a = render_cascade_json(run_cascade(cfg));
  const std::string b = render_cascade_json(run_cascade(cfg));
  CHECK(a == b);
  CHECK(a.find("\"scheme\": \"polar\"") != std::string::npos);
  CHECK(a.find("\"rounds\": [") != std::string::npos);
  CHECK(count_occurrences(a, "\"t\": ") == 3);
  CHECK(a.find("\"realized_rate_bits_per_use\": ") != std::string::npos);
}
