#include "otcap/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace otcap {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#e377c2", "#7f7f7f", "#bcbd22"};
constexpr int kPaletteSize = 10;

std::string json_bool(bool v) { return v ? "true" : "false"; }

void split_label(const std::string& label, std::string& family, std::string& params_out,
                 const MethodSpec& spec) {
  const std::size_t colon = label.find(':');
  family = colon == std::string::npos ? label : label.substr(0, colon);
  params_out = spec.params();
}

}  // namespace

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string render_bounds_csv(const std::vector<MethodSpec>& methods,
                              const std::vector<SweepRow>& rows) {
  std::string out = "q,method,params,rate\n";
  for (const SweepRow& row : rows) {
    if (row.values.size() != methods.size()) {
      throw std::invalid_argument("render_bounds_csv: row width does not match method count");
    }
    for (std::size_t j = 0; j < methods.size(); ++j) {
      std::string family, params;
      split_label(methods[j].label(), family, params, methods[j]);
      out += format_g12(row.q);
      out += ',';
      out += family;
      out += ',';
      out += params;
      out += ',';
      out += format_g12(row.values[j]);
      out += '\n';
    }
  }
  return out;
}

std::string render_bounds_svg(const std::vector<MethodSpec>& methods,
                              const std::vector<SweepRow>& rows) {
  if (methods.empty() || rows.empty()) {
    throw std::invalid_argument("render_bounds_svg: nothing to plot");
  }
  const double width = 1000.0, height = 600.0;
  const double ml = 80.0, mr = 30.0, mt = 30.0, mb = 60.0;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;

  double qmin = rows.front().q, qmax = rows.back().q;
  if (qmax <= qmin) qmax = qmin + 1e-9;
  double vmax = 0.0;
  for (const SweepRow& r : rows) {
    for (double v : r.values) vmax = std::max(vmax, v);
  }
  if (vmax <= 0.0) vmax = 1.0;
  vmax *= 1.05;

  const auto sx = [&](double q) { return ml + (q - qmin) / (qmax - qmin) * pw; };
  const auto sy = [&](double v) { return mt + ph - v / vmax * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 600\" "
         "font-family=\"sans-serif\" font-size=\"14\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"600\" fill=\"white\"/>\n";

  // grid and ticks
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fq = qmin + (qmax - qmin) * i / nticks;
    const double fv = vmax * i / nticks;
    const double x = sx(fq), y = sy(fv);
    svg += "<line x1=\"" + format_g12(x) + "\" y1=\"" + format_g12(mt) + "\" x2=\"" +
           format_g12(x) + "\" y2=\"" + format_g12(mt + ph) + "\" stroke=\"#dddddd\"/>\n";
    svg += "<line x1=\"" + format_g12(ml) + "\" y1=\"" + format_g12(y) + "\" x2=\"" +
           format_g12(ml + pw) + "\" y2=\"" + format_g12(y) + "\" stroke=\"#dddddd\"/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%.3g", fq);
    svg += "<text x=\"" + format_g12(x) + "\" y=\"" + format_g12(mt + ph + 22.0) +
           "\" text-anchor=\"middle\">" + lbl + "</text>\n";
    std::snprintf(lbl, sizeof lbl, "%.3g", fv);
    svg += "<text x=\"" + format_g12(ml - 8.0) + "\" y=\"" + format_g12(y + 5.0) +
           "\" text-anchor=\"end\">" + lbl + "</text>\n";
  }
  svg += "<rect x=\"" + format_g12(ml) + "\" y=\"" + format_g12(mt) + "\" width=\"" +
         format_g12(pw) + "\" height=\"" + format_g12(ph) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg += "<text x=\"" + format_g12(ml + pw / 2) + "\" y=\"" + format_g12(height - 14.0) +
         "\" text-anchor=\"middle\">crossover probability q</text>\n";
  svg += "<text x=\"22\" y=\"" + format_g12(mt + ph / 2) + "\" text-anchor=\"middle\" " +
         "transform=\"rotate(-90 22 " + format_g12(mt + ph / 2) +
         ")\">rate (bits per use)</text>\n";

  for (std::size_t j = 0; j < methods.size(); ++j) {
    const char* color = kPalette[j % kPaletteSize];
    std::string pts;
    for (const SweepRow& r : rows) {
      if (r.values.size() != methods.size()) {
        throw std::invalid_argument("render_bounds_svg: row width does not match method count");
      }
      pts += format_g12(sx(r.q));
      pts += ',';
      pts += format_g12(sy(r.values[j]));
      pts += ' ';
    }
    if (!pts.empty()) pts.pop_back();
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    const double ly = mt + 14.0 + 20.0 * static_cast<double>(j);
    svg += "<line x1=\"" + format_g12(ml + pw - 150.0) + "\" y1=\"" + format_g12(ly - 5.0) +
           "\" x2=\"" + format_g12(ml + pw - 120.0) + "\" y2=\"" + format_g12(ly - 5.0) +
           "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_g12(ml + pw - 112.0) + "\" y=\"" + format_g12(ly) + "\">" +
           methods[j].label() + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_sim_json(const SimReport& rep) {
  std::string j = "{\n";
  j += "  \"scheme\": \"bsec\",\n";
  j += "  \"q\": " + format_g12(rep.q) + ",\n";
  j += "  \"n_uses\": " + std::to_string(rep.n_uses) + ",\n";
  j += "  \"n_blocks\": " + std::to_string(rep.n_blocks) + ",\n";
  j += "  \"trials\": " + std::to_string(rep.trials) + ",\n";
  j += "  \"seed\": " + std::to_string(rep.seed) + ",\n";
  j += "  \"lengths\": {\"m\": " + std::to_string(rep.len.m) +
       ", \"kappa\": " + std::to_string(rep.len.kappa) + ", \"l\": " + std::to_string(rep.len.l) +
       "},\n";
  j += "  \"margins\": {\"delta_m\": " + format_g12(rep.delta_m) +
       ", \"delta_kappa\": " + format_g12(rep.delta_kappa) +
       ", \"delta_l\": " + format_g12(rep.delta_l) + "},\n";
  j += "  \"aborts\": " + std::to_string(rep.aborts) + ",\n";
  j += "  \"decode_failures\": " + std::to_string(rep.decode_failures) + ",\n";
  j += "  \"key_errors\": " + std::to_string(rep.key_errors) + ",\n";
  j += "  \"abort_rate\": " + format_g12(rep.abort_rate) + ",\n";
  j += "  \"key_error_rate\": " + format_g12(rep.key_error_rate) + ",\n";
  j += "  \"key_error_ci\": [" + format_g12(rep.key_error_ci.lo) + ", " +
       format_g12(rep.key_error_ci.hi) + "],\n";
  j += "  \"receiver_privacy_exact\": " + json_bool(rep.privacy_exact_ok) + ",\n";
  j += "  \"receiver_privacy_chi2_p\": " + format_g12(rep.privacy_chi2_p) + ",\n";
  j += "  \"realized_rate_bits_per_use\": " + format_g12(rep.realized_rate) + "\n";
  j += "}\n";
  return j;
}

std::string render_cascade_json(const CascadeReport& rep) {
  std::string j = "{\n";
  j += "  \"scheme\": \"polar\",\n";
  j += "  \"s\": " + std::to_string(rep.s) + ",\n";
  j += "  \"q\": " + format_g12(rep.q) + ",\n";
  j += "  \"n_uses\": " + std::to_string(rep.n_uses) + ",\n";
  j += "  \"n_blocks\": " + std::to_string(rep.n_blocks) + ",\n";
  j += "  \"trials\": " + std::to_string(rep.trials) + ",\n";
  j += "  \"seed\": " + std::to_string(rep.seed) + ",\n";
  j += "  \"rounds\": [\n";
  for (std::size_t i = 0; i < rep.rounds.size(); ++i) {
    const CascadeRound& r = rep.rounds[i];
    j += "    {\"t\": " + std::to_string(r.t);
    j += ", \"erasure_prob\": " + format_g12(r.erasure_prob);
    j += ", \"h_good\": " + format_g12(r.h_good);
    j += ", \"h_bad\": " + format_g12(r.h_bad);
    j += ", \"delta_m\": " + format_g12(r.delta_m);
    j += ", \"scheduled\": " + json_bool(r.scheduled);
    j += ", \"m\": " + std::to_string(r.len.m);
    j += ", \"kappa\": " + std::to_string(r.len.kappa);
    j += ", \"l\": " + std::to_string(r.len.l);
    j += ", \"expected_alive\": " + std::to_string(r.expected_alive);
    j += ", \"instances\": " + std::to_string(r.instances);
    j += ", \"aborts\": " + std::to_string(r.aborts);
    j += ", \"decode_failures\": " + std::to_string(r.decode_failures);
    j += ", \"key_errors\": " + std::to_string(r.key_errors) + "}";
    j += i + 1 < rep.rounds.size() ? ",\n" : "\n";
  }
  j += "  ],\n";
  j += "  \"realized_rate_bits_per_use\": " + format_g12(rep.realized_rate) + "\n";
  j += "}\n";
  return j;
}

}  // namespace otcap
