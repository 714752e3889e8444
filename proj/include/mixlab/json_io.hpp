#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "mixlab/bounds.hpp"
#include "mixlab/ensembles.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/kernel.hpp"
#include "mixlab/sgh.hpp"

namespace mixlab {

using json = nlohmann::json;

inline json to_json(const WeightedGraph& g) {
  json j;
  j["n"] = g.vertex_count();
  if (g.root()) j["root"] = *g.root();
  switch (g.metric().mode) {
    case MetricMode::GraphDistance: j["metric"] = {{"mode", "graph"}}; break;
    case MetricMode::ScaledGraphDistance:
      j["metric"] = {{"mode", "scaled"}, {"scale", g.metric().scale}};
      break;
    case MetricMode::Explicit:
      j["metric"] = {{"mode", "explicit"}, {"matrix", g.metric().matrix}};
      break;
  }
  json edges = json::array();
  for (size_t e = 0; e < g.edges().size(); ++e) {
    const auto& ed = g.edges()[e];
    edges.push_back({ed.u, ed.v, ed.w});
  }
  j["edges"] = edges;
  if (g.has_exact_weights()) {
    json ew = json::array();
    for (size_t e = 0; e < g.edges().size(); ++e) ew.push_back(g.exact_weight(e).get_str());
    j["exact_weights"] = ew;
  }
  j["labels"] = g.labels();
  return j;
}

inline json to_json(const MixingReport& r) {
  json j;
  j["p"] = r.p == kPInf ? json("inf") : json(r.p);
  j["threshold"] = r.threshold;
  j["mode"] = r.interpolated_mode ? "interpolated" : "integer";
  j["t_integer"] = r.t_integer;
  j["t_real"] = r.t_real;
  j["approximate_sup"] = r.approximate_sup;
  j["rational_exact"] = r.rational_exact;
  j["horizon"] = r.horizon;
  j["backend"] = r.backend;
  if (!r.per_vertex_real.empty()) j["per_vertex"] = r.per_vertex_real;
  if (!r.sup_curve.empty()) {
    json c = json::array();
    for (auto [m, v] : r.sup_curve) c.push_back({m, v});
    j["sup_curve"] = c;
  }
  return j;
}

inline std::string mixing_report_csv(const MixingReport& r) {
  std::string out = "m,sup_dp\n";
  for (auto [m, v] : r.sup_curve) {
    out += std::to_string(m);
    out += ",";
    char buf[32];
    snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    out += "\n";
  }
  return out;
}

inline json to_json(const BoundConditions& c) {
  return json{{"lambda", c.lambda},
              {"H", c.H},
              {"h2_prime", c.h2_prime},
              {"R", c.R},
              {"inner_radius", c.inner_radius},
              {"res_upper", c.res_upper},
              {"vol_upper", c.vol_upper},
              {"res_lower", c.res_lower},
              {"vol_inner", c.vol_inner},
              {"res_upper_margin", c.res_upper_margin},
              {"vol_upper_margin", c.vol_upper_margin},
              {"res_lower_margin", c.res_lower_margin},
              {"vol_inner_margin", c.vol_inner_margin},
              {"V_R", c.V_R},
              {"V_inner", c.V_inner},
              {"boundary_resistance", c.boundary_resistance}};
}

inline json to_json(const ExitTimeReport& r) {
  return json{{"a5_applicable", r.a5_applicable},
              {"a5_margin", r.a5_margin},
              {"a6_applicable", r.a6_applicable},
              {"a6_margin", r.a6_margin},
              {"a7_applicable", r.a7_applicable},
              {"a7_margin", r.a7_margin},
              {"expectation_upper", r.expectation_upper},
              {"expectation_lower", r.expectation_lower},
              {"bootstrap_evaluated", r.bootstrap_evaluated},
              {"bootstrap_lhs", r.bootstrap_lhs},
              {"bootstrap_factor", r.bootstrap_factor},
              {"bootstrap_implied_c1", r.bootstrap_implied_c1}};
}

inline json to_json(const FiniteTriple& t) {
  json j;
  j["n"] = t.size();
  j["distances"] = t.dist;
  j["weights"] = t.weights;
  j["grid"] = t.grid;
  j["kernel"] = t.kernel;
  if (t.root) j["root"] = *t.root;
  return j;
}

inline FiniteTriple triple_from_json(const json& j) {
  FiniteTriple t;
  t.dist = j.at("distances").get<std::vector<std::vector<double>>>();
  t.weights = j.at("weights").get<std::vector<double>>();
  t.grid = j.at("grid").get<std::vector<double>>();
  t.kernel = j.at("kernel").get<std::vector<std::vector<std::vector<double>>>>();
  if (j.contains("root")) t.root = j.at("root").get<int>();
  t.validate();
  return t;
}

inline json to_json(const SizeSummary& s) {
  return json{{"size", s.size},       {"gamma", s.gamma}, {"rescaled", s.rescaled},
              {"mean", s.mean},       {"q10", s.q10},     {"q25", s.q25},
              {"q50", s.q50},         {"q75", s.q75},     {"q90", s.q90},
              {"ks_prev", s.ks_prev}};
}

inline json to_json(const ConvergeResult& r) {
  json j;
  j["family"] = r.family.name;
  j["sizes"] = r.sizes;
  j["draws"] = r.draws;
  j["seed"] = r.seed;
  j["p"] = r.p == kPInf ? json("inf") : json(r.p);
  j["pointed"] = r.pointed;
  json per = json::array();
  for (const auto& size_recs : r.per_size) {
    json rows = json::array();
    for (const auto& rec : size_recs)
      rows.push_back({{"index", rec.index},
                      {"n", rec.n},
                      {"mass", rec.mass},
                      {"tmix_integer", rec.tmix_integer},
                      {"tmix_real", rec.tmix_real},
                      {"meta", rec.meta}});
    per.push_back(rows);
  }
  j["per_size"] = per;
  json sm = json::array();
  for (const auto& s : r.summary) sm.push_back(to_json(s));
  j["summary"] = sm;
  if (r.oracle) {
    j["oracle"] = {{"p", r.oracle->p == kPInf ? json("inf") : json(r.oracle->p)},
                   {"limit", r.oracle->oracle_limit},
                   {"fitted_constant", r.oracle->fitted_constant},
                   {"rescaled", r.oracle->rescaled},
                   {"rel_error", r.oracle->rel_error}};
  }
  return j;
}

inline json to_json(const TailsResult& r) {
  json j;
  j["family"] = r.family.name;
  j["size"] = r.size;
  j["draws"] = r.draws;
  j["seed"] = r.seed;
  j["gamma"] = r.gamma;
  j["upper_samples"] = r.upper_samples;
  j["lower_samples"] = r.lower_samples;
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"lambda", p.lambda},
                   {"upper_tail", p.upper_tail},
                   {"upper_lo", p.upper_lo},
                   {"upper_hi", p.upper_hi},
                   {"lower_tail", p.lower_tail},
                   {"lower_lo", p.lower_lo},
                   {"lower_hi", p.lower_hi}});
  j["points"] = pts;
  j["upper_fit"] = {{"slope", r.upper_fit.slope},
                    {"intercept", r.upper_fit.intercept},
                    {"r_squared", r.upper_fit.r_squared},
                    {"axis", r.upper_axis}};
  j["upper_monotone"] = r.upper_monotone;
  j["lower_monotone"] = r.lower_monotone;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot open output file " + path);
  os << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open input file " + path);
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace mixlab
