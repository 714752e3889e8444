// mixlab: L^p mixing times of random walks on finite weighted graphs,
// resistance-based bounds, spectral Gromov-Hausdorff distances, and
// reproducible ensemble experiments.
//
// Exit codes: 0 ok, 2 bad input, 3 mixing horizon exceeded, 4 grid
// mismatch, 5 precondition failed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mixlab/bounds.hpp"
#include "mixlab/ensembles.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/json_io.hpp"
#include "mixlab/rational_kernel.hpp"
#include "mixlab/sgh.hpp"

using namespace mixlab;

namespace {

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return kPInf;
  double p = std::stod(s);
  if (p < 1.0) throw Error("p must lie in [1, inf]");
  return p;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

// plain key = value configuration files; '#' starts a comment
std::map<std::string, std::string> parse_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream is(path);
  if (!is) throw Error("cannot open config file " + path);
  std::string line;
  long ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(ln, "expected key = value");
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

WeightedGraph load_graph(const std::string& path) {
  return WeightedGraph::deserialize(read_text(path));
}

FamilySpec family_from_flags(const std::string& name, double er_lambda,
                             const std::string& offspring, double alpha, int dim,
                             const std::string& weight_law) {
  FamilySpec f;
  f.name = name;
  f.er_lambda = er_lambda;
  f.box_dim = dim;
  f.range_dim = dim;
  if (offspring == "poisson1") f.offspring = OffspringSpec::poisson1();
  else if (offspring == "geometric-half") f.offspring = OffspringSpec::geometric_half();
  else if (offspring == "stable") f.offspring = OffspringSpec::stable(alpha);
  else throw Error("unknown offspring law '" + offspring + "'");
  if (weight_law.rfind("uniform:", 0) == 0) {
    auto v = parse_list(weight_law.substr(8));
    if (v.size() != 2) throw Error("weight law wants uniform:a,b");
    f.weight_law = WeightLaw::uniform(v[0], v[1]);
  } else if (weight_law.rfind("const:", 0) == 0) {
    f.weight_law = WeightLaw::constant(std::stod(weight_law.substr(6)));
  } else {
    throw Error("unknown weight law '" + weight_law + "'");
  }
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixing times of random walks on finite weighted graphs"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t seed = 20240807;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out = "-";
  std::string format = "json";
  app.add_option("--seed", seed, "master seed");
  app.add_option("--jobs", jobs, "worker threads for draw-level parallelism");
  app.add_option("--out", out, "output path ('-' for stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // ---- compute ----
  auto* ccomp = app.add_subcommand("compute", "mixing report for one graph");
  std::string graph_file, pstr = "1";
  double threshold = 0.25;
  bool rational = false, interpolated = false, csv = false;
  long horizon = -1;
  ccomp->add_option("graph", graph_file, "graph file")->required();
  ccomp->add_option("--p", pstr, "p in [1, inf], e.g. 1, 2, inf");
  ccomp->add_option("--threshold", threshold, "mixing threshold (default 1/4)");
  ccomp->add_flag("--rational", rational, "exact rational mode (p in {1,2,inf})");
  ccomp->add_flag("--interpolated", interpolated, "real-time mixing via interpolation");
  ccomp->add_flag("--csv", csv, "emit the (m, sup_x D_p) curve as CSV");
  ccomp->add_option("--horizon", horizon, "mixing horizon cap override");

  // ---- generate ----
  auto* cgen = app.add_subcommand("generate", "sample ensemble draws to graph files");
  std::string gfam = "er", goff = "poisson1", gwl = "uniform:0.5,1.5", gdir = ".";
  double gsize = 1000, glambda = 0.0, galpha = 1.5;
  int gdim = 5;
  long gdraws = 1;
  cgen->add_option("--family", gfam, "path|box|cycle|er|gw|gasket|range")->required();
  cgen->add_option("--size", gsize, "size parameter (N, side, or level)")->required();
  cgen->add_option("--draws", gdraws, "number of draws");
  cgen->add_option("--lambda", glambda, "ER window parameter");
  cgen->add_option("--offspring", goff, "poisson1|geometric-half|stable");
  cgen->add_option("--alpha", galpha, "stable offspring index in (1,2)");
  cgen->add_option("--dim", gdim, "dimension (box/range)");
  cgen->add_option("--weight-law", gwl, "gasket weights: uniform:a,b or const:c");
  cgen->add_option("--dir", gdir, "output directory");

  // ---- converge ----
  auto* cconv = app.add_subcommand("converge", "rescaled mixing-time convergence experiment");
  std::string vfam = "path", voff = "poisson1", vwl = "uniform:0.5,1.5", vp = "inf";
  std::string vsizes = "64,128,256";
  double vlambda = 0.0, valpha = 1.5;
  int vdim = 1;
  long vdraws = 1;
  bool vinteger = false;
  cconv->add_option("--family", vfam, "path|box|cycle|er|gw|gasket|range")->required();
  cconv->add_option("--sizes", vsizes, "comma-separated size ladder")->required();
  cconv->add_option("--draws", vdraws, "draws per size");
  cconv->add_option("--p", vp, "p in [1, inf]");
  cconv->add_option("--lambda", vlambda, "ER window parameter");
  cconv->add_option("--offspring", voff, "poisson1|geometric-half|stable");
  cconv->add_option("--alpha", valpha, "stable offspring index");
  cconv->add_option("--dim", vdim, "dimension (box/range)");
  cconv->add_option("--weight-law", vwl, "gasket weight law");
  cconv->add_flag("--integer", vinteger, "integer mixing times instead of interpolated");

  // ---- tails ----
  auto* ctail = app.add_subcommand("tails", "tail estimates of rescaled mixing times");
  std::string tfam = "er", toff = "poisson1", twl = "uniform:0.5,1.5", tlams;
  double tsize = 2000, tlambda = 0.0, talpha = 1.5;
  int tdim = 5;
  long tdraws = 100;
  ctail->add_option("--family", tfam, "er|gw|gasket|range")->required();
  ctail->add_option("--size", tsize, "size parameter")->required();
  ctail->add_option("--draws", tdraws, "number of draws (>= 50)");
  ctail->add_option("--lambdas", tlams, "comma-separated lambda grid (default: quantiles)");
  ctail->add_option("--lambda", tlambda, "ER window parameter");
  ctail->add_option("--offspring", toff, "offspring law");
  ctail->add_option("--alpha", talpha, "stable offspring index");
  ctail->add_option("--dim", tdim, "dimension");
  ctail->add_option("--weight-law", twl, "gasket weight law");

  // ---- bounds ----
  auto* cbnd = app.add_subcommand("bounds", "resistance-based mixing-time bounds");
  std::string bgraph, bspec = "linear", bconfig;
  double bR = 4.0, blambda = 2.0;
  std::string bH = "0,2,1,1";
  double bc1 = 1.0;
  bool bmeasure = true;
  cbnd->add_option("graph", bgraph, "graph file")->required();
  cbnd->add_option("--R", bR, "ball radius");
  cbnd->add_option("--lambda", blambda, "lambda >= 1");
  cbnd->add_option("--H", bH, "H0,H1,H2,H3");
  cbnd->add_option("--spec", bspec, "linear|quadratic|er|gw|gasket|srw");
  cbnd->add_option("--c1", bc1, "eps0 constant c1");
  cbnd->add_option("--config", bconfig, "key = value file overriding the flags");
  cbnd->add_flag("--measure,!--no-measure", bmeasure, "also measure t_mix for comparison");

  // ---- ghdist ----
  auto* cgh = app.add_subcommand("ghdist", "spectral Gromov-Hausdorff upper bound");
  std::string fileA, fileB;
  long budget = 2000000;
  cgh->add_option("a", fileA, "triple file A (json)")->required();
  cgh->add_option("b", fileB, "triple file B (json)")->required();
  cgh->add_option("--budget", budget, "correspondence search budget");

  // ---- triple ----
  auto* ctri = app.add_subcommand("triple", "package a graph as a metric-measure-kernel triple");
  std::string trgraph, trgrid = "0.5,1,2";
  double trgamma = 1.0;
  ctri->add_option("graph", trgraph, "graph file")->required();
  ctri->add_option("--grid", trgrid, "time grid knots, inside (0, inf)");
  ctri->add_option("--gamma", trgamma, "time scale gamma");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ccomp) {
      double p = parse_p(pstr);
      auto g = load_graph(graph_file);
      MixingReport rep;
      if (rational) {
        RationalKernel rk(g);
        RationalP rp;
        if (pstr == "1") rp = RationalP::One;
        else if (pstr == "2") rp = RationalP::Two;
        else if (pstr == "inf") rp = RationalP::Inf;
        else throw Error("rational mode supports p in {1, 2, inf}");
        // exact threshold from the double (binary expansion)
        auto rr = rk.mixing_time(rp, mpq_class(threshold), horizon);
        rep.p = p;
        rep.threshold = threshold;
        rep.t_integer = rr.t_global;
        rep.t_real = double(rr.t_global);
        rep.rational_exact = true;
        rep.backend = "rational";
        for (long t : rr.per_vertex) rep.per_vertex_real.push_back(double(t));
      } else {
        KernelEvaluator k(g);
        MixingOptions mo;
        mo.threshold = threshold;
        mo.interpolated = interpolated;
        mo.horizon = horizon;
        rep = mixing_time(k, p, mo);
      }
      if (csv || format == "csv") write_text(out, mixing_report_csv(rep));
      else write_text(out, to_json(rep).dump(2) + "\n");
    } else if (*cgen) {
      auto fam = family_from_flags(gfam, glambda, goff, galpha, gdim, gwl);
      json manifest;
      manifest["family"] = gfam;
      manifest["size"] = gsize;
      manifest["seed"] = seed;
      manifest["draws"] = gdraws;
      json items = json::array();
      std::filesystem::create_directories(gdir);
      for (long i = 0; i < gdraws; ++i) {
        Draw d = make_draw(fam, gsize, seed, i);
        std::string name = gfam + "_" + std::to_string((long)gsize) + "_" +
                           std::to_string(seed) + "_" + std::to_string(i) + ".mixgraph";
        write_text(gdir + "/" + name, d.graph.serialize());
        items.push_back({{"file", name},
                         {"draw_index", i},
                         {"n", d.graph.vertex_count()},
                         {"metadata", d.metadata}});
      }
      manifest["items"] = items;
      write_text(gdir + "/manifest.json", manifest.dump(2) + "\n");
      if (out != "-") write_text(out, manifest.dump(2) + "\n");
    } else if (*cconv) {
      auto fam = family_from_flags(vfam, vlambda, voff, valpha, vdim, vwl);
      ConvergeOptions co;
      co.jobs = jobs;
      co.interpolated = !vinteger;
      auto res = run_converge(fam, parse_list(vsizes), vdraws, seed, parse_p(vp), co);
      write_text(out, to_json(res).dump(2) + "\n");
    } else if (*ctail) {
      auto fam = family_from_flags(tfam, tlambda, toff, talpha, tdim, twl);
      auto res = run_tails(fam, tsize, tdraws, tlams.empty() ? std::vector<double>{} : parse_list(tlams),
                           seed, jobs);
      write_text(out, to_json(res).dump(2) + "\n");
    } else if (*cbnd) {
      auto g = load_graph(bgraph);
      if (!bconfig.empty()) {
        auto kv = parse_config(bconfig);
        if (kv.count("R")) bR = std::stod(kv["R"]);
        if (kv.count("lambda")) blambda = std::stod(kv["lambda"]);
        if (kv.count("H")) bH = kv["H"];
        if (kv.count("spec")) bspec = kv["spec"];
        if (kv.count("c1")) bc1 = std::stod(kv["c1"]);
      }
      auto Hv = parse_list(bH);
      if (Hv.size() != 4) throw Error("H wants four entries H0,H1,H2,H3");
      std::array<double, 4> H{Hv[0], Hv[1], Hv[2], Hv[3]};
      GrowthSpec spec = GrowthSpec::power_law(1.0, 1.0);
      if (bspec == "linear") spec = GrowthSpec::power_law(1.0, 1.0);
      else if (bspec == "quadratic") spec = GrowthSpec::power_law(2.0, 1.0);
      else spec = preset(bspec == "srw" ? "srw-range" : bspec == "er" ? "er-critical"
                         : bspec == "gw" ? "gw-tree" : bspec).spec;
      int root = g.root().value_or(0);
      ResistanceOracle oracle(g);
      json j;
      j["config"] = {{"R", bR}, {"lambda", blambda}, {"H", H}, {"spec", bspec}, {"c1", bc1}};
      auto ub = upper_bound(g, oracle);
      j["upper_bound"] = {{"value", ub.bound},
                          {"resistance_diameter", ub.diameter},
                          {"diameter_exact", ub.diameter_exact},
                          {"mass", ub.mass}};
      auto cond = check_conditions(g, oracle, root, bR, blambda, H, spec);
      j["conditions"] = to_json(cond);
      try {
        j["lower_bound_global"] = lower_bound_global(g, cond, spec);
      } catch (const PreconditionFailed& e) {
        j["lower_bound_global_error"] = e.clause;
      }
      double eps = spec.eps0(blambda, H, bc1);
      j["eps0"] = eps;
      try {
        auto cond_eps = check_conditions(g, oracle, root, eps * bR, blambda, H, spec);
        j["conditions_eps"] = to_json(cond_eps);
        j["lower_bound_point"] = lower_bound_point(g, cond, cond_eps, spec, bc1);
      } catch (const PreconditionFailed& e) {
        j["lower_bound_point_error"] = e.clause;
      } catch (const Error& e) {
        j["lower_bound_point_error"] = e.what();
      }
      j["exit_time"] = to_json(exit_time_bounds_check(g, oracle, root, bR, blambda, H, spec, bc1));
      if (bmeasure) {
        KernelEvaluator k(g);
        MixingOptions mo;
        mo.interpolated = false;
        j["measured"] = {{"tmix_inf", mixing_time(k, kPInf, mo).t_integer},
                         {"tmix_1", mixing_time(k, 1.0, mo).t_integer}};
      }
      bool precondition_ok = !j.contains("lower_bound_global_error");
      write_text(out, j.dump(2) + "\n");
      if (!precondition_ok) return 5;
    } else if (*cgh) {
      auto A = triple_from_json(json::parse(read_text(fileA)));
      auto B = triple_from_json(json::parse(read_text(fileB)));
      auto est = delta_estimate(A, B, budget, seed);
      json j;
      j["value"] = est.value;
      j["certified"] = "upper-bound";
      j["exhaustive"] = est.exhaustive;
      j["parts"] = {{"hausdorff", est.parts.hausdorff_term},
                    {"prohorov", est.parts.prohorov_term},
                    {"prohorov_exact", est.parts.prohorov_exact},
                    {"correspondence", est.parts.correspondence_term}};
      json w = json::array();
      for (auto [x, y] : est.witness.pairs) w.push_back({x, y});
      j["witness"] = w;
      write_text(out, j.dump(2) + "\n");
    } else if (*ctri) {
      auto g = load_graph(trgraph);
      KernelEvaluator k(g);
      auto t = graph_triple(g, k, parse_list(trgrid), trgamma);
      write_text(out, to_json(t).dump() + "\n");
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GridMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const NotMixedWithinHorizon& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
