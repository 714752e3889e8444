#include <catch2/catch_amalgamated.hpp>

#include "mixlab/ensembles.hpp"
#include "mixlab/sgh.hpp"
#include "oracles.hpp"

using namespace mixlab;
using Catch::Matchers::WithinAbs;

namespace {

// random triple: points in the plane (metric for free), normalized weights,
// symmetric kernel tensor on a 3-knot grid
FiniteTriple random_triple(int n, std::uint64_t seed) {
  Rng rng(seed);
  FiniteTriple t;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(rng.u01() * 2.0, rng.u01() * 2.0);
  t.dist.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
      t.dist[i][j] = t.dist[j][i] = std::sqrt(dx * dx + dy * dy);
    }
  t.weights.assign(n, 0.0);
  double mass = 0;
  for (int i = 0; i < n; ++i) {
    t.weights[i] = 0.2 + rng.u01();
    mass += t.weights[i];
  }
  for (auto& w : t.weights) w /= mass;
  t.grid = {0.5, 1.0, 2.0};
  t.kernel.assign(3, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        t.kernel[k][i][j] = t.kernel[k][j][i] = 0.5 + rng.u01();
  t.validate();
  return t;
}

FiniteTriple relabel(const FiniteTriple& t, const std::vector<int>& perm) {
  int n = t.size();
  FiniteTriple s = t;
  for (int i = 0; i < n; ++i) {
    s.weights[perm[i]] = t.weights[i];
    for (int j = 0; j < n; ++j) s.dist[perm[i]][perm[j]] = t.dist[i][j];
    for (size_t k = 0; k < t.grid.size(); ++k)
      for (int j = 0; j < n; ++j) s.kernel[k][perm[i]][perm[j]] = t.kernel[k][i][j];
  }
  if (t.root) s.root = perm[*t.root];
  return s;
}

bool equivalent_by_permutation(const FiniteTriple& a, const FiniteTriple& b) {
  if (a.size() != b.size()) return false;
  int n = a.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (a.weights[i] != b.weights[perm[i]]) ok = false;
      for (int j = 0; j < n && ok; ++j) {
        if (a.dist[i][j] != b.dist[perm[i]][perm[j]]) ok = false;
        for (size_t k = 0; k < a.grid.size() && ok; ++k)
          if (a.kernel[k][i][j] != b.kernel[k][perm[i]][perm[j]]) ok = false;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

TEST_CASE("hausdorff basics") {
  std::vector<std::vector<double>> d{{0, 2, 3}, {2, 0, 4}, {3, 4, 0}};
  CHECK(hausdorff({0, 1, 2}, {0, 1, 2}, d) == 0.0);
  CHECK(hausdorff({0}, {1}, d) == 2.0);
  // A inside B: one-sided collapse
  CHECK(hausdorff({0, 1}, {0, 1, 2}, d) == 3.0);
}

TEST_CASE("prohorov basics and closed forms") {
  std::vector<std::vector<double>> d{{0, 0.4}, {0.4, 0}};
  std::vector<double> mu{1.0, 0.0}, nu{0.0, 1.0};
  auto same = prohorov(mu, mu, d);
  CHECK(same.value == 0.0);
  auto point = prohorov(mu, nu, d);
  CHECK(point.exact);
  CHECK_THAT(point.value, WithinAbs(0.4, 1e-12));  // min(d, 1) with d < 1
  std::vector<std::vector<double>> dbig{{0, 7.0}, {7.0, 0}};
  CHECK_THAT(prohorov(mu, nu, dbig).value, WithinAbs(1.0, 1e-12));  // capped at 1
}

TEST_CASE("prohorov exact vs coupling bound on random instances") {
  for (int trial = 0; trial < 12; ++trial) {
    auto t = random_triple(8, 9000 + trial);
    Rng rng(trial);
    std::vector<double> mu(8, 0.0), nu(8, 0.0);
    double ma = 0, mb = 0;
    for (int i = 0; i < 8; ++i) {
      mu[i] = rng.u01();
      nu[i] = rng.u01();
      ma += mu[i];
      mb += nu[i];
    }
    for (int i = 0; i < 8; ++i) {
      mu[i] /= ma;
      nu[i] /= mb;
    }
    double exact = detail::prohorov_one_sided(mu, nu, t.dist);
    exact = std::max(exact, detail::prohorov_one_sided(nu, mu, t.dist));
    double bound = detail::prohorov_coupling_bound(mu, nu, t.dist);
    CHECK(exact <= bound + 1e-9);
  }
  // requesting exact beyond the cutoff throws
  std::vector<double> mu(16, 1.0 / 16), nu(16, 1.0 / 16);
  std::vector<std::vector<double>> d(16, std::vector<double>(16, 1.0));
  for (int i = 0; i < 16; ++i) d[i][i] = 0;
  CHECK_THROWS_AS(prohorov(mu, nu, d, true), AmbientTooLargeForExact);
}

TEST_CASE("distortion on two-point spaces") {
  std::vector<std::vector<double>> dA{{0, 1.0}, {1.0, 0}};
  std::vector<std::vector<double>> dB{{0, 2.5}, {2.5, 0}};
  Correspondence id;
  id.pairs = {{0, 0}, {1, 1}};
  CHECK(distortion(id, dA, dA) == 0.0);
  CHECK_THAT(distortion(id, dA, dB), WithinAbs(1.5, 1e-15));  // |a - b|
  Correspondence full;
  full.pairs = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK_THAT(distortion(full, dA, dB), WithinAbs(2.5, 1e-15));  // max(a, b)
  // sub-correspondence takes sup over fewer pairs
  CHECK(distortion(id, dA, dB) <= distortion(full, dA, dB));
}

TEST_CASE("delta_upper vanishes on identical and relabeled triples") {
  auto t = random_triple(4, 42);
  Correspondence id;
  for (int i = 0; i < 4; ++i) id.pairs.emplace_back(i, i);
  auto bd = delta_upper(t, t, id);
  CHECK(bd.total == 0.0);

  std::vector<int> perm{2, 0, 3, 1};
  auto s = relabel(t, perm);
  Correspondence match;
  for (int i = 0; i < 4; ++i) match.pairs.emplace_back(i, perm[i]);
  CHECK(delta_upper(t, s, match).total == 0.0);
}

TEST_CASE("kernel offset shows up as exactly the offset") {
  auto t = random_triple(4, 77);
  auto s = t;
  const double c = 0.3125;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s.kernel[1][i][j] += c;
  Correspondence id;
  for (int i = 0; i < 4; ++i) id.pairs.emplace_back(i, i);
  auto bd = delta_upper(t, s, id);
  CHECK_THAT(bd.total, WithinAbs(c, 1e-12));
  CHECK(bd.hausdorff_term == 0.0);
  CHECK(bd.prohorov_term == 0.0);
}

TEST_CASE("grid mismatch is refused") {
  auto a = random_triple(3, 1);
  auto b = random_triple(3, 2);
  b.grid = {0.5, 1.0, 2.5};
  Correspondence id;
  for (int i = 0; i < 3; ++i) id.pairs.emplace_back(i, i);
  CHECK_THROWS_AS(delta_upper(a, b, id), GridMismatch);
  CHECK_THROWS_AS(delta_estimate(a, b), GridMismatch);
}

TEST_CASE("estimate is below any hand-picked correspondence") {
  auto a = random_triple(3, 100);
  auto b = random_triple(3, 200);
  auto est = delta_estimate(a, b);
  REQUIRE(est.exhaustive);
  Correspondence hand;
  hand.pairs = {{0, 1}, {1, 2}, {2, 0}};
  CHECK(est.value <= delta_upper(a, b, hand).total + 1e-12);
  Correspondence id;
  id.pairs = {{0, 0}, {1, 1}, {2, 2}};
  CHECK(est.value <= delta_upper(a, b, id).total + 1e-12);
}

TEST_CASE("estimate is symmetric exactly") {
  for (int trial = 0; trial < 6; ++trial) {
    auto a = random_triple(3 + trial % 2, 300 + trial);
    auto b = random_triple(4 - trial % 2, 400 + trial);
    CHECK(delta_estimate(a, b).value == delta_estimate(b, a).value);
  }
}

TEST_CASE("estimate is zero iff an equivalence relabeling exists") {
  for (int trial = 0; trial < 8; ++trial) {
    auto a = random_triple(4, 500 + trial);
    if (trial % 2 == 0) {
      std::vector<int> perm{1, 3, 0, 2};
      auto b = relabel(a, perm);
      auto est = delta_estimate(a, b);
      CHECK(est.value == 0.0);
      CHECK(equivalent_by_permutation(a, b));
    } else {
      auto b = random_triple(4, 9100 + trial);
      auto est = delta_estimate(a, b);
      CHECK(est.value > 1e-6);
      CHECK_FALSE(equivalent_by_permutation(a, b));
    }
  }
}

TEST_CASE("triangle inequality through composed witnesses") {
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_triple(3, 600 + trial);
    auto b = random_triple(4, 700 + trial);
    auto c = random_triple(3, 800 + trial);
    auto eab = delta_estimate(a, b);
    auto ebc = delta_estimate(b, c);
    auto eac = delta_estimate(a, c);
    auto composed = compose(eab.witness, ebc.witness);
    double via = delta_upper(a, c, composed).total;
    double lhs = std::min(eac.value, via);
    CHECK(lhs <= eab.value + ebc.value + 1e-9);
  }
}

TEST_CASE("rooted triples force the root pair") {
  auto a = random_triple(3, 901);
  auto b = random_triple(3, 902);
  a.root = 1;
  b.root = 2;
  auto est = delta_estimate(a, b);
  bool found = false;
  for (auto [x, y] : est.witness.pairs)
    if (x == 1 && y == 2) found = true;
  CHECK(found);
}

TEST_CASE("graph triples") {
  auto k2 = build_graph({{0, 1, 1.0}});
  KernelEvaluator k(k2);
  auto t = graph_triple(k2, k, {1.0}, 1.0);
  t.validate();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK_THAT(t.kernel[0][i][j], WithinAbs(1.0, 1e-12));

  CHECK_THROWS_AS(graph_triple(k2, k, {0.0, 1.0}, 1.0), Error);

  auto p4 = path_graph(4);
  KernelEvaluator k4(p4);
  auto t4 = graph_triple(p4, k4, {0.5, 1.0, 2.0}, 2.0);
  t4.validate();
  Correspondence id;
  for (int i = 0; i < 4; ++i) id.pairs.emplace_back(i, i);
  CHECK(delta_upper(t4, t4, id).total == 0.0);
}

TEST_CASE("tightness modulus diagnostics") {
  // constant kernels give an all-zero table
  auto a = random_triple(4, 1000);
  auto b = random_triple(5, 1001);
  for (auto* t : {&a, &b})
    for (auto& Q : t->kernel)
      for (auto& row : Q) std::fill(row.begin(), row.end(), 1.0);
  auto table = tightness_modulus({a, b}, {0.0, 0.1, 0.5});
  for (const auto& row : table)
    for (double v : row) CHECK(v == 0.0);

  // delta = 0 column vanishes; modulus grows with delta
  auto c = random_triple(5, 1002);
  auto d = random_triple(5, 1003);
  auto tab = tightness_modulus({c, d}, {0.0, 0.5, 1.0, 3.0});
  for (const auto& row : tab) {
    CHECK(row[0] == 0.0);
    for (size_t i = 1; i < row.size(); ++i) CHECK(row[i] >= row[i - 1] - 1e-15);
  }
}

TEST_CASE("path-graph sequence: double-limit diagnostic at gamma = (N-1)^2") {
  std::vector<FiniteTriple> seq;
  for (int N : {16, 32, 64}) {
    auto g = build_graph(
        [&] {
          std::vector<EdgeInput> e;
          for (int i = 0; i + 1 < N; ++i) e.push_back({i, i + 1, 1.0});
          return e;
        }(),
        MetricSpec::scaled(1.0 / (N - 1)));
    KernelEvaluator k(g);
    seq.push_back(graph_triple(g, k, {0.05, 0.1, 0.2}, double(N - 1) * (N - 1)));
  }
  auto table = tightness_modulus(seq, {0.025, 0.05, 0.1, 0.2, 0.4});
  // decay in delta at the largest sizes, heading to zero
  const auto& last = table.back();
  for (size_t i = 1; i < last.size(); ++i) CHECK(last[i - 1] <= last[i] + 1e-12);
  CHECK(last.front() < 0.3);
  // the N-sequence at fixed delta stabilizes (limsup exists)
  double step1 = std::abs(table[1][2] - table[0][2]);
  double step2 = std::abs(table[2][2] - table[1][2]);
  CHECK(step2 < step1);
}

TEST_CASE("resistance tightness on paths and trees") {
  // paths with the metric scaled by 1/(N-1): R = hops = (N-1) * alpha d with
  // alpha(N) = N-1, kappa = 1
  std::vector<WeightedGraph> paths;
  std::vector<const WeightedGraph*> ptrs;
  std::vector<double> alphas, gammas;
  for (int N : {16, 32, 64}) {
    std::vector<EdgeInput> e;
    for (int i = 0; i + 1 < N; ++i) e.push_back({i, i + 1, 1.0});
    paths.emplace_back(e, MetricSpec::scaled(1.0 / (N - 1)));
  }
  for (size_t i = 0; i < paths.size(); ++i) {
    ptrs.push_back(&paths[i]);
    int N = paths[i].vertex_count();
    alphas.push_back(double(N - 1));
    gammas.push_back(double(N - 1) * (N - 1));
  }
  auto rep = resistance_tightness_check(ptrs, alphas, std::nullopt, gammas);
  CHECK(rep.kappa_fitted);
  CHECK_THAT(rep.kappa, WithinAbs(1.0, 1e-6));
  CHECK(rep.r_squared >= 0.99);
  CHECK(rep.sandwich_ok);
  CHECK_THAT(rep.c1, WithinAbs(1.0, 1e-6));

  // random trees with unit weights: resistance equals distance, kappa = 1
  std::vector<WeightedGraph> trees;
  std::vector<const WeightedGraph*> tptrs;
  std::vector<double> talphas, tgammas;
  for (int i = 0; i < 3; ++i) trees.push_back(oracle::random_connected(40 + 20 * i, 0, 60 + i));
  for (auto& t : trees) {
    tptrs.push_back(&t);
    talphas.push_back(1.0);
    tgammas.push_back(t.total_mass());  // beta = alpha^kappa beta / gamma = 1
  }
  auto trep = resistance_tightness_check(tptrs, talphas, std::nullopt, tgammas);
  CHECK_THAT(trep.kappa, WithinAbs(1.0, 1e-6));
  CHECK(trep.r_squared >= 0.99);

  // a wrong supplied kappa is flagged with a witness
  auto bad = resistance_tightness_check(ptrs, alphas, 2.0, gammas);
  CHECK_FALSE(bad.sandwich_ok);
  CHECK(bad.violation_witness >= 0);
}
