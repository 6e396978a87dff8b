#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "levy/measures.hpp"

using namespace levy;

namespace {

// sup_v |F_hat(v) - F(v)| by brute force: evaluate both CDFs directly at and
// just left of every atom, summing weights each time.
double brute_force_ks(const std::vector<std::pair<double, double>>& atoms,
                      const std::function<double(double)>& F) {
  double total = 0.0;
  for (const auto& a : atoms) total += a.second;
  auto F_hat = [&](double v, bool strict) {
    double acc = 0.0;
    for (const auto& a : atoms) {
      if (strict ? a.first < v : a.first <= v) acc += a.second;
    }
    return acc / total;
  };
  double d = 0.0;
  for (const auto& a : atoms) {
    d = std::max(d, std::abs(F_hat(a.first, false) - F(a.first)));
    d = std::max(d, std::abs(F_hat(a.first, true) - F(a.first)));
  }
  return d;
}

}  // namespace

TEST_CASE("apply_functional") {
  const PathGrid zero{{0.0, 0.0, 0.0}};
  for (const auto& f : {PathFunctional::endpoint(), PathFunctional::supremum(),
                        PathFunctional::value_at(0.3)}) {
    CHECK(apply_functional(zero, f) == 0.0);
  }
  const PathGrid path{{0.0, -1.0, 2.5}};
  CHECK(apply_functional(path, PathFunctional::value_at(0.5)) == -1.0);
  CHECK(apply_functional(path, PathFunctional::value_at(0.49)) == 0.0);
  CHECK(apply_functional(path, PathFunctional::endpoint()) == 2.5);
  CHECK(apply_functional(path, PathFunctional::supremum()) == 2.5);
  CHECK_THROWS_AS(PathFunctional::value_at(1.5), std::domain_error);
  // 0.3 * 10 is 3.0000000000000004 in binary; 0.7 * 10 rounds below 7
  CHECK(grid_index(0.3, 10) == 3);
  CHECK(grid_index(0.7, 10) == 7);
  CHECK(grid_index(1.0, 1000) == 1000);

  const auto rec = sample_jumps(LevyModel::centered_poisson(), 30.0, derive_stream(1, "f", 0));
  CHECK(apply_functional(scale_path(rec, 30.0, 16), PathFunctional::endpoint()) ==
        eval_v(rec, 30.0) / std::sqrt(30.0));
}

TEST_CASE("target_cdf") {
  CHECK(target_cdf(TargetLaw::gaussian(1.0), 0.0) == 0.5);
  CHECK(target_cdf(TargetLaw::gaussian(2.0), 2.0) == doctest::Approx(0.8413447460685429));
  // 2 Phi(1) - 1 = erf(1/sqrt 2)
  CHECK(target_cdf(TargetLaw::wiener_sup(1.0), 1.0) ==
        doctest::Approx(0.6826894921370859).epsilon(1e-14));
  CHECK(target_cdf(TargetLaw::wiener_sup(1.0), -0.1) == 0.0);
  CHECK(target_cdf(TargetLaw::wiener_sup(1.0), 0.0) == 0.0);
  CHECK_THROWS_AS(TargetLaw::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(TargetLaw::wiener_sup(-1.0), std::invalid_argument);

  WeightedSample oracle;
  oracle.add(1.0, 1.0);
  oracle.add(3.0, 3.0);
  const auto emp = TargetLaw::empirical_oracle(oracle);
  CHECK(emp.cdf(0.5) == 0.0);
  CHECK(emp.cdf(1.0) == 0.25);
  CHECK(emp.cdf(2.9) == 0.25);
  CHECK(emp.cdf(3.0) == 1.0);

  for (const auto& law : {TargetLaw::gaussian(0.7), TargetLaw::wiener_sup(1.3), emp}) {
    double prev = 0.0;
    for (double v = -20.0; v <= 20.0; v += 0.01) {
      const double f = law.cdf(v);
      CHECK(f >= prev);
      prev = f;
    }
    CHECK(law.cdf(-1e6) == doctest::Approx(0.0));
    CHECK(law.cdf(1e6) == doctest::Approx(1.0));
  }
}

TEST_CASE("weighted_ks examples") {
  WeightedSample at_median;
  at_median.add(0.0, 17.0);
  CHECK(weighted_ks(at_median, TargetLaw::gaussian(1.0)) == 0.5);

  WeightedSample doubled;
  doubled.add(0.0, 1.0);
  doubled.add(0.0, 1.0);
  CHECK(weighted_ks(doubled, TargetLaw::gaussian(3.0)) == 0.5);

  CHECK_THROWS_AS(weighted_ks(WeightedSample{}, TargetLaw::gaussian(1.0)),
                  std::invalid_argument);
  WeightedSample weightless;
  weightless.add(1.0, 0.0);
  CHECK_THROWS_AS(weighted_ks(weightless, TargetLaw::gaussian(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(at_median.add(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("weighted_ks under the null stays below the 1% critical value") {
  const std::size_t n = 10000;
  const double critical = 1.63 / std::sqrt(double(n));
  CHECK(ks_critical_value(n, 0.01) == doctest::Approx(0.016276).epsilon(1e-4));
  std::size_t below = 0;
  const std::size_t seeds = 100;
  for (std::size_t s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(1000 + s);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    if (weighted_ks(WeightedSample::equal_weights(v), TargetLaw::gaussian(1.0)) < critical) {
      ++below;
    }
  }
  CHECK(below >= 99);
}

TEST_CASE("weighted_ks properties") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<std::pair<double, double>> atoms;
    WeightedSample sample;
    WeightedSample scaled;
    const double c = 0.01 + 100.0 * unit(rng);
    for (std::size_t i = 0; i < n; ++i) {
      // small integer support forces ties
      const double v = trial % 2 == 0 ? 0.5 * small(rng) : 3.0 * (unit(rng) - 0.5);
      const double w = unit(rng) < 0.1 ? 0.0 : unit(rng);
      atoms.emplace_back(v, w);
      sample.add(v, w);
      scaled.add(v, c * w);
    }
    if (!(sample.total_weight() > 0.0)) continue;
    const auto law = TargetLaw::gaussian(1.0);
    const double ks = weighted_ks(sample, law);
    CHECK(ks == doctest::Approx(brute_force_ks(atoms, [&](double v) { return law.cdf(v); }))
                    .epsilon(1e-12));
    CHECK(weighted_ks(scaled, law) == doctest::Approx(ks).epsilon(1e-12));
    CHECK(weighted_ks(sample, TargetLaw::empirical_oracle(sample)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(weighted_ks(sample, TargetLaw::empirical_oracle(scaled)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> b{3.5, 4.5, 5.5, 6.5};
  CHECK(two_sample_ks(a, b) == doctest::Approx(0.75));
  CHECK(two_sample_ks(b, a) == doctest::Approx(0.75));
  CHECK(two_sample_ks(a, a) == 0.0);
}

TEST_CASE("log_average_measure") {
  const std::vector<double> two{0.3, -0.2};
  const auto q = log_average_measure(two);
  REQUIRE(q.size() == 2);
  CHECK(q.atoms()[0].weight == 1.0);
  CHECK(q.atoms()[1].weight == 0.5);
  CHECK(q.total_weight() == 1.5);
  CHECK(q.nominal_mass() == doctest::Approx(2.1640425613334453));
  CHECK_THROWS_AS(log_average_measure(std::vector<double>{1.0}), std::invalid_argument);

  const std::vector<double> constant(50, 2.0);
  WeightedSample point;
  point.add(2.0, 1.0);
  CHECK(weighted_ks(log_average_measure(constant), TargetLaw::empirical_oracle(point)) == 0.0);

  for (std::size_t n : {10, 100, 1000, 10000}) {
    std::vector<double> values(n, 0.0);
    const auto m = log_average_measure(values);
    double harmonic = 0.0;
    for (std::size_t k = 1; k <= n; ++k) harmonic += 1.0 / double(k);
    CHECK(m.total_weight() == harmonic);
    const double ln = std::log(double(n));
    CHECK(std::abs(harmonic / ln - 1.0) < 1.0 / ln + 1.0 / double(n));
  }
}

TEST_CASE("integral_average_measure") {
  const WeightC w = canonical_weight();
  const double S = std::exp(2.0);
  for (double dt : {0.1, 0.01}) {
    const auto q = integral_average_measure([](double) { return 0.0; }, w, S, dt);
    CHECK(std::abs(q.total_weight() - 1.0) < 2.0 * dt);
    CHECK(q.normalizer() == doctest::Approx(1.0));
  }

  WeightedSample point;
  point.add(-0.4, 1.0);
  const auto flat = integral_average_measure([](double) { return -0.4; }, w, 50.0, 0.1);
  CHECK(weighted_ks(flat, TargetLaw::empirical_oracle(point)) == 0.0);

  SUBCASE("refining dt at least halves the quadrature error") {
    const double S2 = 21.0;
    double prev_err = 0.0;
    for (double dt : {0.5, 0.25, 0.125, 0.0625}) {
      const double err = std::abs(
          integral_average_measure([](double) { return 0.0; }, w, S2, dt).total_weight() -
          w.cumulative(S2));
      if (prev_err > 0.0) CHECK(err <= 0.5 * prev_err);
      prev_err = err;
    }
  }
  CHECK_THROWS_AS(integral_average_measure([](double) { return 0.0; }, w, 1.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(integral_average_measure([](double) { return 0.0; }, w, 5.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("weighted sample serialization") {
  WeightedSample s;
  s.add(1.5, 0.25);
  s.add(-2.0, 0.75);
  s.set_normalizer(2.0);
  const auto j = to_json(s);
  CHECK(j["total_weight"] == 1.0);
  CHECK(j["normalizer"] == 2.0);
  CHECK(j["atoms"][1][0] == -2.0);
  std::ostringstream os;
  write_weighted_sample_csv(os, s);
  CHECK(os.str() == "value,weight\n1.5,0.25\n-2,0.75\n");
  CHECK(s.normalized().is_normalized());
  CHECK(s.normalized().atoms()[0].weight == 0.25);
}
