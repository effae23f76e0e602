#include <doctest.h>

#include "mbrisk/algebra.hpp"
#include "mbrisk/error.hpp"
#include "mbrisk/risk_model.hpp"
#include "mbrisk/ruin.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mbrisk;
using namespace mbrisk::testing;

namespace {

double pi_weighted(const RowVector& pi, const Eigen::VectorXd& v) { return pi * v; }

}  // namespace

TEST_CASE("zero-surplus closed form on the scalar fixture") {
  const RiskModel model(m1());
  CHECK(takacs_survival(model, 2) == doctest::Approx(0.42).epsilon(1e-15));
  for (std::size_t n = 1; n <= 7; ++n) {
    const double brute = brute_survival_by_state(m1(), 0, n)(0);
    CHECK(takacs_survival(model, n) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("no claims means certain survival") {
  ModelSpec s;
  s.n_states = 2;
  s.claims = MatrixSeq(2);
  s.claims.set(0, mat({{0.3, 0.7}, {0.6, 0.4}}));
  const RiskModel model(s);
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(takacs_survival(model, n) == doctest::Approx(1.0));
    CHECK(seal_survival(model, 0, n) == doctest::Approx(1.0));
  }
}

TEST_CASE("stationary start is enforced") {
  ModelSpec s = m2();
  s.initial = std::vector<double>{0.5, 0.5};
  const RiskModel model(s);
  CHECK_THROWS_WITH_AS(takacs_survival(model, 3), "Takács formula requires stationary initial distribution",
                       ValidationError);
  CHECK_THROWS_AS(seal_survival(model, 1, 3), ValidationError);
  // The path dynamic program uses whatever start law the model carries.
  const double brute = RowVector(mat({{0.5, 0.5}})) * brute_survival_by_state(s, 1, 3);
  CHECK(constrained_survival(model, 1, 3) == doctest::Approx(brute).epsilon(1e-13));
}

TEST_CASE("ruin-time distribution") {
  const ModelSpec spec = m2();
  const RiskModel model(spec);
  const auto d0 = ruin_time_dist(model, 6, 0);
  const auto d1 = ruin_time_dist(model, 6, 1);
  CHECK(d0[0].isZero(0.0));
  CHECK((d0[1] - mat({{0.2, 0.2}, {0.2, 0.4}})).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((d0[2] - spec.claims.at(0) * d1[1]).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(ruin_time_dist(model, 3, 2), ValidationError);

  for (const ModelSpec& s : {m1(), m2(), m3()}) {
    const RiskModel rm(s);
    const auto z = ruin_time_dist(rm, 5, 0);
    const auto o = ruin_time_dist(rm, 5, 1);
    for (std::size_t n = 1; n <= 5; ++n) {
      CHECK((z[n] - brute_ruin_time(s, 0, n)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((o[n] - brute_ruin_time(s, 1, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("seal survival against enumeration") {
  for (const ModelSpec& s : {m1(), m2(), m3()}) {
    const RiskModel model(s);
    const RowVector pi = model.pi().probs;
    for (long x = 0; x <= 3; ++x) {
      double p_claim = 0.0;
      for (long c = 0; c <= x; ++c) p_claim += (pi * s.claims.at(static_cast<std::size_t>(c))).sum();
      CHECK(seal_survival(model, x, 1) == doctest::Approx(p_claim).epsilon(1e-14));
      for (std::size_t n = 1; n <= 5; ++n) {
        const double brute = pi_weighted(pi, brute_survival_by_state(s, x, n));
        CHECK(seal_survival(model, x, n) == doctest::Approx(brute).epsilon(1e-10));
        CHECK(constrained_survival(model, x, n) == doctest::Approx(brute).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("survival is monotone") {
  const RiskModel model(m3());
  for (long x = 0; x <= 4; ++x) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const double s = seal_survival(model, x, n);
      CHECK(s >= -1e-12);
      CHECK(s <= 1.0 + 1e-12);
      CHECK(seal_survival(model, x, n + 1) <= s + 1e-12);
      CHECK(seal_survival(model, x + 1, n) >= s - 1e-12);
    }
  }
}

TEST_CASE("cumulative ruin time matches the other routes") {
  for (const ModelSpec& s : {m1(), m2(), m3()}) {
    const RiskModel model(s);
    const auto d = ruin_time_dist(model, 6, 0);
    double ruined = 0.0;
    for (std::size_t n = 1; n <= 6; ++n) {
      ruined += (model.pi().probs * d[n]).sum();
      CHECK(1.0 - ruined == doctest::Approx(seal_survival(model, 0, n)).epsilon(1e-10));
      CHECK(1.0 - ruined == doctest::Approx(constrained_survival(model, 0, n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("reversed first passage identity") {
  for (const ModelSpec& s : {m1(), m2(), m3()}) {
    const RiskModel model(s);
    const auto v = model.v_table(6);
    for (std::size_t n = 1; n <= 6; ++n) {
      for (std::size_t m = 1; m <= n; ++m) CHECK(std::abs(seal_identity_residual(model, n, m, *v)) < 1e-12);
    }
  }
}

TEST_CASE("scalar model reduces to the classical formula") {
  // Classical scalar form: V(k,m) = (m/k) lambda^{*k}(k-m), evaluated here by
  // plain scalar convolution.
  const std::vector<double> lam{0.6, 0.1, 0.3};
  std::vector<std::vector<double>> conv{{1.0}};
  for (int k = 1; k <= 12; ++k) {
    std::vector<double> next(conv.back().size() + 2, 0.0);
    for (std::size_t i = 0; i < conv.back().size(); ++i) {
      for (std::size_t j = 0; j < 3; ++j) next[i + j] += conv.back()[i] * lam[j];
    }
    conv.push_back(next);
  }
  auto f = [&](long k, long m) {
    return m >= 0 && static_cast<std::size_t>(m) < conv[static_cast<std::size_t>(k)].size()
               ? conv[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)]
               : 0.0;
  };
  auto v = [&](long k, long m) { return double(m) / double(k) * f(k, k - m); };
  const RiskModel model(m1());
  for (long x = 0; x <= 3; ++x) {
    for (long n = 1; n <= 6; ++n) {
      double s = 0.0;
      for (long i = 0; i <= x + n - 1; ++i) s += f(n, i);
      for (long j = x + 1; j <= x + n - 1; ++j) {
        for (long nu = j; nu <= x + n - 1; ++nu) s -= f(j - x, j) * v(n + x - j, n + x - nu);
      }
      CHECK(seal_survival(model, x, static_cast<std::size_t>(n)) == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("ruin transform") {
  for (const ModelSpec& s : {m1(), m2(), m3()}) {
    const RiskModel model(s);
    const double v = 0.8;
    const Matrix phi1 = phi_transform(model, v, 1);
    const Matrix phi0 = phi_transform(model, v, 0);
    const auto d1 = ruin_time_dist(model, 150, 1);
    const auto d0 = ruin_time_dist(model, 150, 0);
    Matrix s1 = Matrix::Zero(phi1.rows(), phi1.cols());
    Matrix s0 = s1;
    double w = 1.0;
    for (std::size_t n = 1; n <= 150; ++n) {
      w *= v;
      s1 += w * d1[n];
      s0 += w * d0[n];
    }
    CHECK((phi1 - s1).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((phi0 - s0).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(phi1.minCoeff() >= -1e-12);
    CHECK(phi1.maxCoeff() <= 1.0 + 1e-12);
    CHECK(phi0.maxCoeff() <= 1.0 + 1e-12);
  }
  const RiskModel scalar(m1());
  const double near_one = phi_transform(scalar, 0.999999, 1)(0, 0);
  CHECK(near_one < 1.0);
  CHECK(near_one > 0.0);
  CHECK_THROWS_AS(phi_transform(scalar, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(phi_transform(scalar, 0.5, 2), ValidationError);
}

TEST_CASE("reports") {
  const RiskModel model(m2());
  const RuinReport seal = ruin_report(model, 2, 4, RuinMethod::kSeal);
  CHECK(seal.horizons == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(seal.survival.at(4) == doctest::Approx(seal_survival(model, 2, 4)));
  const RuinReport dist = ruin_report(model, 1, 3, RuinMethod::kDistribution);
  CHECK(dist.ruin_time.size() == 3);
  CHECK(dist.survival.at(3) == doctest::Approx(constrained_survival(model, 1, 3)).epsilon(1e-12));
  CHECK_THROWS_AS(ruin_report(model, 1, 3, RuinMethod::kTakacs), ValidationError);
  CHECK_THROWS_AS(ruin_report(model, 1, 3, RuinMethod::kMonteCarlo), ValidationError);
  CHECK(parse_ruin_method("seal") == RuinMethod::kSeal);
  CHECK(to_string(RuinMethod::kConstrainedDp) == "dp");
  CHECK_FALSE(parse_ruin_method("exact").has_value());
}
