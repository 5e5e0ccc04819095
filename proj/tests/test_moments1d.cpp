#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "momentdet/moments1d.hpp"
#include "momentdet/polynomial.hpp"

using namespace momentdet;

namespace {

MomentSequence1D gen(const std::string& spec) {
  return MomentSequence1D::builtin(spec, ScalarMode::kRational, 256);
}

DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t atoms,
                               long node_den = 4) {
  DiscreteMeasure m;
  while (m.atoms.size() < atoms) {
    Rational node(static_cast<long>(rng() % 41) - 20, node_den);
    bool dup = false;
    for (const auto& a : m.atoms)
      if (a.node == Scalar(node)) dup = true;
    if (dup) continue;
    Rational w(static_cast<long>(rng() % 9) + 1, 8);
    m.atoms.push_back({Scalar(node), Scalar(w)});
  }
  return m;
}

}  // namespace

TEST_CASE("hankel psd") {
  SUBCASE("uniform moments pass both variants") {
    auto m = gen("uniform:0,1");
    CHECK(m.at(3).rat() == Rational(1, 4));
    auto rep = hankel_psd(m, 6, HankelVariant::kHamburger);
    CHECK(rep.psd);
    CHECK(rep.rank == 7);
    CHECK(hankel_psd(m, 6, HankelVariant::kStieltjes).psd);
  }
  SUBCASE("the (1,2,1) pattern fails with a certificate") {
    auto m = MomentSequence1D::from_values(
        {Scalar(1), Scalar(2), Scalar(1)}, ScalarMode::kRational, 256, "test");
    auto rep = hankel_psd(m, 1, HankelVariant::kHamburger);
    REQUIRE_FALSE(rep.psd);
    // witness really defeats the quadratic form
    Rational val(0);
    for (std::size_t i = 0; i <= 1; ++i)
      for (std::size_t j = 0; j <= 1; ++j)
        val += rep.witness[i].rat() * rep.witness[j].rat() *
               m.at(i + j).rat();
    CHECK(val.sign() < 0);
  }
  SUBCASE("dirac at zero is PSD of rank one") {
    auto m = gen("dirac:0");
    auto rep = hankel_psd(m, 5, HankelVariant::kHamburger);
    CHECK(rep.psd);
    CHECK(rep.rank == 1);
  }
  SUBCASE("hamburger-only data fails the shifted test") {
    // symmetric two-atom measure at +-1 is fine on R but not on R+
    DiscreteMeasure two{{{Scalar(Rational(-1)), Scalar(Rational(1, 2))},
                         {Scalar(Rational(1)), Scalar(Rational(1, 2))}}};
    auto m = two.moments(ScalarMode::kRational, 256);
    CHECK(hankel_psd(m, 3, HankelVariant::kHamburger).psd);
    auto rep = hankel_psd(m, 3, HankelVariant::kStieltjes);
    CHECK_FALSE(rep.psd);
    CHECK(rep.witness_on_shifted);
  }
  SUBCASE("float mode uses the eigenvalue threshold") {
    auto m = gen("uniform:0,1");
    auto mf = MomentSequence1D(
        [m](std::size_t n) { return Scalar(m.at(n).real()); },
        ScalarMode::kFloat, 256, "float-copy");
    PrecisionGuard guard(256);
    CHECK(hankel_psd(mf, 5, HankelVariant::kHamburger).psd);
  }
}

TEST_CASE("carleman check") {
  SeriesOptions opts;
  SUBCASE("gaussian diverges at the half-power rate") {
    auto out = carleman_check(gen("gaussian:1"), 200, opts);
    CHECK(out.verdict.status == SeriesStatus::kDivergesLikely);
    CHECK(out.certificate == DeterminacyCertificate::kCarleman);
    CHECK(*out.verdict.rate_exponent == doctest::Approx(0.5).epsilon(0.05));
  }
  SUBCASE("lognormal converges to 1/(e-1)") {
    auto out = carleman_check(gen("lognormal:1"), 50, opts);
    CHECK(out.verdict.status == SeriesStatus::kConvergesLikely);
    CHECK(out.certificate == DeterminacyCertificate::kNone);
    PrecisionGuard guard(256);
    Real expect = 1 / (exp(Real(1)) - 1);
    CHECK(abs(out.verdict.partial_sum.real() - expect) < Real("1e-9"));
  }
  SUBCASE("degenerate even moment short-circuits") {
    auto m = MomentSequence1D::from_values(
        {Scalar(Rational(3)), Scalar(1), Scalar(1), Scalar(0), Scalar(0),
         Scalar(0), Scalar(0)},
        ScalarMode::kRational, 256, "degenerate");
    auto out = carleman_check(m, 3, opts);
    CHECK(out.certificate == DeterminacyCertificate::kDegenerate);
    REQUIRE(out.degenerate_measure.has_value());
    REQUIRE(out.degenerate_measure->atoms.size() == 1);
    CHECK(out.degenerate_measure->atoms[0].node == Scalar(0));
    CHECK(out.degenerate_measure->atoms[0].weight == Scalar(Rational(3)));
  }
  SUBCASE("negative even moment is rejected") {
    auto m = MomentSequence1D::from_values(
        {Scalar(1), Scalar(0), Scalar(Rational(-1))}, ScalarMode::kRational,
        256, "bad");
    CHECK_THROWS_AS((void)carleman_check(m, 1, opts), InvalidSequenceError);
  }
}

TEST_CASE("stieltjes check") {
  SeriesOptions opts;
  SUBCASE("exponential moments diverge") {
    auto out = stieltjes_check(gen("exponential:1"), 200, opts);
    CHECK(out.verdict.status == SeriesStatus::kDivergesLikely);
    CHECK(out.certificate == DeterminacyCertificate::kStieltjes);
    CHECK(*out.verdict.rate_exponent == doctest::Approx(0.5).epsilon(0.05));
  }
  SUBCASE("dirac at one gives unit terms") {
    auto out = stieltjes_check(gen("dirac:1"), 64, opts);
    CHECK(out.verdict.status == SeriesStatus::kDivergesLikely);
    CHECK(out.verdict.partial_sum.real() == Real(64));
  }
  SUBCASE("negative moment contradicts half-line support") {
    auto m = MomentSequence1D::from_values(
        {Scalar(1), Scalar(Rational(-1))}, ScalarMode::kRational, 256, "bad");
    CHECK_THROWS_AS((void)stieltjes_check(m, 1, opts), InvalidSequenceError);
  }
}

TEST_CASE("stieltjes to hamburger reduction") {
  auto m = gen("exponential:1");  // m_n = n!
  auto q = stieltjes_to_hamburger(m);
  CHECK(q.at(0).rat() == Rational(1));
  CHECK(q.at(1).rat() == Rational(0));
  CHECK(q.at(2).rat() == Rational(1));
  CHECK(q.at(4).rat() == Rational(2));
  CHECK(q.at(6).rat() == Rational(6));
  CHECK(q.at(7).rat() == Rational(0));

  SeriesOptions opts;
  auto sm = stieltjes_check(m, 60, opts);
  auto cq = carleman_check(q, 60, opts);
  REQUIRE(sm.verdict.trace.size() == cq.verdict.trace.size());
  PrecisionGuard guard(256);
  for (std::size_t i = 0; i < sm.verdict.trace.size(); ++i)
    CHECK(abs(sm.verdict.trace[i].term - cq.verdict.trace[i].term) <
          Real("1e-70"));
  CHECK(sm.verdict.status == cq.verdict.status);
}

TEST_CASE("compact support check") {
  SUBCASE("uniform fits the unit interval") {
    auto rep =
        compact_support_check(gen("uniform:0,1"), Scalar(0), Scalar(1), 20);
    CHECK(rep.consistent);
    CHECK(rep.certificate);
  }
  SUBCASE("gaussian escapes [-1,1] at the fourth moment") {
    auto rep = compact_support_check(gen("gaussian:1"), Scalar(Rational(-1)),
                                     Scalar(1), 10);
    REQUIRE_FALSE(rep.consistent);
    CHECK(*rep.first_violation == 2);  // m_4 = 3 > 1
  }
  SUBCASE("dirac at zero fits everything containing zero") {
    auto rep = compact_support_check(gen("dirac:0"), Scalar(Rational(-1)),
                                     Scalar(2), 12);
    CHECK(rep.consistent);
  }
}

TEST_CASE("jacobi recurrence for uniform[0,1] is the shifted Legendre one") {
  auto rec = jacobi_recurrence(gen("uniform:0,1"), 5);
  REQUIRE(rec.exact);
  REQUIRE(rec.rank == 5);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(rec.alpha[j].rat() == Rational(1, 2));
  CHECK(rec.beta[0].rat() == Rational(1));
  CHECK(rec.beta[1].rat() == Rational(1, 12));
  CHECK(rec.beta[2].rat() == Rational(1, 15));
  CHECK(rec.beta[3].rat() == Rational(9, 140));
  CHECK(rec.beta[4].rat() == Rational(4, 63));
}

TEST_CASE("gauss quadrature from moments") {
  SUBCASE("uniform[0,1] with five nodes") {
    auto m = gen("uniform:0,1");
    auto quad = quadrature_from_moments(m, 5);
    REQUIRE(quad.atoms.size() == 5);
    PrecisionGuard guard(256);
    // the rule reproduces the first ten moments
    for (std::size_t n = 0; n < 10; ++n) {
      Real got = quad.moment(n).real();
      CHECK(abs(got - m.at(n).real()) < Real("1e-12"));
    }
    // oracle: nodes are the roots of the degree-5 orthogonal polynomial,
    // isolated independently with Sturm chains
    auto rec = jacobi_recurrence(m, 5);
    RatPoly prev = RatPoly::constant(Rational(1));
    RatPoly cur({-rec.alpha[0].rat(), Rational(1)});
    for (std::size_t j = 1; j < 5; ++j) {
      RatPoly next = RatPoly({-rec.alpha[j].rat(), Rational(1)}) * cur -
                     prev.scaled(rec.beta[j].rat());
      prev = cur;
      cur = next;
    }
    auto roots = isolate_roots(cur, Rational(0), Rational(1),
                               Rational(1, 1L << 40));
    REQUIRE(roots.size() == 5);
    for (std::size_t j = 0; j < 5; ++j) {
      Real lo = to_real(roots[j].lo), hi = to_real(roots[j].hi);
      Real node = quad.atoms[j].node.real();
      CHECK(node >= lo - Real("1e-35"));
      CHECK(node <= hi + Real("1e-35"));
    }
  }
  SUBCASE("dirac data collapses to rank one, exactly") {
    auto quad = quadrature_from_moments(gen("dirac:1"), 4);
    REQUIRE(quad.atoms.size() == 1);
    CHECK(quad.atoms[0].node == Scalar(1));
    CHECK(quad.atoms[0].weight == Scalar(1));
    CHECK(quad.atoms[0].node.is_rational());
  }
  SUBCASE("two symmetric atoms recovered exactly") {
    DiscreteMeasure two{{{Scalar(Rational(-1)), Scalar(Rational(1, 2))},
                         {Scalar(Rational(1)), Scalar(Rational(1, 2))}}};
    auto quad =
        quadrature_from_moments(two.moments(ScalarMode::kRational, 256), 2);
    REQUIRE(quad.atoms.size() == 2);
    CHECK(quad.atoms[0].node == Scalar(Rational(-1)));
    CHECK(quad.atoms[1].node == Scalar(Rational(1)));
    CHECK(quad.atoms[0].weight == Scalar(Rational(1, 2)));
    CHECK(quad.atoms[1].weight == Scalar(Rational(1, 2)));
  }
  SUBCASE("random four-atom measures round trip") {
    std::mt19937_64 rng(31);
    PrecisionGuard guard(256);
    for (int iter = 0; iter < 25; ++iter) {
      auto measure = random_measure(rng, 4);
      std::sort(measure.atoms.begin(), measure.atoms.end(),
                [](const auto& a, const auto& b) {
                  return a.node.rat() < b.node.rat();
                });
      auto quad =
          quadrature_from_moments(measure.moments(ScalarMode::kRational, 256),
                                  4);
      REQUIRE(quad.atoms.size() == 4);
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(abs(quad.atoms[j].node.real() -
                  measure.atoms[j].node.real()) < Real("1e-10"));
        CHECK(abs(quad.atoms[j].weight.real() -
                  measure.atoms[j].weight.real()) < Real("1e-10"));
      }
    }
  }
  SUBCASE("parity: even-only data gives symmetric nodes") {
    DiscreteMeasure sym{{{Scalar(Rational(-2)), Scalar(Rational(1, 4))},
                         {Scalar(Rational(-1)), Scalar(Rational(1, 4))},
                         {Scalar(Rational(1)), Scalar(Rational(1, 4))},
                         {Scalar(Rational(2)), Scalar(Rational(1, 4))}}};
    auto quad =
        quadrature_from_moments(sym.moments(ScalarMode::kRational, 256), 4);
    REQUIRE(quad.atoms.size() == 4);
    PrecisionGuard guard(256);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(abs(quad.atoms[j].node.real() +
                quad.atoms[3 - j].node.real()) < Real("1e-40"));
      CHECK(abs(quad.atoms[j].weight.real() -
                quad.atoms[3 - j].weight.real()) < Real("1e-40"));
    }
  }
}

TEST_CASE("even moments of a measure are log-convex") {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 30; ++iter) {
    auto measure = random_measure(rng, 1 + rng() % 5);
    // normalize the mass to 1
    Scalar mass(0);
    for (auto& a : measure.atoms) mass = mass + a.weight;
    for (auto& a : measure.atoms)
      a.weight = a.weight / mass;
    auto m = measure.moments(ScalarMode::kRational, 256);
    for (std::size_t n = 1; n + 1 <= 6; ++n) {
      Rational sq = m.at(2 * n).rat() * m.at(2 * n).rat();
      Rational prod = m.at(2 * n - 2).rat() * m.at(2 * n + 2).rat();
      CHECK(sq <= prod);
    }
  }
}

TEST_CASE("hankel necessity for measures") {
  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 15; ++iter) {
    auto measure = random_measure(rng, 1 + rng() % 4);
    auto m = measure.moments(ScalarMode::kRational, 256);
    CHECK(hankel_psd(m, 4, HankelVariant::kHamburger).psd);
    bool all_nonneg = true;
    for (const auto& a : measure.atoms)
      if (a.node.is_negative()) all_nonneg = false;
    if (all_nonneg) CHECK(hankel_psd(m, 4, HankelVariant::kStieltjes).psd);
  }
}

TEST_CASE("moment json round trip") {
  auto m = gen("gaussian:1");
  auto j = m.to_json(8);
  auto back = MomentSequence1D::from_json(j);
  for (std::size_t n = 0; n <= 8; ++n) CHECK(back.at(n) == m.at(n));

  nlohmann::json lit = {{"moments", {"1", "1/2", "1/3"}},
                        {"support_hint", "R+"}};
  auto lm = MomentSequence1D::from_json(lit);
  CHECK(lm.at(2).rat() == Rational(1, 3));
  CHECK(*lm.support_hint() == "R+");
}

TEST_CASE("discrete measure json round trip") {
  DiscreteMeasure dm{{{Scalar(Rational(-1, 2)), Scalar(Rational(1, 3))},
                      {Scalar(Rational(2)), Scalar(Rational(2, 3))}}};
  auto back = DiscreteMeasure::from_json(dm.to_json());
  REQUIRE(back.atoms.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.atoms[i].node == dm.atoms[i].node);
    CHECK(back.atoms[i].weight == dm.atoms[i].weight);
  }
  // atoms are a valid 1-D moment input as well
  nlohmann::json j = dm.to_json();
  auto m = MomentSequence1D::from_json(j);
  CHECK(m.at(0) == dm.moment(0));
  CHECK(m.at(3) == dm.moment(3));
}

TEST_CASE("rational atoms are recovered exactly when reconstruction lands") {
  std::mt19937_64 rng(999);
  for (int iter = 0; iter < 10; ++iter) {
    auto measure = random_measure(rng, 3, /*node_den=*/2);
    std::sort(measure.atoms.begin(), measure.atoms.end(),
              [](const auto& a, const auto& b) {
                return a.node.rat() < b.node.rat();
              });
    auto rec = quadrature_from_moments(
        measure.moments(ScalarMode::kRational, 256), 3);
    REQUIRE(rec.atoms.size() == 3);
    bool all_rational = true;
    for (const auto& a : rec.atoms)
      all_rational = all_rational && a.node.is_rational();
    if (!all_rational) continue;  // float fallback is allowed, not expected
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(rec.atoms[j].node == measure.atoms[j].node);
      CHECK(rec.atoms[j].weight == measure.atoms[j].weight);
    }
  }
}
