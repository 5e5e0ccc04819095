#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "momentdet/multiseq.hpp"

using namespace momentdet;

namespace {

AtomicMeasureD random_atoms(std::mt19937_64& rng, std::size_t d,
                            std::size_t count) {
  AtomicMeasureD mu;
  mu.dimension = d;
  for (std::size_t a = 0; a < count; ++a) {
    AtomicMeasureD::Atom atom;
    for (std::size_t i = 0; i < d; ++i)
      atom.point.push_back(Scalar(
          Rational(static_cast<long>(rng() % 17) - 8, 4)));
    atom.weight = Scalar(Rational(static_cast<long>(rng() % 7) + 1, 4));
    mu.atoms.push_back(std::move(atom));
  }
  return mu;
}

}  // namespace

TEST_CASE("monomial enumeration in graded lex order") {
  auto mons = monomials_up_to(2, 2);
  REQUIRE(mons.size() == 6);
  CHECK(mons[0] == MultiIndex{0, 0});
  CHECK(mons[1] == MultiIndex{0, 1});
  CHECK(mons[2] == MultiIndex{1, 0});
  CHECK(mons[3] == MultiIndex{0, 2});
  CHECK(mons[4] == MultiIndex{1, 1});
  CHECK(mons[5] == MultiIndex{2, 0});
}

TEST_CASE("riesz functional") {
  auto uni = MomentSequence1D::builtin("uniform:0,1", ScalarMode::kRational,
                                       256);
  auto m = Multisequence::from_product({uni, uni}, 4);

  MultiPolynomial one{2, {}};
  one.coeffs[{0, 0}] = Scalar(1);
  CHECK(riesz_apply(m, one) == m.at({0, 0}));

  MultiPolynomial xy{2, {}};
  xy.coeffs[{1, 1}] = Scalar(1);
  CHECK(riesz_apply(m, xy).rat() == Rational(1, 4));

  // (x1 - 1)^2 against the Dirac at (1, 0)
  AtomicMeasureD dirac{2, {{{Scalar(1), Scalar(0)}, Scalar(1)}}};
  auto md = Multisequence::from_measure(dirac, 4, ScalarMode::kRational, 256);
  MultiPolynomial sq{2, {}};
  sq.coeffs[{2, 0}] = Scalar(1);
  sq.coeffs[{1, 0}] = Scalar(Rational(-2));
  sq.coeffs[{0, 0}] = Scalar(1);
  CHECK(riesz_apply(md, sq).is_zero());

  MultiPolynomial too_big{2, {}};
  too_big.coeffs[{5, 0}] = Scalar(1);
  CHECK_THROWS_AS((void)riesz_apply(m, too_big), WindowError);
}

TEST_CASE("moment matrix psd") {
  SUBCASE("product gaussian is PSD") {
    auto g =
        MomentSequence1D::builtin("gaussian:1", ScalarMode::kRational, 256);
    auto m = Multisequence::from_product({g, g}, 6);
    auto rep = moment_matrix_psd(m, 3);
    CHECK(rep.psd);
    CHECK(rep.rank == rep.basis.size());
  }
  SUBCASE("negative pure moment fails with witness x1") {
    std::map<MultiIndex, Scalar, GradedLess> vals;
    for (const auto& a : monomials_up_to(2, 2)) vals[a] = Scalar(0);
    vals[{0, 0}] = Scalar(1);
    vals[{2, 0}] = Scalar(Rational(-1));
    Multisequence m(2, 2, std::move(vals), ScalarMode::kRational, 256);
    auto rep = moment_matrix_psd(m, 1);
    REQUIRE_FALSE(rep.psd);
    REQUIRE(rep.witness.has_value());
    // witness really achieves a negative value: L(h^2) < 0
    MultiPolynomial h = *rep.witness;
    MultiPolynomial h2{2, {}};
    for (const auto& [a, ca] : h.coeffs)
      for (const auto& [b, cb] : h.coeffs) {
        auto key = multi_add(a, b);
        auto it = h2.coeffs.find(key);
        Scalar add = ca * cb;
        if (it == h2.coeffs.end())
          h2.coeffs[key] = add;
        else
          it->second = it->second + add;
      }
    CHECK(riesz_apply(m, h2).is_negative());
  }
  SUBCASE("dirac moments have rank one") {
    AtomicMeasureD dirac{2, {{{Scalar(Rational(2)), Scalar(Rational(-1))},
                              Scalar(Rational(3))}}};
    auto m = Multisequence::from_measure(dirac, 6, ScalarMode::kRational, 256);
    auto rep = moment_matrix_psd(m, 3);
    CHECK(rep.psd);
    CHECK(rep.rank == 1);
  }
  SUBCASE("random atomic measures are PSD at every feasible order") {
    std::mt19937_64 rng(43);
    for (int iter = 0; iter < 10; ++iter) {
      auto mu = random_atoms(rng, 2, 1 + rng() % 4);
      auto m = Multisequence::from_measure(mu, 6, ScalarMode::kRational, 256);
      for (std::size_t N : {1, 2, 3})
        CHECK(moment_matrix_psd(m, N).psd);
    }
  }
}

TEST_CASE("marginals") {
  auto g = MomentSequence1D::builtin("gaussian:1", ScalarMode::kRational, 256);
  auto e =
      MomentSequence1D::builtin("exponential:1", ScalarMode::kRational, 256);
  auto m = Multisequence::from_product({g, e}, 8);

  auto m1 = marginal(m, 1);
  auto m2 = marginal(m, 2);
  for (std::size_t n = 0; n <= 8; ++n) {
    CHECK(m1.at(n) == g.at(n));
    CHECK(m2.at(n) == e.at(n));
  }
  CHECK(m1.at(0) == m.at({0, 0}));

  AtomicMeasureD dirac{2, {{{Scalar(1), Scalar(Rational(2))}, Scalar(1)}}};
  auto md = Multisequence::from_measure(dirac, 6, ScalarMode::kRational, 256);
  auto md2 = marginal(md, 2);
  for (std::size_t n = 0; n <= 6; ++n)
    CHECK(md2.at(n).rat() == rat_pow(Rational(2), static_cast<unsigned>(n)));

  CHECK_THROWS((void)marginal(m, 3));
}

TEST_CASE("multivariate carleman") {
  SeriesOptions opts;
  SUBCASE("product gaussian in three axes certifies determinacy") {
    auto g =
        MomentSequence1D::builtin("gaussian:1", ScalarMode::kRational, 256);
    auto m = Multisequence::from_product({g, g, g}, 2 * 40);
    auto rep = multivariate_carleman(m, 40, opts);
    CHECK(rep.aggregate == SeriesStatus::kDivergesLikely);
    CHECK(rep.determinacy_certificate);
    for (const auto& axis : rep.per_axis)
      CHECK(axis.verdict.status == SeriesStatus::kDivergesLikely);
  }
  SUBCASE("a lognormal axis spoils the aggregate without indeterminacy") {
    auto g =
        MomentSequence1D::builtin("gaussian:1", ScalarMode::kRational, 256);
    auto ln =
        MomentSequence1D::builtin("lognormal:1", ScalarMode::kFloat, 256);
    auto m = Multisequence::from_product({g, ln}, 2 * 40);
    auto rep = multivariate_carleman(m, 40, opts);
    CHECK(rep.aggregate == SeriesStatus::kInconclusive);
    CHECK_FALSE(rep.determinacy_certificate);
    CHECK(rep.per_axis[1].verdict.status == SeriesStatus::kConvergesLikely);
  }
  SUBCASE("one axis reduces to the scalar check") {
    auto g =
        MomentSequence1D::builtin("gaussian:1", ScalarMode::kRational, 256);
    auto m = Multisequence::from_product({g}, 2 * 30);
    auto rep = multivariate_carleman(m, 30, opts);
    auto direct = carleman_check(g, 30, opts);
    REQUIRE(rep.per_axis.size() == 1);
    CHECK(rep.per_axis[0].verdict.status == direct.verdict.status);
    REQUIRE(rep.per_axis[0].verdict.trace.size() ==
            direct.verdict.trace.size());
    PrecisionGuard guard(256);
    for (std::size_t i = 0; i < direct.verdict.trace.size(); ++i)
      CHECK(abs(rep.per_axis[0].verdict.trace[i].term -
                direct.verdict.trace[i].term) < Real("1e-70"));
  }
}

TEST_CASE("multisequence json round trip") {
  std::mt19937_64 rng(47);
  auto mu = random_atoms(rng, 2, 3);
  auto m = Multisequence::from_measure(mu, 4, ScalarMode::kRational, 256);
  auto back = Multisequence::from_json(m.to_json());
  for (const auto& alpha : monomials_up_to(2, 4))
    CHECK(back.at(alpha) == m.at(alpha));
}

TEST_CASE("atomic measure json round trip") {
  std::mt19937_64 rng(777);
  auto mu = random_atoms(rng, 3, 2);
  auto back = AtomicMeasureD::from_json(mu.to_json());
  REQUIRE(back.atoms.size() == mu.atoms.size());
  for (std::size_t a = 0; a < mu.atoms.size(); ++a) {
    CHECK(back.atoms[a].weight == mu.atoms[a].weight);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(back.atoms[a].point[i] == mu.atoms[a].point[i]);
  }
}
