#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "momentdet/gns.hpp"

using namespace momentdet;

namespace {

AtomicMeasureD random_atoms(std::mt19937_64& rng, std::size_t d,
                            std::size_t count) {
  AtomicMeasureD mu;
  mu.dimension = d;
  while (mu.atoms.size() < count) {
    AtomicMeasureD::Atom atom;
    for (std::size_t i = 0; i < d; ++i)
      atom.point.push_back(
          Scalar(Rational(static_cast<long>(rng() % 17) - 8, 4)));
    atom.weight = Scalar(Rational(static_cast<long>(rng() % 7) + 1, 4));
    bool dup = false;
    for (const auto& other : mu.atoms)
      if (other.point == atom.point) dup = true;
    if (!dup) mu.atoms.push_back(std::move(atom));
  }
  return mu;
}

}  // namespace

TEST_CASE("gns of the unit dirac collapses to one dimension") {
  auto ones = MomentSequence1D::builtin("dirac:1", ScalarMode::kRational, 256);
  auto m = Multisequence::from_product({ones}, 6);
  auto g = gns_build(m, 3);
  CHECK(g.quotient_dimension() == 1);
  CHECK(g.kernel_rank == 3);
  REQUIRE(g.op[0].size() == 1);
  CHECK(g.op[0][0][0] == Scalar(1));  // X = [1]
  // kernel is spanned by x - 1, x^2 - 1, x^3 - 1: leads are x, x^2, x^3
  REQUIRE(g.kernel_leads.size() == 3);
  CHECK(g.kernel_leads[0] == MultiIndex{1});
}

TEST_CASE("gns of uniform[0,1] reproduces the Jacobi recurrence") {
  auto uni =
      MomentSequence1D::builtin("uniform:0,1", ScalarMode::kRational, 256);
  auto m = Multisequence::from_product({uni}, 6);
  auto g = gns_build(m, 3);
  CHECK(g.quotient_dimension() == 4);
  CHECK(g.kernel_rank == 0);

  auto rec = jacobi_recurrence(uni, 4);
  // diagonal entries are the alpha_b, exactly
  for (std::size_t b = 0; b < g.domain.size(); ++b)
    CHECK(g.op[0][b][b] == rec.alpha[b]);
  // subdiagonal in the orthonormal scaling squares to beta_{b+1}
  for (std::size_t b = 0; b + 1 < g.domain.size() + 1 && b < g.domain.size();
       ++b) {
    Scalar c = g.op[0][b][b + 1];
    Scalar beta = c * c * g.norms_sq[b + 1] / g.norms_sq[b];
    CHECK(beta == rec.beta[b + 1]);
  }
}

TEST_CASE("gns fidelity: operator pairing returns the moments exactly") {
  std::mt19937_64 rng(53);
  for (int iter = 0; iter < 8; ++iter) {
    auto mu = random_atoms(rng, 2, 1 + rng() % 3);
    auto m = Multisequence::from_measure(mu, 6, ScalarMode::kRational, 256);
    auto g = gns_build(m, 3);
    for (const auto& alpha : monomials_up_to(2, 3))
      CHECK(gns_pairing(g, alpha) == m.at(alpha));
  }
}

TEST_CASE("quotient dimension equals the atom count once stabilized") {
  std::mt19937_64 rng(59);
  for (int iter = 0; iter < 6; ++iter) {
    std::size_t atoms = 2 + rng() % 3;  // 2..4 atoms, N = 3 gives 10 monomials
    auto mu = random_atoms(rng, 2, atoms);
    auto m = Multisequence::from_measure(mu, 6, ScalarMode::kRational, 256);
    auto g2 = gns_build(m, 2);
    auto g3 = gns_build(m, 3);
    CHECK(g3.quotient_dimension() == atoms);
    // stabilization: the dimension stops growing once it hits the atom count
    CHECK(g2.quotient_dimension() <= g3.quotient_dimension());
    if (g2.quotient_dimension() == atoms)
      CHECK(g3.quotient_dimension() == atoms);
  }
}

TEST_CASE("gns refuses non-psd input with the witness attached") {
  std::map<MultiIndex, Scalar, GradedLess> vals;
  for (const auto& a : monomials_up_to(1, 2)) vals[a] = Scalar(0);
  vals[{0}] = Scalar(1);
  vals[{1}] = Scalar(2);
  vals[{2}] = Scalar(1);
  Multisequence m(1, 2, std::move(vals), ScalarMode::kRational, 256);
  CHECK_THROWS_AS((void)gns_build(m, 1), GnsRefusal);
}

TEST_CASE("multiplication operators commute exactly on the safe range") {
  std::mt19937_64 rng(61);
  for (int iter = 0; iter < 6; ++iter) {
    auto mu = random_atoms(rng, 2, 1 + rng() % 4);
    auto m = Multisequence::from_measure(mu, 6, ScalarMode::kRational, 256);
    auto g = gns_build(m, 3);
    auto rep = commutation_residual(g);
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.max_residual == 0);
  }
  SUBCASE("float mode stays tiny") {
    auto mu = random_atoms(rng, 2, 3);
    auto exact = Multisequence::from_measure(mu, 8, ScalarMode::kRational, 256);
    // same data viewed as floats
    PrecisionGuard guard(256);
    std::map<MultiIndex, Scalar, GradedLess> vals;
    for (const auto& a : monomials_up_to(2, 8))
      vals[a] = Scalar(exact.at(a).real());
    Multisequence mf(2, 8, std::move(vals), ScalarMode::kFloat, 256);
    auto g = gns_build(mf, 4);
    auto rep = commutation_residual(g);
    CHECK(rep.max_residual < Real("1e-10"));
  }
  SUBCASE("degree below two is refused") {
    auto mu = random_atoms(rng, 2, 2);
    auto m = Multisequence::from_measure(mu, 2, ScalarMode::kRational, 256);
    auto g = gns_build(m, 1);
    CHECK_THROWS_AS((void)commutation_residual(g), WindowError);
  }
}

TEST_CASE("symmetry of the operators as forms") {
  std::mt19937_64 rng(67);
  auto mu = random_atoms(rng, 2, 3);
  auto m = Multisequence::from_measure(mu, 6, ScalarMode::kRational, 256);
  auto g = gns_build(m, 3);
  // <X u, v> == <u, X v> for u, v in the domain, via the diagonal metric
  for (std::size_t axis = 0; axis < 2; ++axis) {
    for (std::size_t a = 0; a < g.domain.size(); ++a)
      for (std::size_t b = 0; b < g.domain.size(); ++b) {
        Scalar lhs = g.op[axis][a][g.domain[b]] * g.norms_sq[g.domain[b]];
        Scalar rhs = g.op[axis][b][g.domain[a]] * g.norms_sq[g.domain[a]];
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("qa vector norms") {
  SUBCASE("product gaussian against the double factorial") {
    auto gau =
        MomentSequence1D::builtin("gaussian:1", ScalarMode::kRational, 256);
    auto m = Multisequence::from_product({gau, gau}, 48);
    auto g = gns_build(Multisequence::from_product({gau, gau}, 4), 2);
    auto rep = qa_vector_norms(g, m, 1, {0, 0}, 24);
    REQUIRE(rep.k_max == 24);
    PrecisionGuard guard(256);
    Rational df(1);
    for (std::size_t k = 1; k <= 10; ++k) {
      df *= Rational(2 * static_cast<long>(k) - 1);
      CHECK(abs(rep.norms[k] - sqrt(to_real(df))) < Real("1e-60"));
    }
    CHECK(rep.cs_all_hold);
    CHECK(rep.verdict.status == SeriesStatus::kDivergesLikely);
  }
  SUBCASE("dirac vectors are bounded and quasi-analytic") {
    AtomicMeasureD dirac{2, {{{Scalar(1), Scalar(1)}, Scalar(1)}}};
    auto m = Multisequence::from_measure(dirac, 40, ScalarMode::kRational, 256);
    auto g = gns_build(Multisequence::from_measure(dirac, 4, ScalarMode::kRational, 256), 2);
    auto rep = qa_vector_norms(g, m, 2, {1, 0}, 16);
    PrecisionGuard guard(256);
    for (const Real& n : rep.norms) CHECK(abs(n - 1) < Real("1e-70"));
    CHECK(rep.verdict.status == SeriesStatus::kDivergesLikely);
    // Cauchy-Schwarz holds with equality on a single atom at (1,1)
    CHECK(rep.cs_all_hold);
  }
  SUBCASE("K is clipped to the degree window") {
    auto gau =
        MomentSequence1D::builtin("gaussian:1", ScalarMode::kRational, 256);
    auto m = Multisequence::from_product({gau, gau}, 12);
    auto g = gns_build(Multisequence::from_product({gau, gau}, 4), 2);
    auto rep = qa_vector_norms(g, m, 1, {1, 1}, 50);
    CHECK(rep.k_max == 4);  // (12/2) - |gamma| = 6 - 2
  }
  SUBCASE("random psd data never violates the bound") {
    std::mt19937_64 rng(71);
    auto g_small = gns_build(
        Multisequence::from_measure(random_atoms(rng, 2, 2), 4,
                                    ScalarMode::kRational, 256),
        2);
    for (int iter = 0; iter < 10; ++iter) {
      auto mu = random_atoms(rng, 2, 1 + rng() % 4);
      auto m = Multisequence::from_measure(mu, 28, ScalarMode::kRational, 256);
      auto rep = qa_vector_norms(g_small, m, 1 + (iter % 2), {0, 0}, 6);
      CHECK(rep.cs_checked >= 6);
      CHECK(rep.cs_all_hold);
    }
  }
}
