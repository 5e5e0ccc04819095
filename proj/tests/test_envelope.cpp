#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "momentdet/envelope.hpp"

using namespace momentdet;

namespace {

// Independent hull oracle: gift-wrapping on (n, ln M_n) with exact slope
// comparisons (slope(i,k) vs slope(i,j) by cross multiplication of powers).
// Ties pick the farthest point, so only strict vertices survive.
std::vector<std::size_t> oracle_vertices_exact(
    const std::vector<Rational>& m) {
  std::size_t N = m.size();  // m[0] is M_1
  std::vector<std::size_t> verts{1};
  std::size_t cur = 1;
  while (cur < N) {
    std::size_t best = cur + 1;
    for (std::size_t k = cur + 2; k <= N; ++k) {
      // slope(cur,k) <= slope(cur,best)?
      // (lnM_k - lnM_cur)/(k-cur) <= (lnM_b - lnM_cur)/(b-cur)
      // <=> M_k^(b-cur) * M_cur^(k-b) <= M_b^(k-cur)
      Rational lhs = rat_pow(m[k - 1], static_cast<unsigned>(best - cur)) *
                     rat_pow(m[cur - 1], static_cast<unsigned>(k - best));
      Rational rhs = rat_pow(m[best - 1], static_cast<unsigned>(k - cur));
      if (lhs <= rhs) best = k;
    }
    verts.push_back(best);
    cur = best;
  }
  return verts;
}

PositiveSequence seq_from_rationals(std::vector<Rational> vals) {
  std::vector<Scalar> scalars;
  scalars.reserve(vals.size());
  for (auto& v : vals) scalars.emplace_back(std::move(v));
  return PositiveSequence::from_values(std::move(scalars),
                                       ScalarMode::kRational, 256, "test");
}

std::vector<Rational> random_positive_rationals(std::mt19937_64& rng,
                                                std::size_t count) {
  // log-values uniform in [-10, 10]; 30-bit dyadic mantissa keeps them exact.
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<Rational> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double lv = u(rng);
    double mant = std::exp(lv);
    long long num = static_cast<long long>(std::ldexp(mant, 30 - static_cast<int>(std::floor(std::log2(mant)))));
    int shift = 30 - static_cast<int>(std::floor(std::log2(mant)));
    Rational q = Rational(num) / rat_pow(Rational(2), static_cast<unsigned>(shift < 0 ? 0 : shift));
    if (shift < 0) q = Rational(num) * rat_pow(Rational(2), static_cast<unsigned>(-shift));
    if (q.sign() <= 0) q = Rational(1);
    out.push_back(q);
  }
  return out;
}

}  // namespace

TEST_CASE("log convexity checks") {
  auto fact =
      PositiveSequence::builtin("factorial", 20, ScalarMode::kRational, 256);
  CHECK(is_log_convex(fact, 20).log_convex);
  CHECK(log_convex_by_ratios(fact, 20).log_convex);
  CHECK(log_convex_by_logs(fact, 20).log_convex);

  auto konst =
      PositiveSequence::builtin("constant", 50, ScalarMode::kRational, 256);
  CHECK(is_log_convex(konst, 50).log_convex);

  auto bad = seq_from_rationals({Rational(1), Rational(3), Rational(2)});
  auto rep = is_log_convex(bad, 2);
  REQUIRE_FALSE(rep.log_convex);
  CHECK(*rep.first_violation == 1);
  CHECK_FALSE(log_convex_by_ratios(bad, 2).log_convex);
  CHECK_FALSE(log_convex_by_logs(bad, 2).log_convex);

  CHECK_THROWS_AS((void)is_log_convex(fact, 1), WindowError);
}

TEST_CASE("hull of the (1,3,2) log pattern") {
  // M = (2, 2^3, 2^2): ln M proportional to (1, 3, 2).
  auto seq = seq_from_rationals(
      {Rational(1), Rational(2), Rational(8), Rational(4)});
  auto reg = log_convex_regularize(seq, 3);
  CHECK(reg.support() == std::vector<std::size_t>{1, 3});
  CHECK(reg.exact_value(1) == PowerValue(Rational(2), 1));
  CHECK(reg.exact_value(2) == PowerValue(Rational(8), 2));  // sqrt(2*4)
  CHECK(reg.exact_value(3) == PowerValue(Rational(4), 1));
  // envelope dominance and exact touch at support
  CHECK(reg.exact_value(2).compare(PowerValue(Rational(8), 1)) ==
        std::strong_ordering::less);

  auto leg = regularize_via_legendre(seq, 3);
  CHECK(reg.equals(leg));
}

TEST_CASE("float mode ln M = (1,3,2) interpolates the midpoint") {
  PrecisionGuard guard(256);
  std::vector<Scalar> vals{Scalar(Real(exp(Real(1)))), Scalar(Real(exp(Real(1)))),
                           Scalar(Real(exp(Real(3)))), Scalar(Real(exp(Real(2))))};
  auto seq = PositiveSequence::from_values(vals, ScalarMode::kFloat, 256, "f");
  auto reg = log_convex_regularize(seq, 3);
  CHECK(reg.support() == std::vector<std::size_t>{1, 3});
  CHECK(abs(reg.log_value(2) - Real("1.5")) < Real("1e-60"));
  auto leg = regularize_via_legendre(seq, 3);
  CHECK(reg.equals(leg, 1e-70));
}

TEST_CASE("log-convex input is a fixed point") {
  auto fact =
      PositiveSequence::builtin("factorial", 16, ScalarMode::kRational, 256);
  auto reg = log_convex_regularize(fact, 16);
  for (std::size_t n = 1; n <= 16; ++n) {
    CHECK(reg.exact_value(n).is_rational());
    CHECK(reg.exact_value(n).base() == fact.at(n).rat());
  }
  CHECK(reg.support().size() == 16);

  // idempotence
  auto again = log_convex_regularize(reg.as_sequence(), 16);
  CHECK(again.equals(reg));
}

TEST_CASE("two point window is the chord") {
  auto seq = seq_from_rationals({Rational(1), Rational(5), Rational(3)});
  auto reg = log_convex_regularize(seq, 2);
  CHECK(reg.support() == std::vector<std::size_t>{1, 2});
  CHECK(reg.exact_value(1).base() == Rational(5));
  CHECK(reg.exact_value(2).base() == Rational(3));
}

TEST_CASE("t function") {
  auto fact =
      PositiveSequence::builtin("factorial", 50, ScalarMode::kRational, 256);
  auto tv = t_function(fact, Scalar(1), 50);
  CHECK(tv.value == Scalar(1));
  CHECK(tv.argmax == 1);
  CHECK_FALSE(tv.truncated);

  auto konst =
      PositiveSequence::builtin("constant", 10, ScalarMode::kRational, 256);
  auto tc = t_function(konst, Scalar(2), 10);
  CHECK(tc.value.rat() == Rational(1024));
  CHECK(tc.truncated);

  CHECK_THROWS((void)t_function(fact, Scalar(Rational(1, 2)), 10));
}

TEST_CASE("T dominance invariant r^n/M_n <= T(r)") {
  auto fact =
      PositiveSequence::builtin("factorial", 30, ScalarMode::kRational, 256);
  for (int ri = 1; ri <= 5; ++ri) {
    Scalar r{Rational(ri)};
    auto tv = t_function(fact, r, 30);
    Scalar rn = r;
    for (std::size_t n = 1; n <= 30; ++n) {
      CHECK(rn / fact.at(n) <= tv.value);
      rn = rn * r;
    }
  }
}

TEST_CASE("random rational windows: oracle equivalence of both routes") {
  std::mt19937_64 rng(20240811);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t N = 3 + static_cast<std::size_t>(rng() % 30);
    auto vals = random_positive_rationals(rng, N + 1);
    std::vector<Rational> tail(vals.begin() + 1, vals.end());
    auto seq = seq_from_rationals(vals);

    auto reg = log_convex_regularize(seq, N);
    auto leg = regularize_via_legendre(seq, N);
    CHECK(reg.equals(leg));
    CHECK(reg.support() == oracle_vertices_exact(tail));

    for (std::size_t n = 1; n <= N; ++n) {
      // dominance
      CHECK(reg.exact_value(n).compare(PowerValue(seq.at(n).rat(), 1)) !=
            std::strong_ordering::greater);
      // discrete log-convexity of the envelope
      if (n >= 2 && n + 1 <= N) {
        PowerValue sq = reg.exact_value(n).mul(reg.exact_value(n));
        PowerValue prod = reg.exact_value(n - 1).mul(reg.exact_value(n + 1));
        CHECK(sq.compare(prod) != std::strong_ordering::greater);
      }
    }
    for (std::size_t v : reg.support())
      CHECK(reg.exact_value(v) == PowerValue(seq.at(v).rat(), 1));
  }
}

TEST_CASE("root monotonicity for normalized log-convex windows") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 40; ++iter) {
    std::size_t N = 3 + static_cast<std::size_t>(rng() % 20);
    // increasing ratios -> log-convex with M_0 = 1
    std::vector<Rational> vals{Rational(1)};
    Rational ratio(1, 1000);
    for (std::size_t n = 1; n <= N; ++n) {
      ratio += Rational(static_cast<long>(rng() % 1000) + 1, 997);
      vals.push_back(vals.back() * ratio);
    }
    auto seq = seq_from_rationals(vals);
    REQUIRE(is_log_convex(seq, N).log_convex);
    for (std::size_t n = 2; n <= N; ++n) {
      PowerValue prev(seq.at(n - 1).rat(), static_cast<unsigned>(n - 1));
      PowerValue cur(seq.at(n).rat(), static_cast<unsigned>(n));
      CHECK(prev.compare(cur) != std::strong_ordering::greater);
    }
  }
}

TEST_CASE("three-way log-convexity agreement on random windows") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 50; ++iter) {
    std::size_t N = 3 + static_cast<std::size_t>(rng() % 20);
    auto vals = random_positive_rationals(rng, N + 1);
    auto seq = seq_from_rationals(vals);
    auto a = is_log_convex(seq, N);
    auto b = log_convex_by_ratios(seq, N);
    auto c = log_convex_by_logs(seq, N);
    CHECK(a.log_convex == b.log_convex);
    CHECK(a.log_convex == c.log_convex);
    if (!a.log_convex) CHECK(*a.first_violation == *b.first_violation);
  }
}

TEST_CASE("LogTEvaluator agrees with direct T scan") {
  PrecisionGuard guard(256);
  auto fact =
      PositiveSequence::builtin("factorial", 40, ScalarMode::kRational, 256);
  auto reg = log_convex_regularize(fact, 40);
  LogTEvaluator lt(reg);
  for (int ri = 1; ri <= 30; ri += 3) {
    Scalar r{Rational(ri)};
    auto tv = t_function(fact, r, 40);
    Real expect = log(tv.value.real());
    Real got = lt.ln_t_at(log(Real(ri)));
    CHECK(abs(got - expect) < Real("1e-60"));
  }
}

TEST_CASE("T is nondecreasing in r") {
  std::mt19937_64 rng(123);
  for (int iter = 0; iter < 20; ++iter) {
    std::size_t N = 3 + static_cast<std::size_t>(rng() % 20);
    auto vals = random_positive_rationals(rng, N + 1);
    auto seq = seq_from_rationals(vals);
    Scalar prev(0);
    for (long r = 1; r <= 12; ++r) {
      auto tv = t_function(seq, Scalar(Rational(r)), N);
      CHECK(tv.value >= prev);
      prev = tv.value;
    }
  }
}

TEST_CASE("idempotence holds in float mode too") {
  PrecisionGuard guard(256);
  std::mt19937_64 rng(321);
  for (int iter = 0; iter < 10; ++iter) {
    std::size_t N = 4 + static_cast<std::size_t>(rng() % 24);
    auto vals = random_positive_rationals(rng, N + 1);
    auto seq = seq_from_rationals(vals).as_float(256);
    auto reg = log_convex_regularize(seq, N);
    auto again = log_convex_regularize(reg.as_sequence(), N);
    CHECK(again.equals(reg, 1e-60));
  }
}
