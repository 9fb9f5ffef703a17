#include <cmath>

#include <doctest.h>

#include "pdt/rates.hpp"

using namespace pdt;

TEST_CASE("two-file capacity formula") {
  CHECK(capacity_2p(0.0, 0.9) == doctest::Approx(0.0));
  CHECK(capacity_2p(0.5, 0.5) == doctest::Approx(0.25));
  CHECK(capacity_2p(0.4, 0.6) == doctest::Approx(0.16));
  CHECK_THROWS_AS(capacity_2p(1.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(capacity_2p(0.5, -0.1), std::domain_error);
}

TEST_CASE("capacity symmetry, edge zeros, and maximum") {
  double best = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double e1 = i / 100.0, e2 = j / 100.0;
      const double c = capacity_2p(e1, e2);
      CHECK(c == doctest::Approx(capacity_2p(e2, e1)).epsilon(1e-15));
      if (i == 0 || i == 100 || j == 0 || j == 100) CHECK(c == 0.0);
      best = std::max(best, c);
    }
  }
  CHECK(best == doctest::Approx(0.25));
  CHECK(capacity_2p(0.5, 0.5) == doctest::Approx(best));
}

TEST_CASE("rate bounds at named points") {
  const RateBounds b3 = rate_bounds(0.6, 0.6, 3);
  CHECK(b3.r_ub == doctest::Approx(0.18));
  CHECK(b3.r_lb == doctest::Approx(0.09));
  CHECK_FALSE(b3.c2p.has_value());

  const RateBounds b2 = rate_bounds(0.7, 0.7, 2);
  CHECK(b2.r_lb == doctest::Approx(0.21));
  CHECK(b2.r_ub == doctest::Approx(0.21));
  CHECK(b2.r_ex == doctest::Approx(0.12));
  REQUIRE(b2.c2p.has_value());
  CHECK(*b2.c2p == doctest::Approx(0.21));
}

TEST_CASE("bound ordering over the grid, collapse at two files") {
  for (int i = 1; i < 100; ++i) {
    for (int j = 1; j < 100; ++j) {
      const double e1 = i / 100.0, e2 = j / 100.0;
      for (int nf = 2; nf <= 6; ++nf) {
        const RateBounds b = rate_bounds(e1, e2, nf);
        CHECK(b.r_lb >= 0.0);
        CHECK(b.r_lb <= b.r_ub + 1e-15);
        if (nf == 2) {
          REQUIRE(b.c2p.has_value());
          CHECK(std::abs(b.r_lb - *b.c2p) <= 1e-12);
          CHECK(std::abs(b.r_ub - *b.c2p) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("size plan, low-erasure example") {
  const ProtocolParams p{1000, 2, 0.3, 0.3, 0.05};
  const SizePlan plan = size_plan(p);
  CHECK(plan.r1 == doctest::Approx(0.25));
  CHECK(plan.r2 == doctest::Approx(0.25));
  CHECK(plan.size_L == 250);
  CHECK(plan.size_Lt == 125);
  CHECK(plan.size_C == 0);
  CHECK(plan.size_Ct == 0);
  CHECK(plan.m_dot == 59);  // floor(0.95 * 125 / 2)
  CHECK(plan.m_ddot == 0);
  CHECK(plan.m_total == 59);
}

TEST_CASE("size plan, high-erasure example") {
  const ProtocolParams p{1000, 2, 0.7, 0.7, 0.05};
  const SizePlan plan = size_plan(p);
  CHECK(plan.r1 == doctest::Approx(0.25));
  CHECK(plan.size_L == 250);
  CHECK(plan.size_C == 400);
  CHECK(plan.size_Lt == 125);
  CHECK(plan.size_Ct == 200);
  CHECK(plan.size_S == 400);
  CHECK(plan.size_St == 200);
  CHECK(plan.m_ddot == 90);  // min(floor(200*0.45), floor(400*0.25))
  CHECK(plan.m_total == plan.m_dot + plan.m_ddot);
}

TEST_CASE("size plan rejects infeasible parameters") {
  CHECK_THROWS_AS(size_plan({10, 2, 0.5, 0.5, 0.5}), InfeasibleParams);
  CHECK_THROWS_AS(size_plan({100, 2, 0.0, 0.5, 0.01}), InfeasibleParams);
  CHECK_THROWS_AS(size_plan({100, 2, 1.0, 0.5, 0.01}), InfeasibleParams);
  // Sets round down to empty.
  CHECK_THROWS_AS(size_plan({4, 2, 0.5, 0.5, 0.4}), InfeasibleParams);
}

TEST_CASE("size plan determinism and geometry over a parameter grid") {
  const double grid[] = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  for (double e1 : grid) {
    for (double e2 : grid) {
      for (int nf : {2, 3}) {
        const ProtocolParams p{10000, nf, e1, e2, 0.01};
        const SizePlan a = size_plan(p);
        const SizePlan b = size_plan(p);
        CHECK(a.size_L == b.size_L);
        CHECK(a.m_total == b.m_total);
        CHECK(a.r1 == b.r1);

        CHECK(a.size_L * nf <= p.n);
        CHECK(a.size_C <= p.n - nf * a.size_L);
        CHECK(a.size_Lt * nf + a.size_Ct <= nf * a.size_L);
        CHECK(a.size_S <= a.size_C);
        CHECK(a.size_St <= a.size_Ct);

        const RateBounds bounds = rate_bounds(e1, e2, nf);
        const double plan_rate = static_cast<double>(a.m_total) / p.n;
        CHECK(plan_rate <= bounds.r_lb + 2 * p.delta);
      }
    }
  }
}

TEST_CASE("high-erasure activation is strict") {
  CHECK_FALSE(high_erasure_active(0.5, 0.5, 2));
  CHECK_FALSE(high_erasure_active(0.7, 0.5, 2));
  CHECK(high_erasure_active(0.7, 0.7, 2));
  CHECK_FALSE(high_erasure_active(2.0 / 3.0, 2.0 / 3.0, 3));
  CHECK(high_erasure_active(0.7, 0.7, 3));
}
