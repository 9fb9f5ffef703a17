#include "pdt/rates.hpp"

#include <algorithm>
#include <cmath>

namespace pdt {

namespace {

void check_eps(double e, const char* name) {
  if (!(e >= 0.0 && e <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0,1]");
  }
}

double rate_fraction(double eps, int num_files, double delta) {
  return std::min(eps / (num_files - 1), 1.0 - eps) - delta;
}

// Floor of a product of exact rationals evaluated in doubles; the tolerance
// absorbs representation error so e.g. 1000*(2*0.7-1) floors to 400, not 399.
std::uint64_t sfloor(double v) {
  return static_cast<std::uint64_t>(std::floor(v + 1e-9));
}

}  // namespace

double capacity_2p(double eps1, double eps2) {
  check_eps(eps1, "eps1");
  check_eps(eps2, "eps2");
  return std::min({eps2 * (1.0 - eps1), eps1 * (1.0 - eps2), eps1 * eps2});
}

bool high_erasure_active(double eps1, double eps2, int num_files) {
  const int nm1 = num_files - 1;
  return eps1 / nm1 > 1.0 - eps1 && eps2 / nm1 > 1.0 - eps2;
}

RateBounds rate_bounds(double eps1, double eps2, int num_files) {
  check_eps(eps1, "eps1");
  check_eps(eps2, "eps2");
  if (num_files < 2) throw std::domain_error("N must be at least 2");
  const double nm1 = num_files - 1;
  RateBounds b;
  b.r_ub = std::min(
      {eps2 * (1.0 - eps1), eps1 * (1.0 - eps2), eps1 * eps2 / nm1});
  const double threshold = nm1 / num_files;
  const bool hi1 = eps1 > threshold;
  const bool hi2 = eps2 > threshold;
  if (!hi1 && !hi2) {
    b.r_lb = (eps1 / nm1) * (eps2 / nm1);
  } else if (!hi1 && hi2) {
    b.r_lb = (eps1 / nm1) * (1.0 - eps2);
  } else if (hi1 && !hi2) {
    b.r_lb = (eps2 / nm1) * (1.0 - eps1);
  } else {
    b.r_ex = std::min((1.0 - eps2) * (1.0 - num_files * (1.0 - eps1)),
                      (1.0 - eps1) * (1.0 - num_files * (1.0 - eps2)));
    b.r_lb = (1.0 - eps1) * (1.0 - eps2) + b.r_ex;
  }
  if (num_files == 2) b.c2p = capacity_2p(eps1, eps2);
  return b;
}

void ProtocolParams::validate() const {
  check_eps(eps1, "eps1");
  check_eps(eps2, "eps2");
  if (num_files < 2) throw InfeasibleParams("N must be at least 2");
  if (n == 0) throw InfeasibleParams("n must be positive");
  if (!(delta > 0.0)) throw InfeasibleParams("delta must be positive");
  const double r1 = rate_fraction(eps1, num_files, delta);
  const double r2 = rate_fraction(eps2, num_files, delta);
  if (r1 <= 0.0) {
    throw InfeasibleParams(
        "delta >= min(eps1/(N-1), 1-eps1): Bob's set fraction r1 <= 0");
  }
  if (r2 <= 0.0) {
    throw InfeasibleParams(
        "delta >= min(eps2/(N-1), 1-eps2): Cathy's set fraction r2 <= 0");
  }
  if (std::floor(n * r1) < 1.0) {
    throw InfeasibleParams("floor(n*r1) < 1: Bob's announced sets empty");
  }
  if (std::floor(num_files * n * r1 * r2) < num_files) {
    throw InfeasibleParams(
        "floor(N*n*r1*r2) < N: Cathy's announced sets empty");
  }
}

SizePlan size_plan(const ProtocolParams& p) {
  p.validate();
  const int N = p.num_files;
  const double nm1 = N - 1;
  SizePlan plan;
  plan.r1 = rate_fraction(p.eps1, N, p.delta);
  plan.r2 = rate_fraction(p.eps2, N, p.delta);
  plan.size_L = sfloor(p.n * plan.r1);
  plan.size_Lt = sfloor(N * plan.size_L * plan.r2);
  plan.m_dot = sfloor((1.0 - p.delta) * plan.size_Lt / N);

  if (high_erasure_active(p.eps1, p.eps2, N)) {
    const double spare1 = p.eps1 - nm1 * (1.0 - p.eps1);  // 2*eps1-1 at N=2
    const double spare2 = p.eps2 - nm1 * (1.0 - p.eps2);
    plan.size_C = sfloor(p.n * spare1);
    plan.size_Ct = sfloor(N * plan.size_L * spare2);
    const double ot_frac = 1.0 / N - p.delta;  // receiver-side OT yield
    plan.size_S = plan.size_C;
    plan.size_St = plan.size_Ct;
    if (ot_frac > 0.0 && plan.r2 > 0.0) {
      // Truncate the larger resource so both receivers land on the same
      // extra file length.
      if (p.eps1 < p.eps2) {
        const auto cap = static_cast<std::uint64_t>(
            std::ceil(p.n * spare1 * plan.r2 / ot_frac));
        plan.size_St = std::min(plan.size_Ct, cap);
      } else if (p.eps2 < p.eps1) {
        const auto cap = static_cast<std::uint64_t>(
            std::ceil(N * plan.size_L * spare2 * ot_frac / plan.r2));
        plan.size_S = std::min(plan.size_C, cap);
      }
      plan.m_ddot = std::min(sfloor(plan.size_St * ot_frac),
                             sfloor(plan.size_S * plan.r2));
    }
  }
  plan.m_total = plan.m_dot + plan.m_ddot;
  return plan;
}

}  // namespace pdt
