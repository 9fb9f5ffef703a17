// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pdt/audit.hpp"
#include "pdt/rates.hpp"

using namespace pdt;

namespace {

int failures = 0;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

void report(int criterion, const char* name, bool pass, double elapsed,
            const std::string& detail) {
  std::printf("%s  criterion %d  %-28s  %6.1fs  %s\n", pass ? "PASS" : "FAIL",
              criterion, name, elapsed, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// 1. Bound consistency: the lower and upper bounds collapse to the two-file
// capacity and stay ordered for more files.
void criterion_1() {
  const double t0 = now_seconds();
  bool pass = true;
  std::string detail = "max deviation ";
  double worst = 0.0;
  for (int i = 1; i <= 19; ++i) {
    for (int j = 1; j <= 19; ++j) {
      const double e1 = i * 0.05, e2 = j * 0.05;
      const RateBounds b2 = rate_bounds(e1, e2, 2);
      const double c = capacity_2p(e1, e2);
      worst = std::max({worst, std::abs(b2.r_lb - c), std::abs(b2.r_ub - c)});
      if (std::abs(b2.r_lb - c) > 1e-12 || std::abs(b2.r_ub - c) > 1e-12) {
        pass = false;
      }
      for (int nf = 2; nf <= 6; ++nf) {
        const RateBounds b = rate_bounds(e1, e2, nf);
        if (b.r_lb > b.r_ub + 1e-15) pass = false;
      }
    }
  }
  const double elapsed = now_seconds() - t0;
  if (elapsed >= 1.0) pass = false;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2e over 19x19 grid", worst);
  report(1, "capacity-consistency", pass, elapsed, detail + buf);
}

// 2. Rate achievability at the symmetric midpoint.
void criterion_2() {
  const double t0 = now_seconds();
  const ProtocolParams params{100000, 2, 0.5, 0.5, 0.01};
  const SizePlan plan = size_plan(params);
  const MonteCarloStats stats =
      monte_carlo_stats(params, 100, 20260823, false);
  const double rate = static_cast<double>(plan.m_total) / params.n;
  const double elapsed = now_seconds() - t0;
  const bool pass = stats.abort_rate <= 0.01 &&
                    stats.decode_error_rate == 0.0 && rate >= 0.235 &&
                    stats.mean_achieved_rate >= 0.235 && elapsed < 30.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "abort=%.3f decode_err=%.3f rate=%.5f (floor 0.235)",
                stats.abort_rate, stats.decode_error_rate, rate);
  report(2, "symmetric-rate", pass, elapsed, buf);
}

// 3. High-erasure regime with the embedded OT phase.
void criterion_3() {
  const double t0 = now_seconds();
  const ProtocolParams params{100000, 2, 0.7, 0.7, 0.01};
  const SizePlan plan = size_plan(params);
  const MonteCarloStats stats =
      monte_carlo_stats(params, 100, 20260824, false);
  const double rate = static_cast<double>(plan.m_total) / params.n;
  const double elapsed = now_seconds() - t0;
  const bool pass = stats.decode_error_rate == 0.0 && rate >= 0.189 &&
                    stats.mean_achieved_rate >= 0.189 && plan.m_ddot > 0 &&
                    elapsed < 60.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "decode_err=%.3f rate=%.5f (floor 0.189) m_ddot=%llu",
                stats.decode_error_rate, rate,
                static_cast<unsigned long long>(plan.m_ddot));
  report(3, "high-erasure-rate", pass, elapsed, buf);
}

// 4. Exact zero leakage at desk scale, two and three files.
void criterion_4() {
  const double t0 = now_seconds();
  bool pass = true;
  double worst = 0.0;
  for (int nf : {2, 3}) {
    TinyConfig cfg;
    cfg.n = nf == 2 ? 4 : 6;
    cfg.num_files = nf;
    cfg.eps1 = cfg.eps2 = 0.5;
    cfg.size_L = cfg.size_Lt = 1;
    cfg.m_dot = 1;
    const PrivacyReport rep = privacy_report(cfg);
    if (std::abs(rep.mass - 1.0) > 1e-12) pass = false;
    for (const ConditionResult& c : rep.conditions) {
      worst = std::max(worst, std::abs(c.value));
      if (!c.pass) pass = false;
    }
  }
  const double elapsed = now_seconds() - t0;
  if (elapsed >= 300.0) pass = false;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "worst |condition| = %.2e (N=2 and N=3)",
                worst);
  report(4, "exact-privacy", pass, elapsed, buf);
}

// 5. Zero decode failures across the mixed-erasure Monte Carlo matrix.
void criterion_5() {
  const double t0 = now_seconds();
  bool pass = true;
  std::uint64_t total = 0;
  const double grid[] = {0.3, 0.5, 0.7};
  std::uint64_t idx = 0;
  for (double e1 : grid) {
    for (double e2 : grid) {
      const ProtocolParams params{2000, 2, e1, e2, 0.02};
      const MonteCarloStats stats = monte_carlo_stats(
          params, 1112, derive_seed(97, kTagSweep, idx++), false);
      total += stats.trials;
      if (stats.decode_error_rate != 0.0) pass = false;
    }
  }
  const double elapsed = now_seconds() - t0;
  if (total < 10000 || elapsed >= 600.0) pass = false;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%llu runs, zero decode failures",
                static_cast<unsigned long long>(total));
  report(5, "correctness-at-scale", pass, elapsed, buf);
}

// 6. Abort probability decays with block length.
void criterion_6() {
  const double t0 = now_seconds();
  bool pass = true;
  double final_rate = 0.0;
  for (std::uint64_t schedule = 0; schedule < 5; ++schedule) {
    double prev = 1.0;
    for (std::uint64_t n : {1000ull, 10000ull, 100000ull}) {
      const ProtocolParams params{n, 2, 0.5, 0.5, 0.02};
      const MonteCarloStats stats = monte_carlo_stats(
          params, 200, derive_seed(5, kTagSweep, schedule), false);
      if (stats.abort_rate > prev) pass = false;
      prev = stats.abort_rate;
      if (n == 100000) final_rate = std::max(final_rate, stats.abort_rate);
    }
  }
  if (final_rate >= 1e-3) pass = false;
  const double elapsed = now_seconds() - t0;
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "non-increasing on 5 schedules, abort@1e5 = %.2e", final_rate);
  report(6, "abort-decay", pass, elapsed, buf);
}

// 7. Announced sets carry no information about the choice; the mutated
// protocol is caught.
void criterion_7() {
  const double t0 = now_seconds();
  bool pass = true;
  double worst = 0.0;

  auto tiny = [](int n, int nf, std::uint64_t size_L) {
    TinyConfig cfg;
    cfg.n = n;
    cfg.num_files = nf;
    cfg.eps1 = cfg.eps2 = 0.5;
    cfg.size_L = size_L;
    cfg.size_Lt = 1;
    cfg.m_dot = 1;
    return cfg;
  };
  std::vector<TinyConfig> matrix = {tiny(4, 2, 1), tiny(6, 3, 1),
                                    tiny(6, 2, 2)};
  {
    TinyConfig high = tiny(6, 2, 2);
    high.eps1 = high.eps2 = 0.75;
    high.include_high_erasure = true;
    high.size_C = high.size_Ct = high.size_S = high.size_St = 2;
    high.m_ddot = 1;
    matrix.push_back(high);
  }
  for (const TinyConfig& cfg : matrix) {
    const JointDistribution joint = enumerate_joint(cfg);
    const double tb = announcement_tv_bob(joint);
    const double tc = announcement_tv_cathy(joint);
    worst = std::max({worst, tb, tc});
    if (tb > 1e-12 || tc > 1e-12) pass = false;
  }

  TinyConfig mutated = tiny(4, 2, 1);
  mutated.variant = ProtocolVariant::ExposeChoice;
  const double mtv = announcement_tv_bob(enumerate_joint(mutated));
  if (mtv < 0.5) pass = false;

  const double elapsed = now_seconds() - t0;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "faithful max TV = %.2e, mutated TV = %.2f",
                worst, mtv);
  report(7, "announcement-invariance", pass, elapsed, buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  std::printf("%s (%d of 7 criteria failed)\n",
              failures == 0 ? "ALL CRITERIA PASS" : "ACCEPTANCE FAILED",
              failures);
  return failures == 0 ? 0 : 1;
}
