#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdt/record.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAbort = 2;
constexpr int kExitAuditFail = 3;

// PDT_SEED in the environment wins over --seed.
std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("PDT_SEED")) {
    return std::stoull(env);
  }
  return flag_seed;
}

int cmd_capacity(double eps1, double eps2, int num_files) {
  std::cout << pdt::rate_bounds_record(eps1, eps2, num_files).dump(2) << "\n";
  return kExitOk;
}

int cmd_plan(const pdt::ProtocolParams& params) {
  const pdt::SizePlan plan = pdt::size_plan(params);
  std::cout << pdt::size_plan_record(params, plan).dump(2) << "\n";
  return kExitOk;
}

int cmd_run(const pdt::ProtocolParams& params, std::uint64_t seed, int u,
            int w, bool dump, const std::string& mutate) {
  const auto variant = mutate == "expose-choice"
                           ? pdt::ProtocolVariant::ExposeChoice
                           : pdt::ProtocolVariant::Faithful;
  pdt::CounterRng pick(seed, pdt::kTagChoices);
  if (u < 0) u = static_cast<int>(pick.below(params.num_files));
  if (w < 0) w = static_cast<int>(pick.below(params.num_files));
  if (u >= params.num_files || w >= params.num_files) {
    throw std::invalid_argument("choice index out of range");
  }
  const pdt::SizePlan plan = pdt::size_plan(params);
  const pdt::Database db = pdt::random_database(
      params.num_files, plan.m_total,
      pdt::derive_seed(seed, pdt::kTagDatabase, 0));
  const pdt::RunSeeds seeds{
      pdt::derive_seed(seed, pdt::kTagErasureBob, 0),
      pdt::derive_seed(seed, pdt::kTagBobSets, 0),
      pdt::derive_seed(seed, pdt::kTagCathySets, 0),
      pdt::derive_seed(seed, pdt::kTagAliceBits, 0)};
  const pdt::RunOutcome out =
      pdt::run_protocol(params, db, u, w, seeds, variant);
  std::cout << pdt::run_record(params, seeds, seed, out, dump).dump(2) << "\n";
  return out.completed ? kExitOk : kExitAbort;
}

int cmd_sweep(const std::vector<double>& grid1, const std::vector<double>& grid2,
              int num_files, std::uint64_t n, double delta,
              std::uint64_t trials, std::uint64_t seed,
              const std::string& out_path) {
  if (grid1.empty() || grid2.empty()) {
    throw std::invalid_argument("sweep: empty erasure grid");
  }
  struct Point {
    pdt::ProtocolParams params;
    std::future<pdt::MonteCarloStats> stats;
  };
  std::vector<Point> points;
  std::uint64_t idx = 0;
  for (double e1 : grid1) {
    for (double e2 : grid2) {
      pdt::ProtocolParams p{n, num_files, e1, e2, delta};
      p.validate();
      const std::uint64_t point_seed =
          pdt::derive_seed(seed, pdt::kTagSweep, idx++);
      points.push_back({p, std::async(std::launch::async, [p, trials,
                                                           point_seed] {
                          return pdt::monte_carlo_stats(p, trials, point_seed,
                                                        false);
                        })});
    }
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("sweep: cannot open " + out_path);
  out << pdt::sweep_csv_header() << "\n";
  for (Point& pt : points) {
    out << pdt::sweep_csv_row(pt.params, trials, pt.stats.get()) << "\n";
  }
  if (!out) throw std::runtime_error("sweep: write failed");
  return kExitOk;
}

int cmd_audit(pdt::TinyConfig cfg) {
  const pdt::PrivacyReport rep = pdt::privacy_report(cfg);
  std::cout << pdt::privacy_report_record(cfg, rep).dump(2) << "\n";
  return rep.all_pass() ? kExitOk : kExitAuditFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private data transfer over an erasure broadcast channel"};
  app.require_subcommand(1);

  double eps1 = 0.5, eps2 = 0.5, delta = 0.01;
  int num_files = 2;
  std::uint64_t n = 1000, seed = 0, trials = 100;

  auto* cap = app.add_subcommand("capacity", "Rate bounds for (eps1, eps2, N)");
  cap->add_option("--eps1", eps1)->required();
  cap->add_option("--eps2", eps2)->required();
  cap->add_option("--N", num_files)->check(CLI::Range(2, 16));

  auto* plan = app.add_subcommand("plan", "Deterministic set and key sizes");
  plan->add_option("--n", n)->required();
  plan->add_option("--N", num_files)->check(CLI::Range(2, 16));
  plan->add_option("--eps1", eps1)->required();
  plan->add_option("--eps2", eps2)->required();
  plan->add_option("--delta", delta);

  int run_u = -1, run_w = -1;
  bool dump = false;
  std::string mutate;
  auto* run = app.add_subcommand("run", "Execute one protocol run");
  run->add_option("--n", n)->required();
  run->add_option("--N", num_files)->check(CLI::Range(2, 16));
  run->add_option("--eps1", eps1)->required();
  run->add_option("--eps2", eps2)->required();
  run->add_option("--delta", delta);
  run->add_option("--seed", seed);
  run->add_option("--u", run_u, "Bob's file choice (default: seeded draw)");
  run->add_option("--w", run_w, "Cathy's file choice (default: seeded draw)");
  run->add_flag("--dump", dump, "Include payloads and channel sequences");
  run->add_option("--mutate", mutate)->check(CLI::IsMember({"expose-choice"}));

  std::vector<double> grid1, grid2;
  std::string out_path = "sweep.csv";
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo over an erasure grid");
  sweep->add_option("--eps1-grid", grid1)->required()->delimiter(',');
  sweep->add_option("--eps2-grid", grid2)->required()->delimiter(',');
  sweep->add_option("--N", num_files)->check(CLI::Range(2, 16));
  sweep->add_option("--n", n)->required();
  sweep->add_option("--delta", delta);
  sweep->add_option("--trials", trials);
  sweep->add_option("--seed", seed);
  sweep->add_option("--out", out_path);

  pdt::TinyConfig tiny;
  std::string audit_mutate;
  auto* audit = app.add_subcommand("audit", "Exact privacy audit (tiny n)");
  audit->add_option("--n", tiny.n)->required();
  audit->add_option("--N", tiny.num_files);
  audit->add_option("--eps1", tiny.eps1);
  audit->add_option("--eps2", tiny.eps2);
  audit->add_option("--size-L", tiny.size_L);
  audit->add_option("--size-Lt", tiny.size_Lt);
  audit->add_option("--m-dot", tiny.m_dot);
  bool high = false;
  audit->add_flag("--high-erasure", high);
  audit->add_option("--size-C", tiny.size_C);
  audit->add_option("--size-Ct", tiny.size_Ct);
  audit->add_option("--size-S", tiny.size_S);
  audit->add_option("--size-St", tiny.size_St);
  audit->add_option("--m-ddot", tiny.m_ddot);
  audit->add_option("--budget", tiny.budget);
  audit->add_option("--mutate", audit_mutate)
      ->check(CLI::IsMember({"expose-choice"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cap->parsed()) return cmd_capacity(eps1, eps2, num_files);
    pdt::ProtocolParams params{n, num_files, eps1, eps2, delta};
    if (plan->parsed()) {
      params.validate();
      return cmd_plan(params);
    }
    if (run->parsed()) {
      params.validate();
      const auto s = effective_seed(seed);
      return cmd_run(params, s, run_u, run_w, dump, mutate);
    }
    if (sweep->parsed()) {
      return cmd_sweep(grid1, grid2, num_files, n, delta, trials,
                       effective_seed(seed), out_path);
    }
    if (audit->parsed()) {
      tiny.include_high_erasure = high;
      if (audit_mutate == "expose-choice") {
        tiny.variant = pdt::ProtocolVariant::ExposeChoice;
      }
      return cmd_audit(tiny);
    }
  } catch (const pdt::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
