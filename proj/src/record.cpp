#include "pdt/record.hpp"

#include <cstdio>

namespace pdt {

namespace {

Json params_json(const ProtocolParams& p) {
  Json j;
  j["n"] = p.n;
  j["N"] = p.num_files;
  j["eps1"] = p.eps1;
  j["eps2"] = p.eps2;
  j["delta"] = p.delta;
  return j;
}

std::string hex_bytes(const std::vector<std::uint8_t>& v) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(v.size() * 2);
  for (std::uint8_t b : v) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

Json rate_bounds_record(double eps1, double eps2, int num_files) {
  const RateBounds b = rate_bounds(eps1, eps2, num_files);
  Json j;
  j["eps1"] = eps1;
  j["eps2"] = eps2;
  j["N"] = num_files;
  if (b.c2p) {
    j["c2p"] = *b.c2p;
  } else {
    j["c2p"] = nullptr;
  }
  j["r_lb"] = b.r_lb;
  j["r_ub"] = b.r_ub;
  j["r_ex"] = b.r_ex;
  j["high_erasure"] = high_erasure_active(eps1, eps2, num_files);
  return j;
}

Json size_plan_record(const ProtocolParams& params, const SizePlan& plan) {
  Json j;
  j["params"] = params_json(params);
  j["r1"] = plan.r1;
  j["r2"] = plan.r2;
  j["size_L"] = plan.size_L;
  j["size_Lt"] = plan.size_Lt;
  j["size_C"] = plan.size_C;
  j["size_Ct"] = plan.size_Ct;
  j["size_S"] = plan.size_S;
  j["size_St"] = plan.size_St;
  j["m_dot"] = plan.m_dot;
  j["m_ddot"] = plan.m_ddot;
  j["m_total"] = plan.m_total;
  j["plan_rate"] = static_cast<double>(plan.m_total) / params.n;
  return j;
}

Json run_record(const ProtocolParams& params, const RunSeeds& seeds,
                std::uint64_t master_seed, const RunOutcome& outcome,
                bool dump) {
  Json j;
  j["params"] = params_json(params);
  j["seed"] = master_seed;
  j["seeds"] = Json{{"channel", seeds.channel},
                    {"bob", seeds.bob},
                    {"cathy", seeds.cathy},
                    {"alice", seeds.alice}};
  j["u"] = outcome.u;
  j["w"] = outcome.w;
  j["status"] = outcome.completed ? "Completed" : "Aborted";
  if (outcome.abort_stage) {
    j["abort_stage"] = to_string(*outcome.abort_stage);
    j["abort_party"] = to_string(*outcome.abort_party);
  }
  if (outcome.completed) {
    j["m_total"] = outcome.m_total;
    j["achieved_rate"] = outcome.achieved_rate;
    if (dump) {
      j["k_hat_u"] = to_string(*outcome.k_hat_u);
      j["k_hat_w"] = to_string(*outcome.k_hat_w);
    }
  }
  Json msgs = Json::array();
  for (const Message& m : outcome.transcript.messages()) {
    Json e;
    e["sender"] = to_string(m.sender);
    e["tag"] = m.tag;
    e["length"] = m.payload.size();
    if (dump) e["payload"] = hex_bytes(m.payload);
    msgs.push_back(std::move(e));
  }
  j["transcript"] = std::move(msgs);
  j["transcript_digest"] = outcome.transcript.payload_digest();
  if (dump) {
    j["x"] = to_string(outcome.views.x);
    j["y"] = to_string(outcome.views.y);
    j["z"] = to_string(outcome.views.z);
  }
  return j;
}

Json privacy_report_record(const TinyConfig& cfg, const PrivacyReport& report) {
  Json j;
  j["config"] = Json{{"n", cfg.n},
                     {"N", cfg.num_files},
                     {"eps1", cfg.eps1},
                     {"eps2", cfg.eps2},
                     {"size_L", cfg.size_L},
                     {"size_Lt", cfg.size_Lt},
                     {"m_dot", cfg.m_dot},
                     {"m_ddot", cfg.m_ddot},
                     {"high_erasure", cfg.include_high_erasure},
                     {"mutation", cfg.variant == ProtocolVariant::ExposeChoice
                                      ? "expose-choice"
                                      : "none"}};
  j["mass"] = report.mass;
  j["prob_no_abort"] = report.prob_no_abort;
  Json conds = Json::array();
  for (const ConditionResult& c : report.conditions) {
    conds.push_back(Json{{"id", c.id},
                         {"value", c.value},
                         {"threshold", c.threshold},
                         {"pass", c.pass}});
  }
  j["conditions"] = std::move(conds);
  j["all_pass"] = report.all_pass();
  return j;
}

Json monte_carlo_record(const ProtocolParams& params, std::uint64_t seed,
                        const MonteCarloStats& stats) {
  Json j;
  j["params"] = params_json(params);
  j["seed"] = seed;
  j["trials"] = stats.trials;
  j["abort_rate"] = stats.abort_rate;
  j["decode_error_rate"] = stats.decode_error_rate;
  j["mean_achieved_rate"] = stats.mean_achieved_rate;
  Json tv = Json::array();
  for (const TvEntry& e : stats.transcript_tv) {
    tv.push_back(Json{{"choice_a", e.choice_a},
                      {"choice_b", e.choice_b},
                      {"tv", e.tv}});
  }
  j["transcript_tv"] = std::move(tv);
  return j;
}

std::string sweep_csv_header() {
  return "eps1,eps2,N,n,delta,trials,abort_rate,decode_error_rate,mean_rate,"
         "r_lb,r_ub,c2p";
}

std::string sweep_csv_row(const ProtocolParams& params, std::uint64_t trials,
                          const MonteCarloStats& stats) {
  const RateBounds b = rate_bounds(params.eps1, params.eps2, params.num_files);
  std::string row;
  row += fmt_double(params.eps1);
  row += ',';
  row += fmt_double(params.eps2);
  row += ',';
  row += std::to_string(params.num_files);
  row += ',';
  row += std::to_string(params.n);
  row += ',';
  row += fmt_double(params.delta);
  row += ',';
  row += std::to_string(trials);
  row += ',';
  row += fmt_double(stats.abort_rate);
  row += ',';
  row += fmt_double(stats.decode_error_rate);
  row += ',';
  row += fmt_double(stats.mean_achieved_rate);
  row += ',';
  row += fmt_double(b.r_lb);
  row += ',';
  row += fmt_double(b.r_ub);
  row += ',';
  if (b.c2p) row += fmt_double(*b.c2p);
  return row;
}

}  // namespace pdt
