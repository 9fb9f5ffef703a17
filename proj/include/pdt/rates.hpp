#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pdt {

class InfeasibleParams : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProtocolParams {
  std::uint64_t n = 0;   // broadcast channel uses
  int num_files = 2;     // N
  double eps1 = 0.0;     // Bob's erasure probability
  double eps2 = 0.0;     // Cathy's erasure probability
  double delta = 0.01;   // slack

  // Throws InfeasibleParams naming the violated invariant.
  void validate() const;
};

// All deterministic set and key sizes derived from the parameters.
struct SizePlan {
  double r1 = 0.0;            // per-use fraction behind Bob's set sizes
  double r2 = 0.0;            // per-use fraction behind Cathy's set sizes
  std::uint64_t size_L = 0;   // each of Bob's N announced sets
  std::uint64_t size_Lt = 0;  // each of Cathy's N announced sets
  std::uint64_t size_C = 0;   // Bob's spare erased set (high-erasure regime)
  std::uint64_t size_Ct = 0;  // Cathy's spare erased set
  std::uint64_t size_S = 0;   // truncated OT resource for Alice-Cathy
  std::uint64_t size_St = 0;  // truncated OT resource for Alice-Bob
  std::uint64_t m_dot = 0;    // bits per file carried by the XOR-pad phase
  std::uint64_t m_ddot = 0;   // bits per file carried by the embedded OT phase
  std::uint64_t m_total = 0;  // file length
};

struct RateBounds {
  std::optional<double> c2p;  // two-file capacity; set only when N == 2
  double r_ub = 0.0;
  double r_lb = 0.0;
  double r_ex = 0.0;  // extra-rate term; 0 outside the high-erasure regime
};

// min(eps2(1-eps1), eps1(1-eps2), eps1*eps2). Domain error outside [0,1].
double capacity_2p(double eps1, double eps2);

RateBounds rate_bounds(double eps1, double eps2, int num_files);

// True when both channels are in the high-erasure regime (strictly above
// (N-1)/N), where the spare erased sets and the embedded OT phase are used.
bool high_erasure_active(double eps1, double eps2, int num_files);

SizePlan size_plan(const ProtocolParams& params);

}  // namespace pdt
