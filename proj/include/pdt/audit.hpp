#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdt/protocol.hpp"
#include "pdt/rates.hpp"

namespace pdt {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A protocol instance small enough to enumerate exactly: every input,
// erasure pattern, and party choice is walked with its product probability.
struct TinyConfig {
  int n = 4;          // at most 8 channel uses
  int num_files = 2;  // 2 or 3
  double eps1 = 0.5;
  double eps2 = 0.5;
  std::uint64_t size_L = 1;
  std::uint64_t size_Lt = 1;
  std::uint64_t m_dot = 1;  // file bits on the XOR-pad phase
  // High-erasure extras; all zero when the regime is not exercised.
  bool include_high_erasure = false;
  std::uint64_t size_C = 0;
  std::uint64_t size_Ct = 0;
  std::uint64_t size_S = 0;
  std::uint64_t size_St = 0;
  std::uint64_t m_ddot = 0;

  ProtocolVariant variant = ProtocolVariant::Faithful;
  std::uint64_t budget = 1'000'000'000;  // weighted atom limit

  std::uint64_t file_len() const { return m_dot + m_ddot; }
  SizePlan plan() const;
  void validate() const;
};

// Where an enumerated execution path stops.
enum class ConfigStage : std::uint8_t {
  Complete,      // all size checks passed; J depends only on the choices
  BobAbort,      // Bob's size check failed (pattern only)
  CathyAbort,    // Cathy's size check failed
  BobOtAbort,    // Bob's OT resource cannot supply his sets
  CathyOtAbort,  // Cathy's OT resource cannot supply her sets
};

// One enumerated combination of erasure patterns and party draws, with the
// exact probability of that combination (choice placement, U, W, X and the
// database are expanded later, per query).
struct SetConfig {
  std::uint16_t pat_y = 0;  // bit i set = index i erased for Bob
  std::uint16_t pat_z = 0;
  ConfigStage stage = ConfigStage::Complete;
  ReceiverChoice bob;
  ReceiverChoice cathy;
  ReceiverChoice ot_bob;
  ReceiverChoice ot_cathy;
  double prob = 0.0;
};

// Variables available to mutual-information queries.
enum VarBit : std::uint32_t {
  VarU = 1u << 0,
  VarW = 1u << 1,
  VarX = 1u << 2,
  VarY = 1u << 3,
  VarZ = 1u << 4,
  VarBobAnnounce = 1u << 5,
  VarCathyAnnounce = 1u << 6,
  VarCiphertexts = 1u << 7,   // XOR-phase messages plus OT pads
  VarAllFiles = 1u << 8,      // the whole database (right side only)
  VarFilesNotU = 1u << 9,     // files other than Bob's choice
  VarFilesNotW = 1u << 10,    // files other than Cathy's choice
  VarFilesNotUW = 1u << 11,   // files other than both choices
};

enum class Given : std::uint8_t {
  Always,
  NoAbort,               // J = 1
  NoAbortChoicesEqual,   // J = 1 and U = W
  NoAbortChoicesDiffer,  // J = 1 and U != W
};

class JointDistribution {
 public:
  const TinyConfig& config() const { return cfg_; }
  const std::vector<SetConfig>& set_configs() const { return configs_; }

  // Total probability mass over every enumerated atom; 1 up to float error.
  double mass() const;
  // Probability that no party declares error (choices uniform).
  double prob_no_abort() const;
  // Probability that Bob's size check passes.
  double prob_bob_passes() const;

 private:
  friend JointDistribution enumerate_joint(const TinyConfig&);
  TinyConfig cfg_;
  std::vector<SetConfig> configs_;
};

JointDistribution enumerate_joint(const TinyConfig& cfg);

// Plug-in conditional mutual information, in bits, over the exact joint.
// `left` may combine VarU, VarW and one VarFilesNot* bit; `right` describes
// the observed view. Database bits outside the left set are marginalized
// analytically (they are uniform and independent of everything else).
double mutual_information(const JointDistribution& joint, std::uint32_t left,
                          std::uint32_t right, Given given);

// Plug-in MI over an explicit finite joint; used as an independent check of
// the streaming computation.
double plugin_mi(const std::vector<std::tuple<int, int, double>>& atoms);

// Largest pairwise total variation between the conditional laws of a
// receiver's announcement across its choice values, given J = 1.
double announcement_tv_bob(const JointDistribution& joint);
double announcement_tv_cathy(const JointDistribution& joint);

struct ConditionResult {
  std::string id;
  double value = 0.0;      // bits (probability for the correctness entry)
  double threshold = 0.0;
  bool pass = false;
};

struct PrivacyReport {
  std::vector<ConditionResult> conditions;
  double mass = 0.0;
  double prob_no_abort = 0.0;
  bool all_pass() const;
};

PrivacyReport privacy_report(const TinyConfig& cfg);

// --- Monte Carlo statistics at realistic parameters ---

struct TvEntry {
  int choice_a = 0;
  int choice_b = 0;
  double tv = 0.0;
};

struct MonteCarloStats {
  std::uint64_t trials = 0;
  double abort_rate = 0.0;
  double decode_error_rate = 0.0;   // over completed runs
  double mean_achieved_rate = 0.0;  // over completed runs
  std::vector<TvEntry> transcript_tv;
};

MonteCarloStats monte_carlo_stats(const ProtocolParams& params,
                                  std::uint64_t trials, std::uint64_t seed,
                                  bool with_transcript_tv = true,
                                  ProtocolVariant variant =
                                      ProtocolVariant::Faithful);

}  // namespace pdt
