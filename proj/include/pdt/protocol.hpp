#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pdt/channel.hpp"
#include "pdt/indexset.hpp"
#include "pdt/rates.hpp"
#include "pdt/transcript.hpp"

namespace pdt {

enum class AbortStage : std::uint8_t {
  BobSizeCheck,
  CathySizeCheck,
  AliceIntersectionCheck,
  BobOtSizeCheck,
  CathyOtSizeCheck,
};

const char* to_string(AbortStage s);

// Honest-but-curious baseline plus deliberately broken variants used by the
// audit regression tests.
enum class ProtocolVariant : std::uint8_t {
  Faithful,
  // Bob appends his choice to the set announcement, fully exposing it.
  ExposeChoice,
};

struct Database {
  std::vector<Bits> files;  // N files, equal length m_total

  int num_files() const { return static_cast<int>(files.size()); }
};

Database random_database(int num_files, std::uint64_t file_len,
                         std::uint64_t seed);

// A receiver's raw random draw, before the choice decides slot placement.
// `good` comes from unerased positions, the `bad` sets (slots in order,
// skipping the good slot) from erased ones, `extra` from leftover erased
// positions when the high-erasure regime is active.
struct ReceiverChoice {
  IndexSet good;
  std::vector<IndexSet> bad;
  IndexSet extra;
};

struct BobAnnouncement {
  std::vector<IndexSet> L;  // N sets; slot u holds the unerased draw
  IndexSet C;
  std::optional<std::uint8_t> exposed_choice;  // ExposeChoice variant only
};

struct CathyAnnouncement {
  std::vector<IndexSet> Lt;
  IndexSet Ct;
};

struct DataKeys {
  std::vector<Bits> keys;  // T_jj, each m_dot bits
};

struct CipherTexts {
  std::vector<Bits> m_list;  // M_j = first m_dot bits of K_j XOR T_jj
};

// Deterministic placement of a raw draw into announced slots.
BobAnnouncement place_bob(const ReceiverChoice& choice, int u,
                          ProtocolVariant variant);
CathyAnnouncement place_cathy(const ReceiverChoice& choice, int w);

// Raw draws. Return nullopt when the realized erasure counts cannot supply
// the plan's deterministic set sizes (the party then declares error).
std::optional<ReceiverChoice> bob_choose(const ReceivedSequence& y,
                                         const SizePlan& plan, int num_files,
                                         SubsetSampler& sampler);
std::optional<ReceiverChoice> cathy_choose(const ReceivedSequence& z,
                                           const IndexSet& l_union,
                                           const SizePlan& plan, int num_files,
                                           SubsetSampler& sampler);

std::optional<BobAnnouncement> bob_select(const ReceivedSequence& y, int u,
                                          const SizePlan& plan, int num_files,
                                          SubsetSampler& sampler,
                                          ProtocolVariant variant =
                                              ProtocolVariant::Faithful);
std::optional<CathyAnnouncement> cathy_select(const ReceivedSequence& z,
                                              const IndexSet& l_union, int w,
                                              const SizePlan& plan,
                                              int num_files,
                                              SubsetSampler& sampler);

// T_jj = x restricted to L_j intersect Lt_j, first m_dot bits in increasing
// index order. nullopt when some intersection is smaller than m_dot.
std::optional<DataKeys> alice_form_keys(const Bits& x,
                                        const std::vector<IndexSet>& L,
                                        const std::vector<IndexSet>& Lt,
                                        std::uint64_t m_dot);

CipherTexts alice_encrypt(const Database& db, const DataKeys& keys,
                          std::uint64_t m_dot);

// XOR the ciphertext against the receiver's channel output at its key
// indices. Throws std::logic_error if a key index is erased: that would be a
// protocol bug, not a run-time event.
Bits receiver_decode(const Bits& m_j, const ReceivedSequence& received,
                     const IndexSet& key_indices, std::uint64_t m_dot);

// --- Embedded two-party erasure OT over a resource known erased at the
// --- non-participating receiver.

struct OtAnnouncement {
  std::vector<IndexSet> sets;  // N disjoint sets of size m_ddot over resource
};

std::optional<ReceiverChoice> ot_choose(const ReceivedSequence& received,
                                        const IndexSet& resource,
                                        int num_strings, std::uint64_t m_ddot,
                                        SubsetSampler& sampler);
OtAnnouncement place_ot(const ReceiverChoice& choice, int pick);

std::vector<Bits> ot_sender_pads(const Bits& x, const OtAnnouncement& ann,
                                 const std::vector<Bits>& strings);
Bits ot_receiver_decode(const Bits& pad, const ReceivedSequence& received,
                        const IndexSet& my_set);

struct OtResult {
  Bits output;
  OtAnnouncement announcement;
  std::vector<Bits> pads;
};

// Full receiver/sender exchange; appends the receiver's announcement and the
// sender's pads to the transcript. nullopt on the receiver's size check.
std::optional<OtResult> erasure_ot(const Bits& x,
                                   const ReceivedSequence& received,
                                   const IndexSet& resource,
                                   const std::vector<Bits>& strings, int choice,
                                   SubsetSampler& sampler, Party receiver,
                                   const char* tag_prefix,
                                   Transcript& transcript);

// --- Full protocol run ---

struct RunSeeds {
  std::uint64_t channel = 0;
  std::uint64_t bob = 0;
  std::uint64_t cathy = 0;
  std::uint64_t alice = 0;
};

struct Views {
  // Alice: database, channel input, transcript. Bob: choice, y, transcript.
  // Cathy: choice, z, transcript. The transcript lives in RunOutcome.
  Bits x;
  ReceivedSequence y;
  ReceivedSequence z;
};

struct RunOutcome {
  bool completed = false;
  std::optional<AbortStage> abort_stage;
  std::optional<Party> abort_party;
  std::optional<Bits> k_hat_u;
  std::optional<Bits> k_hat_w;
  Transcript transcript;
  Views views;
  int u = 0;
  int w = 0;
  double achieved_rate = 0.0;  // m_total / n on completion
  std::uint64_t m_total = 0;
};

RunOutcome run_protocol(const ProtocolParams& params, const Database& db,
                        int u, int w, const RunSeeds& seeds,
                        ProtocolVariant variant = ProtocolVariant::Faithful);

// Same orchestration with the channel realization and party samplers
// supplied by the caller; used by tests and the audit oracle.
RunOutcome run_protocol_forced(const ProtocolParams& params,
                               const SizePlan& plan, const Database& db, int u,
                               int w, const Bits& x, const ReceivedSequence& y,
                               const ReceivedSequence& z,
                               SubsetSampler& bob_sampler,
                               SubsetSampler& cathy_sampler,
                               ProtocolVariant variant =
                                   ProtocolVariant::Faithful);

}  // namespace pdt
