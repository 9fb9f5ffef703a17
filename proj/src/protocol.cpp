#include "pdt/protocol.hpp"

#include <stdexcept>
#include <string>

namespace pdt {

const char* to_string(AbortStage s) {
  switch (s) {
    case AbortStage::BobSizeCheck:
      return "BobSizeCheck";
    case AbortStage::CathySizeCheck:
      return "CathySizeCheck";
    case AbortStage::AliceIntersectionCheck:
      return "AliceIntersectionCheck";
    case AbortStage::BobOtSizeCheck:
      return "BobOtSizeCheck";
    case AbortStage::CathyOtSizeCheck:
      return "CathyOtSizeCheck";
  }
  return "?";
}

Database random_database(int num_files, std::uint64_t file_len,
                         std::uint64_t seed) {
  Database db;
  db.files.reserve(num_files);
  for (int j = 0; j < num_files; ++j) {
    db.files.push_back(
        random_bits(file_len, derive_seed(seed, kTagDatabase, j), j));
  }
  return db;
}

namespace {

// Disjoint uniform draws: good from unerased, N-1 bad sets and the spare set
// from erased, sequentially without replacement.
std::optional<ReceiverChoice> choose_sets(const IndexSet& erased,
                                          const IndexSet& unerased,
                                          std::uint64_t good_size,
                                          std::uint64_t bad_size,
                                          int num_bad_sets,
                                          std::uint64_t extra_size,
                                          SubsetSampler& sampler) {
  if (unerased.size() < good_size ||
      erased.size() < num_bad_sets * bad_size + extra_size) {
    return std::nullopt;
  }
  ReceiverChoice choice;
  choice.good = sampler.pick(unerased, good_size);
  IndexSet pool = erased;
  for (int k = 0; k < num_bad_sets; ++k) {
    IndexSet b = sampler.pick(pool, bad_size);
    pool = set_minus(pool, b);
    choice.bad.push_back(std::move(b));
  }
  if (extra_size > 0) {
    choice.extra = sampler.pick(pool, extra_size);
  }
  return choice;
}

std::vector<IndexSet> place_slots(const ReceiverChoice& choice, int pick) {
  std::vector<IndexSet> slots(choice.bad.size() + 1);
  slots[pick] = choice.good;
  std::size_t next_bad = 0;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (static_cast<int>(j) != pick) slots[j] = choice.bad[next_bad++];
  }
  return slots;
}

Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

}  // namespace

BobAnnouncement place_bob(const ReceiverChoice& choice, int u,
                          ProtocolVariant variant) {
  BobAnnouncement ann;
  ann.L = place_slots(choice, u);
  ann.C = choice.extra;
  if (variant == ProtocolVariant::ExposeChoice) {
    ann.exposed_choice = static_cast<std::uint8_t>(u);
  }
  return ann;
}

CathyAnnouncement place_cathy(const ReceiverChoice& choice, int w) {
  CathyAnnouncement ann;
  ann.Lt = place_slots(choice, w);
  ann.Ct = choice.extra;
  return ann;
}

std::optional<ReceiverChoice> bob_choose(const ReceivedSequence& y,
                                         const SizePlan& plan, int num_files,
                                         SubsetSampler& sampler) {
  auto [erased, unerased] = erasure_partition(y, full_domain(y.size()));
  return choose_sets(erased, unerased, plan.size_L, plan.size_L, num_files - 1,
                     plan.size_C, sampler);
}

std::optional<ReceiverChoice> cathy_choose(const ReceivedSequence& z,
                                           const IndexSet& l_union,
                                           const SizePlan& plan, int num_files,
                                           SubsetSampler& sampler) {
  auto [erased, unerased] = erasure_partition(z, l_union);
  return choose_sets(erased, unerased, plan.size_Lt, plan.size_Lt,
                     num_files - 1, plan.size_Ct, sampler);
}

std::optional<BobAnnouncement> bob_select(const ReceivedSequence& y, int u,
                                          const SizePlan& plan, int num_files,
                                          SubsetSampler& sampler,
                                          ProtocolVariant variant) {
  auto choice = bob_choose(y, plan, num_files, sampler);
  if (!choice) return std::nullopt;
  return place_bob(*choice, u, variant);
}

std::optional<CathyAnnouncement> cathy_select(const ReceivedSequence& z,
                                              const IndexSet& l_union, int w,
                                              const SizePlan& plan,
                                              int num_files,
                                              SubsetSampler& sampler) {
  auto choice = cathy_choose(z, l_union, plan, num_files, sampler);
  if (!choice) return std::nullopt;
  return place_cathy(*choice, w);
}

std::optional<DataKeys> alice_form_keys(const Bits& x,
                                        const std::vector<IndexSet>& L,
                                        const std::vector<IndexSet>& Lt,
                                        std::uint64_t m_dot) {
  DataKeys keys;
  for (std::size_t j = 0; j < L.size(); ++j) {
    IndexSet inter = set_intersect(L[j], Lt[j]);
    if (inter.size() < m_dot) return std::nullopt;
    Bits t(m_dot);
    for (std::uint64_t i = 0; i < m_dot; ++i) t[i] = x[inter[i]];
    keys.keys.push_back(std::move(t));
  }
  return keys;
}

CipherTexts alice_encrypt(const Database& db, const DataKeys& keys,
                          std::uint64_t m_dot) {
  CipherTexts ct;
  for (std::size_t j = 0; j < keys.keys.size(); ++j) {
    const Bits& file = db.files[j];
    if (file.size() < m_dot || keys.keys[j].size() != m_dot) {
      throw std::invalid_argument("alice_encrypt: length mismatch");
    }
    Bits head(file.begin(), file.begin() + m_dot);
    ct.m_list.push_back(xor_bits(head, keys.keys[j]));
  }
  return ct;
}

Bits receiver_decode(const Bits& m_j, const ReceivedSequence& received,
                     const IndexSet& key_indices, std::uint64_t m_dot) {
  if (m_j.size() != m_dot || key_indices.size() < m_dot) {
    throw std::invalid_argument("receiver_decode: length mismatch");
  }
  Bits out(m_dot);
  for (std::uint64_t i = 0; i < m_dot; ++i) {
    const std::uint32_t idx = key_indices[i];
    if (received.erased(idx)) {
      throw std::logic_error("receiver_decode: key index erased");
    }
    out[i] = m_j[i] ^ received.bit(idx);
  }
  return out;
}

std::optional<ReceiverChoice> ot_choose(const ReceivedSequence& received,
                                        const IndexSet& resource,
                                        int num_strings, std::uint64_t m_ddot,
                                        SubsetSampler& sampler) {
  auto [erased, unerased] = erasure_partition(received, resource);
  return choose_sets(erased, unerased, m_ddot, m_ddot, num_strings - 1, 0,
                     sampler);
}

OtAnnouncement place_ot(const ReceiverChoice& choice, int pick) {
  return OtAnnouncement{place_slots(choice, pick)};
}

std::vector<Bits> ot_sender_pads(const Bits& x, const OtAnnouncement& ann,
                                 const std::vector<Bits>& strings) {
  std::vector<Bits> pads;
  for (std::size_t j = 0; j < ann.sets.size(); ++j) {
    const IndexSet& s = ann.sets[j];
    if (strings[j].size() != s.size()) {
      throw std::invalid_argument("ot_sender_pads: length mismatch");
    }
    Bits pad(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) pad[i] = strings[j][i] ^ x[s[i]];
    pads.push_back(std::move(pad));
  }
  return pads;
}

Bits ot_receiver_decode(const Bits& pad, const ReceivedSequence& received,
                        const IndexSet& my_set) {
  Bits out(pad.size());
  for (std::size_t i = 0; i < pad.size(); ++i) {
    const std::uint32_t idx = my_set[i];
    if (received.erased(idx)) {
      throw std::logic_error("ot_receiver_decode: index erased");
    }
    out[i] = pad[i] ^ received.bit(idx);
  }
  return out;
}

std::optional<OtResult> erasure_ot(const Bits& x,
                                   const ReceivedSequence& received,
                                   const IndexSet& resource,
                                   const std::vector<Bits>& strings, int choice,
                                   SubsetSampler& sampler, Party receiver,
                                   const char* tag_prefix,
                                   Transcript& transcript) {
  const std::uint64_t m_ddot = strings.empty() ? 0 : strings[0].size();
  auto raw = ot_choose(received, resource, static_cast<int>(strings.size()),
                       m_ddot, sampler);
  if (!raw) return std::nullopt;
  OtResult result;
  result.announcement = place_ot(*raw, choice);
  std::vector<std::uint8_t> payload;
  encode_sets(payload, result.announcement.sets);
  transcript.append(receiver, std::string(tag_prefix) + "_sets",
                    std::move(payload));
  result.pads = ot_sender_pads(x, result.announcement, strings);
  std::vector<std::uint8_t> pad_payload;
  for (const Bits& p : result.pads) encode_bits(pad_payload, p);
  transcript.append(Party::Alice, std::string(tag_prefix) + "_pads",
                    std::move(pad_payload));
  result.output = ot_receiver_decode(result.pads[choice], received,
                                     result.announcement.sets[choice]);
  return result;
}

namespace {

RunOutcome aborted(RunOutcome&& out, AbortStage stage, Party party) {
  out.completed = false;
  out.abort_stage = stage;
  out.abort_party = party;
  const std::string name = to_string(stage);
  out.transcript.append(party, "abort",
                        std::vector<std::uint8_t>(name.begin(), name.end()));
  return std::move(out);
}

}  // namespace

RunOutcome run_protocol_forced(const ProtocolParams& params,
                               const SizePlan& plan, const Database& db, int u,
                               int w, const Bits& x, const ReceivedSequence& y,
                               const ReceivedSequence& z,
                               SubsetSampler& bob_sampler,
                               SubsetSampler& cathy_sampler,
                               ProtocolVariant variant) {
  const int N = params.num_files;
  if (db.num_files() != N) {
    throw std::invalid_argument("run_protocol: database has wrong file count");
  }
  for (const Bits& f : db.files) {
    if (f.size() != plan.m_total) {
      throw std::invalid_argument(
          "run_protocol: file length differs from plan.m_total");
    }
  }
  if (u < 0 || u >= N || w < 0 || w >= N) {
    throw std::invalid_argument("run_protocol: choice out of range");
  }

  RunOutcome out;
  out.u = u;
  out.w = w;
  out.m_total = plan.m_total;
  out.views = Views{x, y, z};

  auto bob_ann = bob_select(y, u, plan, N, bob_sampler, variant);
  if (!bob_ann) {
    return aborted(std::move(out), AbortStage::BobSizeCheck, Party::Bob);
  }
  {
    std::vector<std::uint8_t> payload;
    encode_sets(payload, bob_ann->L);
    encode_set(payload, bob_ann->C);
    if (bob_ann->exposed_choice) payload.push_back(*bob_ann->exposed_choice);
    out.transcript.append(Party::Bob, "bob_sets", std::move(payload));
  }

  IndexSet l_union;
  for (const IndexSet& s : bob_ann->L) l_union = set_union(l_union, s);

  auto cathy_ann = cathy_select(z, l_union, w, plan, N, cathy_sampler);
  if (!cathy_ann) {
    return aborted(std::move(out), AbortStage::CathySizeCheck, Party::Cathy);
  }
  {
    std::vector<std::uint8_t> payload;
    encode_sets(payload, cathy_ann->Lt);
    encode_set(payload, cathy_ann->Ct);
    out.transcript.append(Party::Cathy, "cathy_sets", std::move(payload));
  }

  auto keys = alice_form_keys(x, bob_ann->L, cathy_ann->Lt, plan.m_dot);
  if (!keys) {
    return aborted(std::move(out), AbortStage::AliceIntersectionCheck,
                   Party::Alice);
  }
  CipherTexts ct = alice_encrypt(db, *keys, plan.m_dot);
  {
    std::vector<std::uint8_t> payload;
    for (const Bits& m : ct.m_list) encode_bits(payload, m);
    out.transcript.append(Party::Alice, "ciphertexts", std::move(payload));
  }

  Bits k_hat_u = receiver_decode(
      ct.m_list[u], y, set_intersect(bob_ann->L[u], cathy_ann->Lt[u]),
      plan.m_dot);
  Bits k_hat_w = receiver_decode(
      ct.m_list[w], z, set_intersect(bob_ann->L[w], cathy_ann->Lt[w]),
      plan.m_dot);

  if (plan.m_ddot > 0) {
    // High-erasure regime: deliver the file tails by embedded OT over the
    // truncated spare resources.
    std::vector<Bits> tails;
    for (const Bits& f : db.files) {
      tails.emplace_back(f.begin() + plan.m_dot, f.end());
    }
    IndexSet s_tilde = cathy_ann->Ct.prefix(plan.size_St);
    auto bob_ot = erasure_ot(x, y, s_tilde, tails, u, bob_sampler, Party::Bob,
                             "ot_bob", out.transcript);
    if (!bob_ot) {
      return aborted(std::move(out), AbortStage::BobOtSizeCheck, Party::Bob);
    }
    IndexSet s = bob_ann->C.prefix(plan.size_S);
    auto cathy_ot = erasure_ot(x, z, s, tails, w, cathy_sampler, Party::Cathy,
                               "ot_cathy", out.transcript);
    if (!cathy_ot) {
      return aborted(std::move(out), AbortStage::CathyOtSizeCheck,
                     Party::Cathy);
    }
    k_hat_u.insert(k_hat_u.end(), bob_ot->output.begin(), bob_ot->output.end());
    k_hat_w.insert(k_hat_w.end(), cathy_ot->output.begin(),
                   cathy_ot->output.end());
  }

  out.completed = true;
  out.k_hat_u = std::move(k_hat_u);
  out.k_hat_w = std::move(k_hat_w);
  out.achieved_rate = static_cast<double>(plan.m_total) / params.n;
  return out;
}

RunOutcome run_protocol(const ProtocolParams& params, const Database& db,
                        int u, int w, const RunSeeds& seeds,
                        ProtocolVariant variant) {
  SizePlan plan = size_plan(params);
  Bits x = random_bits(params.n, seeds.alice, kTagAliceBits);
  auto [y, z] = broadcast(x, {params.eps1, params.eps2, seeds.channel});
  RngSampler bob_sampler{CounterRng(seeds.bob, kTagBobSets)};
  RngSampler cathy_sampler{CounterRng(seeds.cathy, kTagCathySets)};
  return run_protocol_forced(params, plan, db, u, w, x, y, z, bob_sampler,
                             cathy_sampler, variant);
}

}  // namespace pdt
