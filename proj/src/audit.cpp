#include "pdt/audit.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <tuple>
#include <unordered_map>

namespace pdt {

SizePlan TinyConfig::plan() const {
  SizePlan p;
  p.size_L = size_L;
  p.size_Lt = size_Lt;
  p.size_C = size_C;
  p.size_Ct = size_Ct;
  p.size_S = size_S;
  p.size_St = size_St;
  p.m_dot = m_dot;
  p.m_ddot = m_ddot;
  p.m_total = m_dot + m_ddot;
  return p;
}

void TinyConfig::validate() const {
  if (n < 1 || n > 8) throw std::invalid_argument("TinyConfig: n must be 1..8");
  if (num_files < 2 || num_files > 3) {
    throw std::invalid_argument("TinyConfig: N must be 2 or 3");
  }
  if (!(eps1 > 0.0 && eps1 < 1.0 && eps2 > 0.0 && eps2 < 1.0)) {
    throw std::invalid_argument("TinyConfig: erasure probabilities in (0,1)");
  }
  if (size_L == 0 || size_Lt == 0) {
    throw std::invalid_argument("TinyConfig: announced sets must be nonempty");
  }
  if (static_cast<std::uint64_t>(num_files) * size_L > static_cast<std::uint64_t>(n)) {
    throw std::invalid_argument("TinyConfig: N*size_L exceeds n");
  }
  if (!include_high_erasure &&
      (size_C || size_Ct || size_S || size_St || m_ddot)) {
    throw std::invalid_argument(
        "TinyConfig: high-erasure sizes set without include_high_erasure");
  }
  if (include_high_erasure &&
      (size_S > size_C || size_St > size_Ct)) {
    throw std::invalid_argument("TinyConfig: truncated OT resource too large");
  }
  if (file_len() == 0) {
    throw std::invalid_argument("TinyConfig: file length is zero");
  }
}

namespace {

constexpr int kMaxFiles = 3;

IndexSet pattern_subset(std::uint16_t pattern, const IndexSet& domain,
                        bool erased) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i : domain) {
    const bool e = (pattern >> i) & 1u;
    if (e == erased) out.push_back(i);
  }
  return IndexSet(std::move(out));
}

double binom(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0.0;
  double r = 1.0;
  for (std::uint64_t i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
  return r;
}

// All k-subsets of `from`, lexicographic.
template <typename Fn>
void for_each_subset(const IndexSet& from, std::uint64_t k, Fn&& fn) {
  const auto& v = from.indices();
  std::vector<std::uint32_t> pick(k);
  auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == k) {
      fn(IndexSet(pick));
      return;
    }
    for (std::size_t i = start; i + (k - depth) <= v.size(); ++i) {
      pick[depth] = v[i];
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
}

// All raw receiver draws with the probability of each (uniform sequential
// stages, matching choose_sets in the protocol).
template <typename Fn>
void for_each_choice(const IndexSet& erased, const IndexSet& unerased,
                     std::uint64_t good_size, std::uint64_t bad_size,
                     int num_bad, std::uint64_t extra_size, Fn&& fn) {
  double p = 1.0 / binom(unerased.size(), good_size);
  {
    std::uint64_t rem = erased.size();
    for (int k = 0; k < num_bad; ++k) {
      p /= binom(rem, bad_size);
      rem -= bad_size;
    }
    p /= binom(rem, extra_size);
  }
  for_each_subset(unerased, good_size, [&](const IndexSet& good) {
    ReceiverChoice choice;
    choice.good = good;
    auto rec_bad = [&](auto&& self, const IndexSet& pool, int depth) -> void {
      if (depth == num_bad) {
        if (extra_size == 0) {
          choice.extra = IndexSet{};
          fn(choice, p);
        } else {
          for_each_subset(pool, extra_size, [&](const IndexSet& extra) {
            choice.extra = extra;
            fn(choice, p);
          });
        }
        return;
      }
      for_each_subset(pool, bad_size, [&](const IndexSet& bad) {
        choice.bad.push_back(bad);
        self(self, set_minus(pool, bad), depth + 1);
        choice.bad.pop_back();
      });
    };
    rec_bad(rec_bad, erased, 0);
  });
}

}  // namespace

double JointDistribution::mass() const {
  double sum = 0.0, comp = 0.0;
  for (const SetConfig& c : configs_) {
    // Kahan-compensated accumulation.
    const double yv = c.prob - comp;
    const double t = sum + yv;
    comp = (t - sum) - yv;
    sum = t;
  }
  return sum;
}

double JointDistribution::prob_bob_passes() const {
  double sum = 0.0;
  for (const SetConfig& c : configs_) {
    if (c.stage != ConfigStage::BobAbort) sum += c.prob;
  }
  return sum;
}

JointDistribution enumerate_joint(const TinyConfig& cfg) {
  cfg.validate();
  JointDistribution jd;
  jd.cfg_ = cfg;
  const int n = cfg.n;
  const int N = cfg.num_files;
  const std::uint32_t npat = 1u << n;
  const IndexSet domain = full_domain(n);
  std::uint64_t weighted = 0;
  const std::uint64_t atom_weight =
      static_cast<std::uint64_t>(N) * N * npat;  // (u, w, x) per config

  auto push = [&](SetConfig&& c) {
    weighted += atom_weight;
    if (weighted > cfg.budget) {
      throw BudgetExceeded("enumerate_joint: weighted atom budget exceeded");
    }
    jd.configs_.push_back(std::move(c));
  };

  std::vector<double> py(npat), pz(npat);
  for (std::uint32_t pat = 0; pat < npat; ++pat) {
    const int e = std::popcount(pat);
    py[pat] = std::pow(cfg.eps1, e) * std::pow(1.0 - cfg.eps1, n - e);
    pz[pat] = std::pow(cfg.eps2, e) * std::pow(1.0 - cfg.eps2, n - e);
  }

  for (std::uint32_t pat_y = 0; pat_y < npat; ++pat_y) {
    const IndexSet bob_erased = pattern_subset(pat_y, domain, true);
    const IndexSet bob_unerased = pattern_subset(pat_y, domain, false);
    const bool bob_ok =
        bob_unerased.size() >= cfg.size_L &&
        bob_erased.size() >= (N - 1) * cfg.size_L + cfg.size_C;
    if (!bob_ok) {
      for (std::uint32_t pat_z = 0; pat_z < npat; ++pat_z) {
        SetConfig c;
        c.pat_y = pat_y;
        c.pat_z = pat_z;
        c.stage = ConfigStage::BobAbort;
        c.prob = py[pat_y] * pz[pat_z];
        push(std::move(c));
      }
      continue;
    }
    for_each_choice(
        bob_erased, bob_unerased, cfg.size_L, cfg.size_L, N - 1, cfg.size_C,
        [&](const ReceiverChoice& bob, double p_bob) {
          IndexSet l_union = bob.good;
          for (const IndexSet& b : bob.bad) l_union = set_union(l_union, b);
          for (std::uint32_t pat_z = 0; pat_z < npat; ++pat_z) {
            const double base = py[pat_y] * p_bob * pz[pat_z];
            const IndexSet ce = pattern_subset(pat_z, l_union, true);
            const IndexSet cu = pattern_subset(pat_z, l_union, false);
            const bool cathy_ok =
                cu.size() >= cfg.size_Lt &&
                ce.size() >= (N - 1) * cfg.size_Lt + cfg.size_Ct;
            if (!cathy_ok) {
              SetConfig c;
              c.pat_y = pat_y;
              c.pat_z = pat_z;
              c.stage = ConfigStage::CathyAbort;
              c.bob = bob;
              c.prob = base;
              push(std::move(c));
              continue;
            }
            for_each_choice(
                ce, cu, cfg.size_Lt, cfg.size_Lt, N - 1, cfg.size_Ct,
                [&](const ReceiverChoice& cathy, double p_cathy) {
                  SetConfig c;
                  c.pat_y = pat_y;
                  c.pat_z = pat_z;
                  c.bob = bob;
                  c.cathy = cathy;
                  const double p2 = base * p_cathy;
                  if (cfg.m_ddot == 0) {
                    c.stage = ConfigStage::Complete;
                    c.prob = p2;
                    push(std::move(c));
                    return;
                  }
                  const IndexSet s_tilde = cathy.extra.prefix(cfg.size_St);
                  const IndexSet obe = pattern_subset(pat_y, s_tilde, true);
                  const IndexSet obu = pattern_subset(pat_y, s_tilde, false);
                  if (obu.size() < cfg.m_ddot ||
                      obe.size() < (N - 1) * cfg.m_ddot) {
                    c.stage = ConfigStage::BobOtAbort;
                    c.prob = p2;
                    push(std::move(c));
                    return;
                  }
                  for_each_choice(
                      obe, obu, cfg.m_ddot, cfg.m_ddot, N - 1, 0,
                      [&](const ReceiverChoice& ot_bob, double p_ob) {
                        SetConfig c2 = c;
                        c2.ot_bob = ot_bob;
                        const double p3 = p2 * p_ob;
                        const IndexSet s = c.bob.extra.prefix(cfg.size_S);
                        const IndexSet oce = pattern_subset(pat_z, s, true);
                        const IndexSet ocu = pattern_subset(pat_z, s, false);
                        if (ocu.size() < cfg.m_ddot ||
                            oce.size() < (N - 1) * cfg.m_ddot) {
                          c2.stage = ConfigStage::CathyOtAbort;
                          c2.prob = p3;
                          push(std::move(c2));
                          return;
                        }
                        for_each_choice(
                            oce, ocu, cfg.m_ddot, cfg.m_ddot, N - 1, 0,
                            [&](const ReceiverChoice& ot_cathy, double p_oc) {
                              SetConfig c3 = c2;
                              c3.ot_cathy = ot_cathy;
                              c3.stage = ConfigStage::Complete;
                              c3.prob = p3 * p_oc;
                              push(std::move(c3));
                            });
                      });
                });
          }
        });
  }
  return jd;
}

namespace {

// Effective run stage for one (config, u, w); 0 means J = 1.
enum EffStage : int {
  kJ1 = 0,
  kBobSize = 1,
  kCathySize = 2,
  kAliceInter = 3,
  kBobOt = 4,
  kCathyOt = 5,
};

struct SmallPos {
  std::uint8_t count = 0;
  std::array<std::uint8_t, 8> pos{};
};

// Everything about an atom family (one config and one (u,w) placement) that
// the streaming MI pass needs.
struct Eval {
  int stage = kBobSize;
  std::vector<IndexSet> L, Lt;
  std::array<SmallPos, kMaxFiles> t_pos;    // XOR-phase key positions
  std::array<SmallPos, kMaxFiles> otb_pos;  // Bob-side OT pad positions
  std::array<SmallPos, kMaxFiles> otc_pos;  // Cathy-side OT pad positions
  bool decode_error = false;
};

SmallPos to_small(const IndexSet& s, std::uint64_t count) {
  SmallPos p;
  p.count = static_cast<std::uint8_t>(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    p.pos[i] = static_cast<std::uint8_t>(s[i]);
  }
  return p;
}

Eval evaluate(const TinyConfig& cfg, const SetConfig& c, int u, int w) {
  Eval ev;
  if (c.stage == ConfigStage::BobAbort) {
    ev.stage = kBobSize;
    return ev;
  }
  const int N = cfg.num_files;
  ev.L = place_bob(c.bob, u, cfg.variant).L;
  if (c.stage == ConfigStage::CathyAbort) {
    ev.stage = kCathySize;
    return ev;
  }
  ev.Lt = place_cathy(c.cathy, w).Lt;
  for (int j = 0; j < N; ++j) {
    IndexSet inter = set_intersect(ev.L[j], ev.Lt[j]);
    if (inter.size() < cfg.m_dot) {
      ev.stage = kAliceInter;
      return ev;
    }
    ev.t_pos[j] = to_small(inter, cfg.m_dot);
  }
  if (cfg.m_ddot > 0) {
    if (c.stage == ConfigStage::BobOtAbort) {
      ev.stage = kBobOt;
      return ev;
    }
    auto ob = place_ot(c.ot_bob, u);
    for (int j = 0; j < N; ++j) ev.otb_pos[j] = to_small(ob.sets[j], cfg.m_ddot);
    if (c.stage == ConfigStage::CathyOtAbort) {
      ev.stage = kCathyOt;
      return ev;
    }
    auto oc = place_ot(c.ot_cathy, w);
    for (int j = 0; j < N; ++j) ev.otc_pos[j] = to_small(oc.sets[j], cfg.m_ddot);
  }
  ev.stage = kJ1;
  // On J = 1, a decode error would require an erased index inside a key set.
  auto any_erased = [](const SmallPos& p, std::uint16_t pat) {
    for (int i = 0; i < p.count; ++i) {
      if ((pat >> p.pos[i]) & 1u) return true;
    }
    return false;
  };
  ev.decode_error = any_erased(ev.t_pos[u], c.pat_y) ||
                    any_erased(ev.t_pos[w], c.pat_z);
  if (cfg.m_ddot > 0) {
    ev.decode_error = ev.decode_error || any_erased(ev.otb_pos[u], c.pat_y) ||
                      any_erased(ev.otc_pos[w], c.pat_z);
  }
  return ev;
}

struct Key {
  std::uint64_t lo = 0, hi = 0;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return static_cast<std::size_t>(mix64(k.lo ^ mix64(k.hi)));
  }
};

// Dictionary assigning stable ids to serialized announcements.
class AnnDict {
 public:
  std::uint32_t id(const std::vector<std::uint8_t>& bytes) {
    auto [it, inserted] = map_.try_emplace(bytes, next_);
    if (inserted) ++next_;
    return it->second;
  }

 private:
  std::map<std::vector<std::uint8_t>, std::uint32_t> map_;
  std::uint32_t next_ = 1;  // 0 means "absent"
};

std::uint32_t bob_ann_id(AnnDict& dict, const TinyConfig& cfg,
                         const SetConfig& c, int u) {
  BobAnnouncement ann = place_bob(c.bob, u, cfg.variant);
  std::vector<std::uint8_t> bytes;
  encode_sets(bytes, ann.L);
  encode_set(bytes, ann.C);
  if (ann.exposed_choice) bytes.push_back(*ann.exposed_choice);
  return dict.id(bytes);
}

std::uint32_t cathy_ann_id(AnnDict& dict, const SetConfig& c, int w) {
  CathyAnnouncement ann = place_cathy(c.cathy, w);
  std::vector<std::uint8_t> bytes;
  encode_sets(bytes, ann.Lt);
  encode_set(bytes, ann.Ct);
  return dict.id(bytes);
}

bool given_allows_pair(Given g, int u, int w) {
  if (g == Given::NoAbortChoicesEqual) return u == w;
  if (g == Given::NoAbortChoicesDiffer) return u != w;
  return true;
}

// Streaming accumulator turning unnormalized cell masses into entropies.
struct EntropySums {
  double t = 0.0;     // total mass
  double s_kl = 0.0;  // sum p*log2(p) over cells
  double s_k = 0.0;   // sum over right-keys
  std::vector<double> l_marg;

  static double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

  double mi() const {
    double s_l = 0.0;
    for (double p : l_marg) s_l += plogp(p);
    if (t <= 0.0) {
      throw std::invalid_argument("mutual_information: zero-mass condition");
    }
    return std::log2(t) + (s_kl - s_k - s_l) / t;
  }
};

}  // namespace

double JointDistribution::prob_no_abort() const {
  const int N = cfg_.num_files;
  double sum = 0.0;
  for (const SetConfig& c : configs_) {
    if (c.stage == ConfigStage::BobAbort || c.stage == ConfigStage::CathyAbort) {
      continue;
    }
    for (int u = 0; u < N; ++u) {
      for (int w = 0; w < N; ++w) {
        if (evaluate(cfg_, c, u, w).stage == kJ1) sum += c.prob;
      }
    }
  }
  return sum / (N * N);
}

double mutual_information(const JointDistribution& joint, std::uint32_t left,
                          std::uint32_t right, Given given) {
  const TinyConfig& cfg = joint.config();
  const int n = cfg.n;
  const int N = cfg.num_files;
  const std::uint32_t npat = 1u << n;
  const std::uint64_t m = cfg.file_len();

  if (left & (VarX | VarY | VarZ | VarBobAnnounce | VarCathyAnnounce |
              VarCiphertexts | VarAllFiles)) {
    throw std::invalid_argument("mutual_information: unsupported left side");
  }
  const std::uint32_t kleft_mask = left & (VarFilesNotU | VarFilesNotW |
                                           VarFilesNotUW);
  if (kleft_mask & (kleft_mask - 1)) {
    throw std::invalid_argument("mutual_information: one file group at most");
  }
  if ((right & VarAllFiles) && kleft_mask) {
    throw std::invalid_argument(
        "mutual_information: full database on the right with file bits on "
        "the left");
  }
  // The database is uniform and independent of every protocol action, and
  // each public message is a one-time pad under some file bits. Files on the
  // right therefore carry no information about the left side, and messages
  // padded by files outside the left set are independent noise: both drop
  // from the view.
  std::uint32_t eff_right = right & ~VarAllFiles;
  if (!kleft_mask) eff_right &= ~VarCiphertexts;

  const int nk = !kleft_mask ? 0
                 : (kleft_mask == VarFilesNotUW ? N - 2 : N - 1);
  const std::uint64_t kvals = 1ull << (nk * m);
  const std::uint64_t lsize = ((left & VarU) ? N : 1) *
                              ((left & VarW) ? N : 1) * kvals;
  if (lsize > 4096) {
    throw std::invalid_argument("mutual_information: left alphabet too large");
  }

  // Ternary channel-output codes, indexed by (x << n) | pattern.
  std::vector<std::uint16_t> code((std::size_t)npat << n);
  for (std::uint32_t x = 0; x < npat; ++x) {
    for (std::uint32_t pat = 0; pat < npat; ++pat) {
      std::uint32_t v = 0;
      for (int i = n - 1; i >= 0; --i) {
        const std::uint32_t sym = (pat >> i) & 1u ? 2u : (x >> i) & 1u;
        v = v * 3 + sym;
      }
      code[((std::size_t)x << n) | pat] = static_cast<std::uint16_t>(v);
    }
  }

  const bool any_transcript =
      eff_right & (VarBobAnnounce | VarCathyAnnounce | VarCiphertexts);
  AnnDict bob_dict, cathy_dict;

  // Partition the sweep along view components so per-partition maps stay
  // small; keys from different partitions cannot collide because every
  // partition variable also appears in the key.
  const bool part_u = eff_right & VarU, part_w = eff_right & VarW;
  const bool part_y = eff_right & VarY, part_z = eff_right & VarZ;

  const auto& configs = joint.set_configs();
  std::vector<std::uint32_t> order(configs.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  auto part_key = [&](std::uint32_t i) {
    return std::make_pair(part_y ? configs[i].pat_y : 0,
                          part_z ? configs[i].pat_z : 0);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return part_key(a) < part_key(b);
                   });

  EntropySums sums;
  sums.l_marg.assign(lsize, 0.0);
  std::unordered_map<Key, std::uint32_t, KeyHash> index;
  std::vector<double> cells;

  const double inv_uw = 1.0 / (N * N);
  const double inv_x = 1.0 / npat;
  const double inv_k = 1.0 / static_cast<double>(kvals);

  auto flush = [&]() {
    for (const auto& [key, off] : index) {
      double row = 0.0;
      for (std::uint64_t l = 0; l < lsize; ++l) {
        const double p = cells[off + l];
        if (p > 0.0) {
          row += p;
          sums.s_kl += EntropySums::plogp(p);
          sums.l_marg[l] += p;
        }
      }
      sums.s_k += EntropySums::plogp(row);
      sums.t += row;
    }
    index.clear();
    cells.clear();
  };

  int kept[kMaxFiles];

  auto process = [&](const SetConfig& c, int u, int w) {
    Eval ev = evaluate(cfg, c, u, w);
    if (given != Given::Always && ev.stage != kJ1) return;

    int nkept = 0;
    if (kleft_mask == VarFilesNotU) {
      for (int j = 0; j < N; ++j) {
        if (j != u) kept[nkept++] = j;
      }
    } else if (kleft_mask == VarFilesNotW) {
      for (int j = 0; j < N; ++j) {
        if (j != w) kept[nkept++] = j;
      }
    } else if (kleft_mask == VarFilesNotUW) {
      for (int j = 0; j < N; ++j) {
        if (j != u && j != w) kept[nkept++] = j;
      }
    }

    std::uint64_t base_li = 0;
    if (left & VarU) base_li = u;
    if (left & VarW) base_li = base_li * N + w;
    base_li *= kvals;

    const bool bob_ann_present = ev.stage != kBobSize;
    const bool cathy_ann_present =
        bob_ann_present && ev.stage != kCathySize;
    const bool xor_msgs_present =
        cathy_ann_present && ev.stage != kAliceInter;
    const bool bob_pads_present =
        cfg.m_ddot > 0 && xor_msgs_present && ev.stage != kBobOt;
    const bool cathy_pads_present = bob_pads_present && ev.stage != kCathyOt;

    std::uint64_t hi = 0;
    if (eff_right & VarBobAnnounce) {
      hi |= bob_ann_present ? bob_ann_id(bob_dict, cfg, c, u) : 0;
    }
    if (eff_right & VarCathyAnnounce) {
      hi |= static_cast<std::uint64_t>(
                cathy_ann_present ? cathy_ann_id(cathy_dict, c, w) : 0)
            << 22;
    }
    std::uint64_t lo_base = 0;
    if (eff_right & VarU) lo_base |= static_cast<std::uint64_t>(u + 1);
    if (eff_right & VarW) lo_base |= static_cast<std::uint64_t>(w + 1) << 3;
    if (any_transcript) {
      lo_base |= static_cast<std::uint64_t>(ev.stage) << 6;
    }

    const double p_atom = c.prob * inv_uw * inv_x * inv_k;

    for (std::uint32_t x = 0; x < npat; ++x) {
      std::uint64_t lo = lo_base;
      if (eff_right & VarX) lo |= static_cast<std::uint64_t>(x + 1) << 10;
      if (eff_right & VarY) {
        lo |= static_cast<std::uint64_t>(code[((std::size_t)x << n) | c.pat_y])
              << 20;
      }
      if (eff_right & VarZ) {
        lo |= static_cast<std::uint64_t>(code[((std::size_t)x << n) | c.pat_z])
              << 34;
      }
      for (std::uint64_t kbits = 0; kbits < kvals; ++kbits) {
        std::uint64_t cipher = 0;
        if ((eff_right & VarCiphertexts) && xor_msgs_present) {
          int bitpos = 0;
          for (int t = 0; t < nkept; ++t) {
            const int j = kept[t];
            const std::uint64_t kfile = (kbits >> (t * m)) & ((1ull << m) - 1);
            // XOR-phase message bits.
            for (int i = 0; i < static_cast<int>(cfg.m_dot); ++i) {
              const std::uint64_t kb = (kfile >> i) & 1u;
              const std::uint64_t tb = (x >> ev.t_pos[j].pos[i]) & 1u;
              cipher |= (kb ^ tb) << bitpos++;
            }
            // OT pads for the file tail, both executions.
            for (int i = 0; i < static_cast<int>(cfg.m_ddot); ++i) {
              const std::uint64_t kb = (kfile >> (cfg.m_dot + i)) & 1u;
              if (bob_pads_present) {
                const std::uint64_t xb = (x >> ev.otb_pos[j].pos[i]) & 1u;
                cipher |= (kb ^ xb) << bitpos;
              }
              ++bitpos;
              if (cathy_pads_present) {
                const std::uint64_t xb = (x >> ev.otc_pos[j].pos[i]) & 1u;
                cipher |= (kb ^ xb) << bitpos;
              }
              ++bitpos;
            }
          }
        }
        const Key key{lo, hi | (cipher << 44)};
        auto [it, inserted] = index.try_emplace(
            key, static_cast<std::uint32_t>(cells.size()));
        if (inserted) cells.resize(cells.size() + lsize, 0.0);
        cells[it->second + base_li + kbits] += p_atom;
      }
    }
  };

  for (int up = part_u ? 0 : -1; up < (part_u ? N : 0); ++up) {
    for (int wp = part_w ? 0 : -1; wp < (part_w ? N : 0); ++wp) {
      std::size_t i = 0;
      while (i < order.size()) {
        const auto pk = part_key(order[i]);
        std::size_t j = i;
        while (j < order.size() && part_key(order[j]) == pk) ++j;
        for (std::size_t t = i; t < j; ++t) {
          const SetConfig& c = configs[order[t]];
          for (int u = up < 0 ? 0 : up; u <= (up < 0 ? N - 1 : up); ++u) {
            for (int w = wp < 0 ? 0 : wp; w <= (wp < 0 ? N - 1 : wp); ++w) {
              if (!given_allows_pair(given, u, w)) continue;
              process(c, u, w);
            }
          }
        }
        if (part_y || part_z) flush();
        i = j;
      }
      flush();
    }
  }
  flush();
  return sums.mi();
}

double plugin_mi(const std::vector<std::tuple<int, int, double>>& atoms) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> lm, rm;
  double t = 0.0;
  for (const auto& [l, r, p] : atoms) {
    joint[{l, r}] += p;
    lm[l] += p;
    rm[r] += p;
    t += p;
  }
  if (t <= 0.0) throw std::invalid_argument("plugin_mi: zero mass");
  double mi = 0.0;
  for (const auto& [lr, p] : joint) {
    if (p <= 0.0) continue;
    mi += (p / t) * std::log2(p * t / (lm[lr.first] * rm[lr.second]));
  }
  return mi;
}

namespace {

double announcement_tv(const JointDistribution& joint, bool bob_side) {
  const TinyConfig& cfg = joint.config();
  const int N = cfg.num_files;
  AnnDict dict;
  // per choice value: announcement id -> mass with J = 1
  std::vector<std::map<std::uint32_t, double>> dist(N);
  std::vector<double> total(N, 0.0);
  for (const SetConfig& c : joint.set_configs()) {
    if (c.stage == ConfigStage::BobAbort || c.stage == ConfigStage::CathyAbort) {
      continue;
    }
    for (int u = 0; u < N; ++u) {
      for (int w = 0; w < N; ++w) {
        if (evaluate(cfg, c, u, w).stage != kJ1) continue;
        const int choice = bob_side ? u : w;
        const std::uint32_t id = bob_side ? bob_ann_id(dict, cfg, c, u)
                                          : cathy_ann_id(dict, c, w);
        dist[choice][id] += c.prob;
        total[choice] += c.prob;
      }
    }
  }
  double worst = 0.0;
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) {
      if (total[a] <= 0.0 || total[b] <= 0.0) continue;
      double tv = 0.0;
      std::map<std::uint32_t, double> merged = dist[a];
      for (const auto& [id, p] : dist[b]) merged.try_emplace(id, 0.0);
      for (const auto& [id, pa] : merged) {
        const auto itb = dist[b].find(id);
        const double qa = dist[a].count(id) ? dist[a].at(id) / total[a] : 0.0;
        const double qb = itb != dist[b].end() ? itb->second / total[b] : 0.0;
        tv += std::abs(qa - qb);
      }
      worst = std::max(worst, 0.5 * tv);
    }
  }
  return worst;
}

}  // namespace

double announcement_tv_bob(const JointDistribution& joint) {
  return announcement_tv(joint, true);
}

double announcement_tv_cathy(const JointDistribution& joint) {
  return announcement_tv(joint, false);
}

bool PrivacyReport::all_pass() const {
  for (const ConditionResult& c : conditions) {
    if (!c.pass) return false;
  }
  return true;
}

PrivacyReport privacy_report(const TinyConfig& cfg) {
  const double threshold = 1e-9;
  JointDistribution joint = enumerate_joint(cfg);
  PrivacyReport rep;
  rep.mass = joint.mass();
  rep.prob_no_abort = joint.prob_no_abort();

  // Decode-error probability given J = 1.
  {
    const int N = cfg.num_files;
    double err = 0.0, ok = 0.0;
    for (const SetConfig& c : joint.set_configs()) {
      if (c.stage == ConfigStage::BobAbort ||
          c.stage == ConfigStage::CathyAbort) {
        continue;
      }
      for (int u = 0; u < N; ++u) {
        for (int w = 0; w < N; ++w) {
          Eval ev = evaluate(cfg, c, u, w);
          if (ev.stage != kJ1) continue;
          (ev.decode_error ? err : ok) += c.prob;
        }
      }
    }
    const double p = err + ok > 0.0 ? err / (err + ok) : 0.0;
    rep.conditions.push_back({"ach_2", p, threshold, p <= threshold});
  }

  const std::uint32_t views =
      VarBobAnnounce | VarCathyAnnounce | VarCiphertexts;
  auto add = [&](const char* id, std::uint32_t l, std::uint32_t r, Given g) {
    const double v = mutual_information(joint, l, r, g);
    rep.conditions.push_back({id, v, threshold, v <= threshold});
  };
  add("ach_3", VarFilesNotU, VarU | VarW | VarY | VarZ | views,
      Given::NoAbortChoicesEqual);
  add("ach_4", VarU, VarAllFiles | VarX | VarW | VarZ | views, Given::NoAbort);
  add("ach_5", VarW, VarAllFiles | VarX | VarU | VarY | views, Given::NoAbort);
  add("ach_6", VarU | VarW, VarAllFiles | VarX | views, Given::NoAbort);
  add("ach_7", VarW | VarFilesNotU, VarU | VarY | views, Given::NoAbort);
  add("ach_8", VarU | VarFilesNotW, VarW | VarZ | views, Given::NoAbort);
  if (cfg.num_files > 2) {
    add("ach_uw", VarFilesNotUW, VarU | VarW | VarY | VarZ | views,
        Given::NoAbortChoicesDiffer);
  } else {
    // With two files and distinct choices there is nothing left to protect.
    rep.conditions.push_back({"ach_uw", 0.0, threshold, true});
  }
  return rep;
}

// --- Monte Carlo ---

namespace {

std::uint64_t structural_digest(const RunOutcome& out) {
  std::uint64_t h = 0x9ae16a3b2f90404full;
  for (const Message& msg : out.transcript.messages()) {
    h = mix64(h ^ static_cast<std::uint64_t>(msg.sender));
    for (char ch : msg.tag) h = mix64(h ^ static_cast<std::uint8_t>(ch));
    h = mix64(h ^ msg.payload.size());
  }
  if (out.abort_stage) {
    h = mix64(h ^ (0x100 + static_cast<std::uint64_t>(*out.abort_stage)));
  }
  return h;
}

RunOutcome one_trial(const ProtocolParams& params, const SizePlan& plan,
                     std::uint64_t seed, std::uint64_t trial, int forced_u,
                     ProtocolVariant variant) {
  const std::uint64_t base = derive_seed(seed, kTagTrial, trial);
  CounterRng pick(base, kTagChoices);
  const int u = forced_u >= 0
                    ? forced_u
                    : static_cast<int>(pick.below(params.num_files));
  const int w = static_cast<int>(pick.below(params.num_files));
  Database db =
      random_database(params.num_files, plan.m_total, derive_seed(base, kTagDatabase, 0));
  RunSeeds seeds{derive_seed(base, kTagErasureBob, 1),
                 derive_seed(base, kTagBobSets, 2),
                 derive_seed(base, kTagCathySets, 3),
                 derive_seed(base, kTagAliceBits, 4)};
  return run_protocol(params, db, u, w, seeds, variant);
}

}  // namespace

MonteCarloStats monte_carlo_stats(const ProtocolParams& params,
                                  std::uint64_t trials, std::uint64_t seed,
                                  bool with_transcript_tv,
                                  ProtocolVariant variant) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_stats: trials < 1");
  const SizePlan plan = size_plan(params);
  MonteCarloStats stats;
  stats.trials = trials;
  std::uint64_t aborts = 0, completed = 0, decode_errors = 0;
  double rate_sum = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t base = derive_seed(seed, kTagTrial, t);
    CounterRng pick(base, kTagChoices);
    const int u = static_cast<int>(pick.below(params.num_files));
    const int w = static_cast<int>(pick.below(params.num_files));
    Database db = random_database(params.num_files, plan.m_total,
                                  derive_seed(base, kTagDatabase, 0));
    RunSeeds seeds{derive_seed(base, kTagErasureBob, 1),
                   derive_seed(base, kTagBobSets, 2),
                   derive_seed(base, kTagCathySets, 3),
                   derive_seed(base, kTagAliceBits, 4)};
    RunOutcome out = run_protocol(params, db, u, w, seeds, variant);
    if (!out.completed) {
      ++aborts;
      continue;
    }
    ++completed;
    rate_sum += out.achieved_rate;
    if (*out.k_hat_u != db.files[u] || *out.k_hat_w != db.files[w]) {
      ++decode_errors;
    }
  }
  stats.abort_rate = static_cast<double>(aborts) / trials;
  stats.decode_error_rate =
      completed ? static_cast<double>(decode_errors) / completed : 0.0;
  stats.mean_achieved_rate = completed ? rate_sum / completed : 0.0;

  if (with_transcript_tv) {
    const int N = params.num_files;
    std::vector<std::unordered_map<std::uint64_t, double>> hist(N);
    for (int u = 0; u < N; ++u) {
      for (std::uint64_t t = 0; t < trials; ++t) {
        RunOutcome out = one_trial(params, plan,
                                   derive_seed(seed, kTagSweep, u + 1), t, u,
                                   variant);
        hist[u][structural_digest(out)] += 1.0 / trials;
      }
    }
    for (int a = 0; a < N; ++a) {
      for (int b = a + 1; b < N; ++b) {
        double tv = 0.0;
        auto merged = hist[a];
        for (const auto& [d, p] : hist[b]) merged.try_emplace(d, 0.0);
        for (const auto& [d, pa] : merged) {
          const auto it = hist[b].find(d);
          const double qb = it == hist[b].end() ? 0.0 : it->second;
          const double qa = hist[a].count(d) ? hist[a].at(d) : 0.0;
          tv += std::abs(qa - qb);
        }
        stats.transcript_tv.push_back({a, b, 0.5 * tv});
      }
    }
  }
  return stats;
}

}  // namespace pdt
