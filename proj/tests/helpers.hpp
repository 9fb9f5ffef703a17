#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdt/channel.hpp"
#include "pdt/indexset.hpp"
#include "pdt/transcript.hpp"

namespace pdt::test {

inline Bits bits(const std::string& s) {
  Bits out;
  for (char c : s) out.push_back(c == '1' ? 1 : 0);
  return out;
}

inline ReceivedSequence seq(const std::string& s) {
  ReceivedSequence r;
  for (char c : s) {
    r.symbols.push_back(c == 'e' ? Symbol::Erased
                                 : (c == '1' ? Symbol::One : Symbol::Zero));
  }
  return r;
}

// Decoders for the canonical announcement payload encodings.
struct Cursor {
  const std::vector<std::uint8_t>* data;
  std::size_t pos = 0;

  std::uint32_t u32() {
    const auto& d = *data;
    std::uint32_t v = d[pos] | (d[pos + 1] << 8) | (d[pos + 2] << 16) |
                      (static_cast<std::uint32_t>(d[pos + 3]) << 24);
    pos += 4;
    return v;
  }

  IndexSet set() {
    const std::uint32_t k = u32();
    std::vector<std::uint32_t> v(k);
    for (std::uint32_t i = 0; i < k; ++i) v[i] = u32();
    return IndexSet(std::move(v));
  }

  std::vector<IndexSet> sets() {
    const std::uint32_t k = u32();
    std::vector<IndexSet> out;
    for (std::uint32_t i = 0; i < k; ++i) out.push_back(set());
    return out;
  }

  Bits bit_string() {
    const std::uint32_t k = u32();
    Bits out((*data).begin() + pos, (*data).begin() + pos + k);
    pos += k;
    return out;
  }
};

// A sampler that returns the lowest k indices; deterministic stand-in for
// forced executions.
struct FirstKSampler final : SubsetSampler {
  IndexSet pick(const IndexSet& from, std::size_t k) override {
    return from.prefix(k);
  }
};

// Replays a fixed list of picks in order.
struct ScriptedSampler final : SubsetSampler {
  std::vector<IndexSet> script;
  std::size_t next = 0;

  IndexSet pick(const IndexSet& from, std::size_t k) override {
    if (next >= script.size()) throw std::logic_error("script exhausted");
    const IndexSet& s = script[next++];
    if (s.size() != k || !is_subset(s, from)) {
      throw std::logic_error("scripted pick not available");
    }
    return s;
  }
};

}  // namespace pdt::test
