#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pdt/indexset.hpp"
#include "pdt/random.hpp"

namespace pdt {

using Bits = std::vector<std::uint8_t>;  // each element 0 or 1

enum class Symbol : std::uint8_t { Zero = 0, One = 1, Erased = 2 };

// Output of one erasure channel: every non-erased symbol equals the input bit.
struct ReceivedSequence {
  std::vector<Symbol> symbols;

  std::size_t size() const { return symbols.size(); }
  bool erased(std::size_t i) const { return symbols[i] == Symbol::Erased; }
  std::uint8_t bit(std::size_t i) const {
    return static_cast<std::uint8_t>(symbols[i]);
  }
};

struct ChannelConfig {
  double eps1 = 0.0;  // erasure probability on the channel to Bob
  double eps2 = 0.0;  // erasure probability on the channel to Cathy
  std::uint64_t seed = 0;
};

// One broadcast of x over the pair of independent erasure channels.
// Deterministic in (x, cfg): erasure draws are keyed by (seed, party, index).
std::pair<ReceivedSequence, ReceivedSequence> broadcast(
    const Bits& x, const ChannelConfig& cfg);

// Splits `domain` into the erased / unerased indices of r.
std::pair<IndexSet, IndexSet> erasure_partition(const ReceivedSequence& r,
                                                const IndexSet& domain);

IndexSet full_domain(std::size_t n);

// '0' / '1' / 'e' encoding used in run records.
std::string to_string(const ReceivedSequence& r);
std::string to_string(const Bits& b);

Bits random_bits(std::size_t n, std::uint64_t seed, std::uint64_t tag);

}  // namespace pdt
