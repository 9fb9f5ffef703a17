#include "pdt/channel.hpp"

#include <numeric>
#include <stdexcept>

namespace pdt {

std::pair<ReceivedSequence, ReceivedSequence> broadcast(
    const Bits& x, const ChannelConfig& cfg) {
  if (cfg.eps1 < 0.0 || cfg.eps1 > 1.0 || cfg.eps2 < 0.0 || cfg.eps2 > 1.0) {
    throw std::invalid_argument("broadcast: erasure probability outside [0,1]");
  }
  ReceivedSequence y, z;
  y.symbols.resize(x.size());
  z.symbols.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dy = word_to_unit(keyed_word(cfg.seed, kTagErasureBob, i));
    const double dz = word_to_unit(keyed_word(cfg.seed, kTagErasureCathy, i));
    y.symbols[i] = dy < cfg.eps1 ? Symbol::Erased : static_cast<Symbol>(x[i]);
    z.symbols[i] = dz < cfg.eps2 ? Symbol::Erased : static_cast<Symbol>(x[i]);
  }
  return {std::move(y), std::move(z)};
}

std::pair<IndexSet, IndexSet> erasure_partition(const ReceivedSequence& r,
                                                const IndexSet& domain) {
  std::vector<std::uint32_t> erased, unerased;
  for (std::uint32_t i : domain) {
    if (i >= r.size()) throw std::out_of_range("erasure_partition: index");
    (r.erased(i) ? erased : unerased).push_back(i);
  }
  return {IndexSet(std::move(erased)), IndexSet(std::move(unerased))};
}

IndexSet full_domain(std::size_t n) {
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  return IndexSet(std::move(all));
}

std::string to_string(const ReceivedSequence& r) {
  std::string s;
  s.reserve(r.size());
  for (Symbol sym : r.symbols) {
    s.push_back(sym == Symbol::Erased ? 'e' : (sym == Symbol::One ? '1' : '0'));
  }
  return s;
}

std::string to_string(const Bits& b) {
  std::string s;
  s.reserve(b.size());
  for (std::uint8_t v : b) s.push_back(v ? '1' : '0');
  return s;
}

Bits random_bits(std::size_t n, std::uint64_t seed, std::uint64_t tag) {
  Bits out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint8_t>(keyed_word(seed, tag, i) & 1u);
  }
  return out;
}

}  // namespace pdt
