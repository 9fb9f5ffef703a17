#pragma once

#include <cstdint>

namespace pdt {

// Counter-based keyed generator. Every random draw in the library is a pure
// function of (seed, purpose tag, counter), so a run is reproducible
// regardless of evaluation order.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t keyed_word(std::uint64_t seed, std::uint64_t tag,
                                   std::uint64_t counter) {
  std::uint64_t k = mix64(seed ^ (0x9e3779b97f4a7c15ull * (tag + 1)));
  return mix64(k ^ mix64(counter + 0x632be59bd9b4e019ull));
}

constexpr double word_to_unit(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

// Purpose tags for seed derivation.
enum PurposeTag : std::uint64_t {
  kTagErasureBob = 1,
  kTagErasureCathy = 2,
  kTagAliceBits = 3,
  kTagBobSets = 4,
  kTagCathySets = 5,
  kTagBobOt = 6,
  kTagCathyOt = 7,
  kTagDatabase = 8,
  kTagChoices = 9,
  kTagTrial = 10,
  kTagSweep = 11,
};

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t tag) : seed_(seed), tag_(tag) {}

  std::uint64_t next() { return keyed_word(seed_, tag_, counter_++); }

  double uniform01() { return word_to_unit(next()); }

  // Unbiased draw from [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t w;
    do {
      w = next();
    } while (w >= limit);
    return w % bound;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t tag_;
  std::uint64_t counter_ = 0;
};

// Derives a fresh seed for a sub-purpose, e.g. per Monte Carlo trial.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t index) {
  return keyed_word(seed, tag, index);
}

}  // namespace pdt
