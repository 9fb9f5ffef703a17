#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdt/channel.hpp"
#include "pdt/indexset.hpp"

namespace pdt {

enum class Party : std::uint8_t { Alice = 0, Bob = 1, Cathy = 2 };

const char* to_string(Party p);

// One public-channel message. Every message is visible to all three parties;
// the transcript order is the emission order.
struct Message {
  Party sender;
  std::string tag;
  std::vector<std::uint8_t> payload;

  bool operator==(const Message&) const = default;
};

class Transcript {
 public:
  void append(Party sender, std::string tag, std::vector<std::uint8_t> payload) {
    messages_.push_back({sender, std::move(tag), std::move(payload)});
  }

  const std::vector<Message>& messages() const { return messages_; }

  // Hex SHA-256 of all payloads concatenated in emission order.
  std::string payload_digest() const;

  bool operator==(const Transcript&) const = default;

 private:
  std::vector<Message> messages_;
};

// Canonical wire encodings for announcement payloads.
void encode_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void encode_set(std::vector<std::uint8_t>& out, const IndexSet& s);
void encode_sets(std::vector<std::uint8_t>& out,
                 const std::vector<IndexSet>& sets);
void encode_bits(std::vector<std::uint8_t>& out, const Bits& b);

}  // namespace pdt
