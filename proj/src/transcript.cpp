#include "pdt/transcript.hpp"

#include <openssl/evp.h>

namespace pdt {

const char* to_string(Party p) {
  switch (p) {
    case Party::Alice:
      return "alice";
    case Party::Bob:
      return "bob";
    case Party::Cathy:
      return "cathy";
  }
  return "?";
}

std::string Transcript::payload_digest() const {
  std::vector<std::uint8_t> all;
  for (const Message& m : messages_) {
    all.insert(all.end(), m.payload.begin(), m.payload.end());
  }
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int out_len = 0;
  EVP_Digest(all.data(), all.size(), out, &out_len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string s;
  s.reserve(2 * out_len);
  for (unsigned int i = 0; i < out_len; ++i) {
    s.push_back(hex[out[i] >> 4]);
    s.push_back(hex[out[i] & 0xf]);
  }
  return s;
}

void encode_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void encode_set(std::vector<std::uint8_t>& out, const IndexSet& s) {
  encode_u32(out, static_cast<std::uint32_t>(s.size()));
  for (std::uint32_t i : s) encode_u32(out, i);
}

void encode_sets(std::vector<std::uint8_t>& out,
                 const std::vector<IndexSet>& sets) {
  encode_u32(out, static_cast<std::uint32_t>(sets.size()));
  for (const IndexSet& s : sets) encode_set(out, s);
}

void encode_bits(std::vector<std::uint8_t>& out, const Bits& b) {
  encode_u32(out, static_cast<std::uint32_t>(b.size()));
  for (std::uint8_t v : b) out.push_back(v);
}

}  // namespace pdt
