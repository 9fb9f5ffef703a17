#include <doctest.h>

#include "pdt/transcript.hpp"
#include "helpers.hpp"

using namespace pdt;

TEST_CASE("empty transcript digest is the empty-string hash") {
  Transcript t;
  CHECK(t.payload_digest() ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("digest covers payload bytes in order") {
  Transcript a, b;
  a.append(Party::Bob, "m", {1, 2});
  a.append(Party::Cathy, "m", {3});
  b.append(Party::Bob, "m", {1});
  b.append(Party::Cathy, "m", {2, 3});
  // Same concatenation, same digest: the digest is a payload stream hash.
  CHECK(a.payload_digest() == b.payload_digest());

  Transcript c;
  c.append(Party::Bob, "m", {1, 2});
  c.append(Party::Cathy, "m", {4});
  CHECK(a.payload_digest() != c.payload_digest());
  CHECK_FALSE(a == b);  // message boundaries still distinguish transcripts
}

TEST_CASE("canonical set encoding round-trips") {
  std::vector<std::uint8_t> buf;
  encode_sets(buf, {IndexSet{4, 1}, IndexSet{}});
  encode_set(buf, IndexSet{7});
  encode_bits(buf, {1, 0, 1});

  test::Cursor cur{&buf};
  const auto sets = cur.sets();
  REQUIRE(sets.size() == 2);
  CHECK(sets[0] == IndexSet{1, 4});
  CHECK(sets[1].empty());
  CHECK(cur.set() == IndexSet{7});
  CHECK(cur.bit_string() == Bits{1, 0, 1});
  CHECK(cur.pos == buf.size());
}

TEST_CASE("equal sets encode identically regardless of construction order") {
  std::vector<std::uint8_t> a, b;
  encode_set(a, IndexSet{3, 1, 2});
  encode_set(b, IndexSet{2, 3, 1});
  CHECK(a == b);
}
