#include <set>

#include "doctest.h"
#include "linklab/corpus.hpp"
#include "linklab/pseudonym.hpp"

using namespace linklab;
using pseudonym::MacKey;

TEST_CASE("HMAC-SHA-256 matches RFC 4231 test vectors") {
  // Test case 1
  MacKey k1;
  k1.bytes.assign(20, 0x0b);
  k1.entropy_bits = 160;
  CHECK(pseudonym::tag("Hi There", k1) ==
        "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
  // Test case 2
  MacKey k2;
  k2.bytes = {'J', 'e', 'f', 'e'};
  CHECK(pseudonym::tag("what do ya want for nothing?", k2) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
  // Test case 3
  MacKey k3;
  k3.bytes.assign(20, 0xaa);
  CHECK(pseudonym::tag(std::string(50, static_cast<char>(0xdd)), k3) ==
        "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe");
}

TEST_CASE("tag is deterministic and key-dependent") {
  auto k1 = pseudonym::generate_key(256);
  auto k2 = pseudonym::generate_key(256);
  CHECK(pseudonym::tag("SMITH", k1) == pseudonym::tag("SMITH", k1));
  if (pseudonym::tag("SMITH", k1) == pseudonym::tag("SMITH", k2)) {
    MESSAGE("tag collision across independent 256-bit keys");  // flag only
  } else {
    CHECK(pseudonym::tag("SMITH", k1) != pseudonym::tag("SMITH", k2));
  }
  CHECK(pseudonym::tag("SMITH", k1).size() == 64);
}

TEST_CASE("generate_key randomness and demo-mode determinism") {
  auto a = pseudonym::generate_key(256);
  auto b = pseudonym::generate_key(256);
  CHECK(a.bytes.size() == 32);
  CHECK(a.bytes != b.bytes);

  // Demo keys: one of exactly 2^8 values, reproducible, seed reduced mod 256.
  auto d1 = pseudonym::generate_key(8, 3);
  auto d2 = pseudonym::generate_key(8, 3);
  auto d3 = pseudonym::generate_key(8, 3 + 256);
  CHECK(d1.bytes == d2.bytes);
  CHECK(d1.bytes == d3.bytes);
  std::set<std::string> distinct;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    distinct.insert(pseudonym::generate_key(8, s).hex());
  }
  CHECK(distinct.size() == 256);

  CHECK_THROWS_AS(static_cast<void>(pseudonym::generate_key(300)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(pseudonym::generate_key(-1)), std::invalid_argument);
}

TEST_CASE("key hex round trip") {
  auto key = pseudonym::generate_key(256);
  auto back = MacKey::from_hex(key.hex());
  CHECK(back.bytes == key.bytes);
}

TEST_CASE("tag_corpus builds exact inverse maps") {
  std::vector<std::string> raw;
  for (int i = 0; i < 1000; ++i) raw.push_back("NAME" + std::to_string(i));
  corpus::NameList list(std::move(raw));
  auto key = pseudonym::generate_key(256, 11);
  auto map = pseudonym::tag_corpus(list, key);
  CHECK(map.forward.size() == 1000);
  CHECK(map.reverse.size() == 1000);
  for (const auto& name : list) {
    CHECK(map.reverse.at(map.forward.at(name)) == name);
  }
}

TEST_CASE("tag_corpus rejects an empty list") {
  CHECK_THROWS_AS(static_cast<void>(pseudonym::tag_corpus(corpus::NameList{}, pseudonym::generate_key(128))),
                  std::invalid_argument);
}

TEST_CASE("dictionary attack recovers unkeyed hashes completely") {
  std::vector<std::string> raw;
  for (int i = 0; i < 10; ++i) raw.push_back("WORD" + std::to_string(i));
  corpus::NameList dict(std::move(raw));
  std::unordered_set<std::string> tags;
  for (const auto& name : dict) tags.insert(pseudonym::tag_unkeyed(name));

  auto recovered = pseudonym::dictionary_attack(tags, dict);
  CHECK(recovered.size() == 10);
  for (const auto& [t, name] : recovered) CHECK(pseudonym::tag_unkeyed(name) == t);
}

TEST_CASE("dictionary attack with an empty dictionary recovers nothing") {
  std::unordered_set<std::string> tags{pseudonym::tag_unkeyed("SMITH")};
  CHECK(pseudonym::dictionary_attack(tags, corpus::NameList{}).empty());
}

TEST_CASE("low-entropy keys collapse to hash-level security") {
  std::vector<std::string> raw;
  for (int i = 0; i < 50; ++i) raw.push_back("WORD" + std::to_string(i));
  corpus::NameList dict(std::move(raw));

  // 8-bit demo key: exhaustive key enumeration recovers everything.
  auto weak = pseudonym::generate_key(8, 77);
  std::unordered_set<std::string> tags;
  for (const auto& name : dict) tags.insert(pseudonym::tag(name, weak));
  auto keys = pseudonym::enumerate_demo_keys(8);
  CHECK(keys.size() == 256);
  auto recovered = pseudonym::dictionary_attack(tags, dict, keys);
  CHECK(recovered.size() == dict.size());

  // Full-entropy key, no key space: nothing comes back.
  auto strong = pseudonym::generate_key(256);
  std::unordered_set<std::string> strong_tags;
  for (const auto& name : dict) strong_tags.insert(pseudonym::tag(name, strong));
  CHECK(pseudonym::dictionary_attack(strong_tags, dict).empty());
  CHECK(pseudonym::dictionary_attack(strong_tags, dict, keys).empty());
}
