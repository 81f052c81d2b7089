#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "linklab/corpus.hpp"

namespace linklab::pseudonym {

// MAC key plus its declared entropy. Keys made without a seed come from a
// CSPRNG; keys made with a seed ("demo mode") are drawn from a space of
// exactly 2^entropy_bits values so the key space can be enumerated in tests
// and dictionary-attack demos.
struct MacKey {
  std::vector<unsigned char> bytes;
  int entropy_bits = 0;

  std::string hex() const;
  static MacKey from_hex(const std::string& hex, int entropy_bits = 256);
};

// entropy_bits in [0, 256]. Without a seed the key is 32 random octets
// (entropy >= entropy_bits). With a seed the key is SHA-256 over the seed
// reduced mod 2^entropy_bits, so two seeds congruent mod 2^entropy_bits
// produce the same key. Demo-mode entropy above 64 bits is capped by the
// 64-bit seed itself.
MacKey generate_key(int entropy_bits, std::optional<std::uint64_t> seed = std::nullopt);

// All 2^entropy_bits demo keys. entropy_bits <= 20 to keep this desk-scale.
std::vector<MacKey> enumerate_demo_keys(int entropy_bits);

// HMAC-SHA-256 over the UTF-8 bytes of the normalized name, lowercase hex.
std::string tag(const std::string& name, const MacKey& key);

// Plain SHA-256 tag (no key). Exists only to demonstrate the dictionary
// attack against unkeyed hashing.
std::string tag_unkeyed(const std::string& name);

// Forward/reverse name<->tag maps. The reverse map is ground truth for
// attack evaluation only; real attacks never read it.
struct TagMap {
  std::unordered_map<std::string, std::string> forward;  // name -> tag
  std::unordered_map<std::string, std::string> reverse;  // tag -> name
};

// Tags every name in the list. A tag collision is a hard error.
TagMap tag_corpus(const corpus::NameList& list, const MacKey& key);

// TagMap ground-truth CSV: `name,tag`.
void save_tagmap(const TagMap& map, const std::filesystem::path& path);
TagMap load_tagmap(const std::filesystem::path& path);

// For each candidate key (or plain SHA-256 when key_space is absent), tags
// every dictionary word and collects the matches. Stops as soon as every
// input tag is recovered. An empty result is a valid outcome.
std::unordered_map<std::string, std::string> dictionary_attack(
    const std::unordered_set<std::string>& tags,
    const corpus::NameList& dictionary,
    const std::optional<std::vector<MacKey>>& key_space = std::nullopt);

}  // namespace linklab::pseudonym
