#include "linklab/pseudonym.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <sstream>
#include <stdexcept>

#include "linklab/io.hpp"

namespace linklab::pseudonym {

std::string MacKey::hex() const { return io::to_hex(bytes.data(), bytes.size()); }

MacKey MacKey::from_hex(const std::string& hex, int entropy_bits) {
  MacKey key;
  key.bytes = io::from_hex(hex);
  key.entropy_bits = entropy_bits;
  if (key.bytes.empty()) throw std::invalid_argument("empty key");
  return key;
}

static std::array<unsigned char, 32> sha256(const unsigned char* data, std::size_t len) {
  std::array<unsigned char, 32> digest{};
  unsigned int out_len = 0;
  if (!EVP_Digest(data, len, digest.data(), &out_len, EVP_sha256(), nullptr) || out_len != 32) {
    throw std::runtime_error("SHA-256 failure");
  }
  return digest;
}

MacKey generate_key(int entropy_bits, std::optional<std::uint64_t> seed) {
  if (entropy_bits < 0 || entropy_bits > 256) {
    throw std::invalid_argument("entropy_bits must be in [0, 256]");
  }
  MacKey key;
  key.entropy_bits = entropy_bits;
  if (!seed) {
    key.bytes.resize(32);
    if (RAND_bytes(key.bytes.data(), static_cast<int>(key.bytes.size())) != 1) {
      throw std::runtime_error("CSPRNG failure");
    }
    return key;
  }
  // Demo mode: reduce the seed into the declared key space, then stretch.
  std::uint64_t reduced = *seed;
  if (entropy_bits == 0) {
    reduced = 0;
  } else if (entropy_bits < 64) {
    reduced &= (std::uint64_t{1} << entropy_bits) - 1;
  }
  unsigned char material[12];
  for (int i = 0; i < 8; ++i) material[i] = static_cast<unsigned char>(reduced >> (8 * i));
  auto bits = static_cast<std::uint32_t>(entropy_bits);
  for (int i = 0; i < 4; ++i) material[8 + i] = static_cast<unsigned char>(bits >> (8 * i));
  auto digest = sha256(material, sizeof(material));
  key.bytes.assign(digest.begin(), digest.end());
  return key;
}

std::vector<MacKey> enumerate_demo_keys(int entropy_bits) {
  if (entropy_bits < 0 || entropy_bits > 20) {
    throw std::invalid_argument("demo key enumeration supports entropy_bits in [0, 20]");
  }
  std::uint64_t count = std::uint64_t{1} << entropy_bits;
  std::vector<MacKey> keys;
  keys.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    keys.push_back(generate_key(entropy_bits, s));
  }
  return keys;
}

std::string tag(const std::string& name, const MacKey& key) {
  if (key.bytes.empty()) throw std::invalid_argument("empty MAC key");
  unsigned char mac[EVP_MAX_MD_SIZE];
  unsigned int mac_len = 0;
  if (!HMAC(EVP_sha256(), key.bytes.data(), static_cast<int>(key.bytes.size()),
            reinterpret_cast<const unsigned char*>(name.data()), name.size(), mac, &mac_len)) {
    throw std::runtime_error("HMAC failure");
  }
  return io::to_hex(mac, mac_len);
}

std::string tag_unkeyed(const std::string& name) {
  auto digest = sha256(reinterpret_cast<const unsigned char*>(name.data()), name.size());
  return io::to_hex(digest.data(), digest.size());
}

TagMap tag_corpus(const corpus::NameList& list, const MacKey& key) {
  if (list.empty()) throw std::invalid_argument("empty name list");
  TagMap map;
  map.forward.reserve(list.size());
  map.reverse.reserve(list.size());
  for (const auto& name : list) {
    std::string t = tag(name, key);
    auto [it, inserted] = map.reverse.emplace(t, name);
    if (!inserted) {
      throw std::runtime_error("tag collision between '" + it->second + "' and '" + name + "'");
    }
    map.forward.emplace(name, std::move(t));
  }
  return map;
}

void save_tagmap(const TagMap& map, const std::filesystem::path& path) {
  // Ground-truth file: evaluation only.
  std::vector<std::string> names;
  names.reserve(map.forward.size());
  for (const auto& [name, _] : map.forward) names.push_back(name);
  std::sort(names.begin(), names.end());
  std::ostringstream out;
  out << "name,tag\n";
  for (const auto& name : names) out << name << ',' << map.forward.at(name) << '\n';
  io::write_file(path, out.str());
}

TagMap load_tagmap(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  TagMap map;
  bool first = true;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    auto fields = io::split_csv_line(line);
    if (first && fields.size() == 2 && fields[1] == "tag") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2) throw std::runtime_error("malformed tagmap row: " + line);
    map.forward[fields[0]] = fields[1];
    auto [it, inserted] = map.reverse.emplace(fields[1], fields[0]);
    if (!inserted) throw std::runtime_error("duplicate tag in tagmap: " + fields[1]);
  }
  return map;
}

std::unordered_map<std::string, std::string> dictionary_attack(
    const std::unordered_set<std::string>& tags, const corpus::NameList& dictionary,
    const std::optional<std::vector<MacKey>>& key_space) {
  std::unordered_map<std::string, std::string> recovered;
  if (tags.empty() || dictionary.empty()) return recovered;

  auto try_candidate = [&](const std::string& candidate_tag, const std::string& name) {
    if (tags.count(candidate_tag)) recovered.emplace(candidate_tag, name);
  };

  if (!key_space) {
    for (const auto& name : dictionary) {
      try_candidate(tag_unkeyed(name), name);
      if (recovered.size() == tags.size()) break;
    }
    return recovered;
  }
  for (const auto& key : *key_space) {
    for (const auto& name : dictionary) {
      try_candidate(tag(name, key), name);
    }
    if (recovered.size() == tags.size()) break;
  }
  return recovered;
}

}  // namespace linklab::pseudonym
