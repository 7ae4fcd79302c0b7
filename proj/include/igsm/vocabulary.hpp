#pragma once

#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "igsm/core.hpp"
#include "igsm/vocabulary_data.hpp"

namespace igsm {

inline constexpr std::size_t kLayerCount = 4;

struct VocabularyLayer {
  std::string category;
  std::vector<std::string> items;
};

// One themed universe, e.g. schools → classrooms → backpacks → stationery.
struct VocabularyPack {
  std::string name;
  std::array<VocabularyLayer, kLayerCount> layers;
};

namespace detail {

// Names are words of [A-Za-z0-9] separated by single spaces; a word may end
// in "'s" (e.g. "Trader Joe's"). Anything else would not survive the
// closed-vocabulary tokenizer.
inline bool is_valid_name(const std::string& s) {
  if (s.empty() || s.front() == ' ' || s.back() == ' ') return false;
  if (s.find("  ") != std::string::npos || s.find(" as ") != std::string::npos) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isalnum(c) || c == ' ') continue;
    if (c == '\'' && i + 1 < s.size() && s[i + 1] == 's' && i > 0 && std::isalnum(static_cast<unsigned char>(s[i - 1])) &&
        (i + 2 == s.size() || s[i + 2] == ' ')) {
      ++i;
      continue;
    }
    return false;
  }
  return true;
}

}  // namespace detail

class VocabularyPacks {
 public:
  VocabularyPacks() = default;
  explicit VocabularyPacks(std::vector<VocabularyPack> packs) : packs_(std::move(packs)) { validate(); }

  static VocabularyPacks from_json(const nlohmann::json& j) {
    std::vector<VocabularyPack> packs;
    try {
      for (const auto& pj : j.at("packs")) {
        VocabularyPack p;
        p.name = pj.at("name").get<std::string>();
        const auto& layers = pj.at("layers");
        if (layers.size() != kLayerCount) {
          throw ConfigError("vocabulary pack '" + p.name + "' must have exactly 4 layers");
        }
        for (std::size_t i = 0; i < kLayerCount; ++i) {
          p.layers[i].category = layers[i].at("category").get<std::string>();
          p.layers[i].items = layers[i].at("items").get<std::vector<std::string>>();
        }
        packs.push_back(std::move(p));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed vocabulary file: ") + e.what());
    }
    return VocabularyPacks(std::move(packs));
  }

  static VocabularyPacks from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open vocabulary file '" + path + "'");
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("vocabulary file '" + path + "': " + e.what());
    }
  }

  static const VocabularyPacks& builtin() {
    static const VocabularyPacks packs = from_json(nlohmann::json::parse(detail::kBuiltinVocabularyJson));
    return packs;
  }

  const std::vector<VocabularyPack>& packs() const noexcept { return packs_; }

  const VocabularyPack& find(const std::string& name) const {
    for (const auto& p : packs_) {
      if (p.name == name) return p;
    }
    throw ConfigError("unknown vocabulary pack '" + name + "'");
  }

  // Every space-separated word used by any pack, with "'s" split off.
  std::set<std::string> words() const {
    std::set<std::string> out;
    auto add = [&](const std::string& name) {
      std::istringstream ss(name);
      std::string w;
      while (ss >> w) {
        if (w.size() > 2 && w.compare(w.size() - 2, 2, "'s") == 0) w.resize(w.size() - 2);
        out.insert(w);
      }
    };
    for (const auto& p : packs_) {
      for (const auto& l : p.layers) {
        add(l.category);
        for (const auto& item : l.items) add(item);
      }
    }
    return out;
  }

 private:
  void validate() const {
    if (packs_.empty()) throw ConfigError("vocabulary has no packs");
    for (const auto& p : packs_) {
      std::set<std::string> seen;
      auto check = [&](const std::string& n) {
        if (!detail::is_valid_name(n)) throw ConfigError("pack '" + p.name + "': invalid name '" + n + "'");
        if (!seen.insert(n).second) throw ConfigError("pack '" + p.name + "': duplicate name '" + n + "'");
      };
      for (const auto& l : p.layers) {
        check(l.category);
        for (const auto& item : l.items) check(item);
      }
    }
  }

  std::vector<VocabularyPack> packs_;
};

}  // namespace igsm
