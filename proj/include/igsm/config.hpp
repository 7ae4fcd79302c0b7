#pragma once

#include <array>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "igsm/core.hpp"
#include "igsm/vocabulary.hpp"

namespace igsm {

enum class Layout { pq, qp };

inline std::string to_string(Layout l) { return l == Layout::pq ? "pq" : "qp"; }
inline Layout layout_from_string(const std::string& s) {
  if (s == "pq") return Layout::pq;
  if (s == "qp") return Layout::qp;
  throw ConfigError("unknown layout '" + s + "' (expected pq or qp)");
}

struct ItemRange {
  int min = 2;
  int max = 4;
};

struct RuleWeights {
  double constant = 0.16;
  double copy = 0.2;
  double sum = 0.44;
  double difference = 0.2;
};

// Generation knobs. Everything sampled from a GenConfig is a pure function
// of (config, seed).
struct GenConfig {
  std::string preset = "med";
  int layers = static_cast<int>(kLayerCount);
  std::array<ItemRange, kLayerCount> items_per_layer{};
  double edge_probability = 0.5;
  RuleWeights rule_weights{};
  double modifier_probability = 0.3;  // chance a copy/sum/difference gets "k more than"/"k times as much as"
  double plus_weight = 0.6;
  double times_weight = 0.4;
  std::vector<double> sum_arity_weights{0.75, 0.25};  // arity 2, 3, ...
  int attempt_budget = 10000;
  int structure_attempts = 64;  // fresh structure graphs tried by the problem generator
  std::vector<std::string> vocabulary_packs;  // empty: all packs
  VocabularyPacks vocabulary = VocabularyPacks::builtin();
  int train_op_min = 2;
  int train_op_max = 15;
  std::vector<int> eval_ops{20, 21, 22, 23};
  int train_context_len = 768;
  int eval_context_len = 2048;
  bool answer_sentence = true;

  void validate() const {
    if (layers != static_cast<int>(kLayerCount)) throw ConfigError("layers must be 4, got " + std::to_string(layers));
    for (std::size_t i = 0; i < kLayerCount; ++i) {
      const auto& r = items_per_layer[i];
      if (r.min < 1 || r.max < 1) {
        throw ConfigError("layer " + std::to_string(i) + " requests " + std::to_string(std::min(r.min, r.max)) +
                          " items; at least 1 is required");
      }
      if (r.min > r.max) throw ConfigError("layer " + std::to_string(i) + ": items min exceeds max");
    }
    if (!(edge_probability > 0.0 && edge_probability <= 1.0)) throw ConfigError("edge_probability must be in (0, 1]");
    const auto& w = rule_weights;
    if (w.constant < 0 || w.copy < 0 || w.sum < 0 || w.difference < 0 || w.constant + w.copy + w.sum + w.difference <= 0) {
      throw ConfigError("rule_weights must be non-negative with a positive total");
    }
    if (modifier_probability < 0 || modifier_probability > 1) throw ConfigError("modifier probability must be in [0, 1]");
    if (plus_weight < 0 || times_weight < 0 || plus_weight + times_weight <= 0) {
      throw ConfigError("modifier weights must be non-negative with a positive total");
    }
    if (sum_arity_weights.empty()) throw ConfigError("sum_arity_weights must not be empty");
    double total = 0;
    for (double a : sum_arity_weights) {
      if (a < 0) throw ConfigError("sum_arity_weights must be non-negative");
      total += a;
    }
    if (total <= 0) throw ConfigError("sum_arity_weights must have a positive total");
    if (attempt_budget < 1) throw ConfigError("attempt_budget must be positive");
    if (structure_attempts < 1) throw ConfigError("structure_attempts must be positive");
    for (const auto& p : vocabulary_packs) vocabulary.find(p);
  }

  std::vector<const VocabularyPack*> selected_packs() const {
    std::vector<const VocabularyPack*> out;
    if (vocabulary_packs.empty()) {
      for (const auto& p : vocabulary.packs()) out.push_back(&p);
    } else {
      for (const auto& n : vocabulary_packs) out.push_back(&vocabulary.find(n));
    }
    return out;
  }
};

inline GenConfig preset_config(const std::string& name) {
  GenConfig c;
  c.preset = name;
  if (name == "med") {
    c.items_per_layer.fill(ItemRange{2, 4});
    c.train_op_min = 2;
    c.train_op_max = 15;
    c.eval_ops = {20, 21, 22, 23};
    c.train_context_len = 768;
  } else if (name == "hard") {
    c.items_per_layer.fill(ItemRange{3, 5});
    c.edge_probability = 0.55;
    c.train_op_min = 2;
    c.train_op_max = 21;
    c.eval_ops = {28, 29, 30, 31, 32};
    c.train_context_len = 1024;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected med or hard)");
  }
  return c;
}

// Reads a declarative JSON config. Keys:
//   preset, layers, items_per_layer ({"min","max"} or four of them),
//   edge_probability, rule_weights {constant, copy, sum, difference},
//   modifier {probability, plus, times}, sum_arity_weights [w2, w3, ...],
//   attempt_budget, structure_attempts, vocabulary_packs [names],
//   vocabulary_file, answer_sentence.
inline GenConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"preset",           "layers",          "items_per_layer", "edge_probability",
                                           "rule_weights",     "modifier",        "sum_arity_weights",
                                           "attempt_budget",   "structure_attempts", "vocabulary_packs",
                                           "vocabulary_file",  "answer_sentence"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    GenConfig c = preset_config(j.value("preset", std::string("med")));
    if (j.contains("layers")) c.layers = j["layers"].get<int>();
    if (j.contains("items_per_layer")) {
      const auto& ipl = j["items_per_layer"];
      auto read = [](const nlohmann::json& r) { return ItemRange{r.at("min").get<int>(), r.at("max").get<int>()}; };
      if (ipl.is_array()) {
        if (ipl.size() != kLayerCount) throw ConfigError("items_per_layer must list 4 layers");
        for (std::size_t i = 0; i < kLayerCount; ++i) c.items_per_layer[i] = read(ipl[i]);
      } else {
        c.items_per_layer.fill(read(ipl));
      }
    }
    c.edge_probability = j.value("edge_probability", c.edge_probability);
    if (j.contains("rule_weights")) {
      const auto& w = j["rule_weights"];
      c.rule_weights.constant = w.value("constant", c.rule_weights.constant);
      c.rule_weights.copy = w.value("copy", c.rule_weights.copy);
      c.rule_weights.sum = w.value("sum", c.rule_weights.sum);
      c.rule_weights.difference = w.value("difference", c.rule_weights.difference);
    }
    if (j.contains("modifier")) {
      const auto& m = j["modifier"];
      c.modifier_probability = m.value("probability", c.modifier_probability);
      c.plus_weight = m.value("plus", c.plus_weight);
      c.times_weight = m.value("times", c.times_weight);
    }
    if (j.contains("sum_arity_weights")) c.sum_arity_weights = j["sum_arity_weights"].get<std::vector<double>>();
    c.attempt_budget = j.value("attempt_budget", c.attempt_budget);
    c.structure_attempts = j.value("structure_attempts", c.structure_attempts);
    if (j.contains("vocabulary_file")) c.vocabulary = VocabularyPacks::from_file(j["vocabulary_file"].get<std::string>());
    if (j.contains("vocabulary_packs")) c.vocabulary_packs = j["vocabulary_packs"].get<std::vector<std::string>>();
    c.answer_sentence = j.value("answer_sentence", c.answer_sentence);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

inline GenConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace igsm
