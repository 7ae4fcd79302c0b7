#pragma once

#include <map>
#include <string>
#include <vector>

#include "igsm/config.hpp"
#include "igsm/graph.hpp"

namespace igsm {

struct Problem {
  DependencyGraph graph;
  Layout layout = Layout::pq;
  std::string statement;
  std::string question;
  std::uint64_t seed = 0;

  // Statement and question in layout order.
  std::string text() const {
    return layout == Layout::pq ? statement + " " + question : question + " " + statement;
  }
};

struct SolutionStep {
  ParamId param;
  char letter = '?';
  BinOpChain chain;
  std::string text;
};

struct SolutionScript {
  std::vector<SolutionStep> steps;
  ModValue answer;
  bool answer_sentence = true;

  static std::string answer_text(ModValue v) { return "Answer: " + std::to_string(v.value()) + "."; }

  std::string text() const {
    std::string out;
    for (const auto& s : steps) {
      if (!out.empty()) out += ' ';
      out += s.text;
    }
    if (answer_sentence) out += (out.empty() ? "" : " ") + answer_text(answer);
    return out;
  }
};

namespace detail {

inline std::string each(const DependencyGraph& g, ParamId id) { return "each " + g.at(id).name; }

inline std::string list_phrase(const DependencyGraph& g, const std::vector<ParamId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) s += i + 1 == ids.size() ? " and " : ", ";
    s += each(g, ids[i]);
  }
  return s;
}

}  // namespace detail

// "The number of each X's Y equals ...". Instance parameters only.
inline std::string render_sentence(const DependencyGraph& g, ParamId id) {
  const auto& p = g.at(id);
  const Rule& r = p.rule;
  std::string body;
  switch (r.kind) {
    case RuleKind::constant: body = std::to_string(r.k.value()); break;
    case RuleKind::copy: body = detail::each(g, r.operands[0]); break;
    case RuleKind::sum: body = "the sum of " + detail::list_phrase(g, r.operands); break;
    case RuleKind::difference:
      body = "the difference of " + detail::each(g, r.operands[0]) + " and " + detail::each(g, r.operands[1]);
      break;
    case RuleKind::aggregate: throw ConfigError("abstract parameter '" + p.name + "' has no problem sentence");
  }
  if (r.kind != RuleKind::constant) {
    if (r.modifier == Modifier::plus) body = std::to_string(r.k.value()) + " more than " + body;
    if (r.modifier == Modifier::times) body = std::to_string(r.k.value()) + " times as much as " + body;
  }
  return "The number of each " + p.name + " equals " + body + ".";
}

inline std::string render_question(const DependencyGraph& g, ParamId id) {
  return "How many " + g.target_name(id) + " does " + g.owner_name(id) + " have?";
}

inline Problem render_problem(const DependencyGraph& g, Layout layout, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5052ull));
  std::vector<ParamId> order = g.instance_parameters();
  rng.shuffle(order);
  Problem prob;
  prob.graph = g;
  prob.layout = layout;
  prob.seed = seed;
  for (auto id : order) {
    if (!prob.statement.empty()) prob.statement += ' ';
    prob.statement += render_sentence(g, id);
  }
  prob.question = render_question(g, g.query());
  return prob;
}

// "Define X as L; [I = ...; ]so L = ...."
inline std::string render_step(const std::string& name, char letter, const BinOpChain& chain) {
  std::string s = "Define " + name + " as " + std::string(1, letter) + "; ";
  for (std::size_t i = 0; i + 1 < chain.clauses.size(); ++i) s += chain.clauses[i].render() + "; ";
  s += "so " + chain.clauses.back().render() + ".";
  return s;
}

// Canonical shortest solution: the query's necessary set in a seeded
// topological order, with letters from a seeded permutation of the pool.
inline SolutionScript render_solution(const DependencyGraph& g, std::uint64_t seed, bool answer_sentence = true) {
  Rng rng(derive_seed(seed, 0x534full));
  std::string letters(kLetterPool);
  std::vector<char> pool(letters.begin(), letters.end());
  rng.shuffle(pool);
  std::size_t next_letter = 0;
  auto fresh = [&]() -> char {
    if (next_letter >= pool.size()) throw InfeasibleError("solution needs more than 52 letters");
    return pool[next_letter++];
  };

  const ParamSet need = necessary_set(g);
  ParamSet done(g.size());
  std::map<ParamId, Binding> env;
  auto lookup = [&](ParamId id) -> std::optional<Binding> {
    auto it = env.find(id);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };

  SolutionScript script;
  script.answer_sentence = answer_sentence;
  std::vector<ParamId> remaining = need.ids();
  while (!remaining.empty()) {
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (can_next(g, done, remaining[i])) ready.push_back(i);
    }
    const std::size_t pick = ready[rng.below(ready.size())];
    const ParamId id = remaining[pick];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

    SolutionStep step;
    step.param = id;
    step.letter = fresh();
    step.chain = decompose(g.at(id).rule, step.letter, lookup, fresh);
    step.text = render_step(g.at(id).name, step.letter, step.chain);
    env[id] = Binding{step.letter, step.chain.replay()};
    done.insert(id);
    script.steps.push_back(std::move(step));
  }
  script.answer = g.at(g.query()).value;
  return script;
}

}  // namespace igsm
