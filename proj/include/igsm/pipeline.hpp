#pragma once

#include <string>
#include <vector>

#include "igsm/config.hpp"
#include "igsm/graph.hpp"
#include "igsm/harness.hpp"
#include "igsm/render.hpp"

namespace igsm {

struct GeneratedProblem {
  Problem problem;
  SolutionScript solution;
};

struct OpRange {
  int min = 1;
  int max = 1;
};

// "15" or "2..15".
inline OpRange parse_op_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw ConfigError("");
      return {v, v};
    }
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw ConfigError("");
    const int hi = std::stoi(b, &used);
    if (used != b.size() || lo > hi) throw ConfigError("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw ConfigError("invalid op range '" + s + "' (expected N or A..B)");
  }
}

// Tries fresh structure graphs until one admits the requested op.
inline GeneratedProblem generate_problem(const GenConfig& config, int op, Layout layout, std::uint64_t seed,
                                         bool reask_query = false) {
  config.validate();
  for (int a = 0; a < config.structure_attempts; ++a) {
    const std::uint64_t s = derive_seed(seed, 0x4750ull, static_cast<std::uint64_t>(a));
    const StructureGraph sg = sample_structure_graph(config, s);
    DependencyGraph g;
    try {
      g = sample_dependency_graph(sg, op, s, config);
    } catch (const InfeasibleError&) {
      continue;
    }
    if (reask_query) g = reask(g, seed);
    GeneratedProblem out{render_problem(g, layout, seed), render_solution(g, seed, config.answer_sentence)};
    return out;
  }
  throw InfeasibleError("no structure graph admits op=" + std::to_string(op) + " within " +
                        std::to_string(config.structure_attempts) + " attempts");
}

// n problems; problem i uses derive_seed(seed, i) and an op drawn uniformly
// from `ops`.
inline std::vector<GeneratedProblem> generate_set(const GenConfig& config, OpRange ops, Layout layout, std::size_t n,
                                                  std::uint64_t seed, bool reask_query = false, unsigned threads = 0) {
  std::vector<GeneratedProblem> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, i);
    Rng rng(derive_seed(s, 0x4f50ull));
    const int op = rng.between(ops.min, ops.max);
    out[i] = generate_problem(config, op, layout, s, reask_query);
  });
  return out;
}

inline std::vector<Problem> problems_of(const std::vector<GeneratedProblem>& set) {
  std::vector<Problem> out;
  out.reserve(set.size());
  for (const auto& g : set) out.push_back(g.problem);
  return out;
}

}  // namespace igsm
