#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "igsm/corpus.hpp"
#include "igsm/render.hpp"
#include "igsm/verify.hpp"

namespace igsm {

//---------------------------------------------------------------------------
// Policies
//---------------------------------------------------------------------------

struct Candidate {
  std::string text;  // one sentence, including its final period
  double score = 0;  // log-score
  bool terminal = false;
};

// Sentences generated so far.
struct DecodeState {
  std::vector<std::string> sentences;

  std::string text() const {
    std::string out;
    for (const auto& s : sentences) {
      if (!out.empty()) out += ' ';
      out += s;
    }
    return out;
  }
};

// Proposes scored next sentences. Implementations must be safe to call
// concurrently from several threads.
class DecodePolicy {
 public:
  virtual ~DecodePolicy() = default;
  virtual std::vector<Candidate> propose(const Problem& prob, const DecodeState& state) const = 0;
};

namespace detail {

// Parameters the prefix defines, with their letters and stated values.
struct PrefixView {
  ParamSet defined;
  std::map<ParamId, Binding> env;
  std::set<char> used;
  std::vector<ParamId> order;
};

inline PrefixView view_prefix(const Problem& prob, const DecodeState& state) {
  PrefixView v{ParamSet(prob.graph.size()), {}, {}, {}};
  if (state.sentences.empty()) return v;
  const ParsedSolution ps = parse_solution(state.text());
  for (const auto& it : ps.items) {
    const auto* st = std::get_if<ParsedStep>(&it);
    if (!st) continue;
    for (const auto& c : st->clauses) v.used.insert(c.target);
    const auto id = prob.graph.find(st->name);
    if (!id) continue;
    v.defined.insert(*id);
    v.env[*id] = Binding{st->letter, ModValue(st->clauses.back().result)};
    v.order.push_back(*id);
  }
  return v;
}

}  // namespace detail

// Stand-in for a trained model. In a "confused" state (probability q, drawn
// per prefix) one parameter that cannot be computed next takes 0.6 of the
// mass and the ready necessary parameters share the rest; otherwise the
// ready necessary parameters share all of it.
class SyntheticOraclePolicy : public DecodePolicy {
 public:
  SyntheticOraclePolicy(double error_prob, std::uint64_t seed) : q_(error_prob), seed_(seed) {
    if (!(q_ >= 0 && q_ < 1)) throw ConfigError("policy error rate must be in [0, 1)");
  }

  double error_prob() const noexcept { return q_; }

  std::vector<Candidate> propose(const Problem& prob, const DecodeState& state) const override {
    const DependencyGraph& g = prob.graph;
    const auto view = detail::view_prefix(prob, state);
    if (view.defined.contains(g.query())) {
      const ModValue v = view.env.at(g.query()).value;
      return {Candidate{SolutionScript::answer_text(v), 0.0, true}};
    }

    std::uint64_t h = derive_seed(seed_, prob.seed);
    for (auto id : view.order) h = splitmix64(h ^ id.index);
    Rng rng(h);

    // Fresh letters in a per-problem order.
    std::vector<char> letters(kLetterPool.begin(), kLetterPool.end());
    Rng lr(derive_seed(seed_, prob.seed, 0x4c45ull));
    lr.shuffle(letters);
    std::size_t li = 0;
    auto fresh = [&]() -> char {
      while (li < letters.size() && view.used.count(letters[li])) ++li;
      if (li >= letters.size()) throw InfeasibleError("policy ran out of letters");
      return letters[li++];
    };
    auto env = [&](ParamId id) -> std::optional<Binding> {
      auto it = view.env.find(id);
      if (it == view.env.end()) return std::nullopt;
      return it->second;
    };

    const ParamSet need = necessary_set(g);
    std::vector<ParamId> ready, wrong;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
      const ParamId id{i};
      if (view.defined.contains(id)) continue;
      if (can_next(g, view.defined, id)) {
        if (need.contains(id)) ready.push_back(id);
      } else {
        wrong.push_back(id);
      }
    }

    std::vector<Candidate> out;
    const bool confused = !wrong.empty() && rng.bernoulli(q_);
    const double share = (confused ? 0.4 : 1.0) / static_cast<double>(ready.size());
    for (auto id : ready) {
      li = 0;
      const char letter = fresh();
      const BinOpChain chain = decompose(g.at(id).rule, letter, env, fresh);
      out.push_back(Candidate{render_step(g.at(id).name, letter, chain), std::log(share), false});
    }
    if (confused) {
      const ParamId w = rng.pick(wrong);
      li = 0;
      const char letter = fresh();
      BinOpChain chain;
      chain.clauses.push_back(Clause{letter, Operand::literal(g.at(w).value), std::nullopt, {}, g.at(w).value});
      out.insert(out.begin(), Candidate{render_step(g.at(w).name, letter, chain), std::log(0.6), false});
    }
    return out;
  }

 private:
  double q_;
  std::uint64_t seed_;
};

//---------------------------------------------------------------------------
// Detectors
//---------------------------------------------------------------------------

// Reports the ground-truth can_next verdict of a sentence with probability
// `accuracy`, the opposite otherwise.
class ErrorDetector {
 public:
  explicit ErrorDetector(double accuracy) : a_(accuracy) {
    if (!(a_ >= 0 && a_ <= 1)) throw ConfigError("detector accuracy must be in [0, 1]");
  }

  static ErrorDetector preset(const std::string& name) {
    if (name == "version1" || name == "version2") return ErrorDetector(0.99);
    if (name == "versionP" || name == "versionP50") return ErrorDetector(1.0);
    throw ConfigError("unknown detector preset '" + name + "'");
  }

  double accuracy() const noexcept { return a_; }

  // Ground truth: the sentence defines a parameter that is not computable
  // after `state`.
  static bool is_error(const Problem& prob, const DecodeState& state, const std::string& sentence) {
    if (sentence.rfind("Define ", 0) != 0) return false;
    const std::size_t as = sentence.find(" as ");
    const auto id = prob.graph.find(std::string_view(sentence).substr(7, as - 7));
    if (!id) return true;
    return !can_next(prob.graph, detail::view_prefix(prob, state).defined, *id);
  }

  bool flags(const Problem& prob, const DecodeState& state, const std::string& sentence, Rng& rng) const {
    if (sentence.rfind("Define ", 0) != 0) return false;
    const bool truth = is_error(prob, state, sentence);
    return rng.bernoulli(a_) ? truth : !truth;
  }

 private:
  double a_;
};

//---------------------------------------------------------------------------
// Decoding
//---------------------------------------------------------------------------

enum class DecodeMode { greedy, multinomial, beam, retry_upon_regret };

inline DecodeMode decode_mode_from_string(const std::string& s) {
  if (s == "greedy") return DecodeMode::greedy;
  if (s == "multinomial") return DecodeMode::multinomial;
  if (s == "beam") return DecodeMode::beam;
  if (s == "retry" || s == "retry_upon_regret") return DecodeMode::retry_upon_regret;
  throw ConfigError("unknown decode mode '" + s + "'");
}

struct DecodeConfig {
  DecodeMode mode = DecodeMode::greedy;
  int beam = 4;
  int max_retries = 10;
  bool per_sentence_retries = false;  // budget resets for every sentence
  std::size_t max_tokens = 2048;      // prompt plus solution

  static DecodeConfig preset(const std::string& detector) {
    DecodeConfig c;
    c.mode = DecodeMode::retry_upon_regret;
    c.max_retries = detector == "versionP50" ? 50 : 10;
    return c;
  }

  void validate() const {
    if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
    if (mode == DecodeMode::beam && beam < 1) throw ConfigError("beam width must be at least 1");
    if (max_tokens == 0) throw ConfigError("max_tokens must be positive");
  }
};

struct RetryEvent {
  std::size_t sentence = 0;  // index of the sentence being generated
  std::string rejected;
};

struct DecodeResult {
  std::string text;
  double score = 0;  // cumulative log-score of the kept sentences
  bool truncated = false;
  std::vector<RetryEvent> retries;
};

namespace detail {

inline std::size_t first_max(const std::vector<Candidate>& c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].score > c[best].score) best = i;
  }
  return best;
}

inline std::size_t sample_softmax(const std::vector<Candidate>& c, Rng& rng) {
  double top = c[first_max(c)].score;
  std::vector<double> w;
  for (const auto& x : c) w.push_back(std::exp(x.score - top));
  return rng.weighted(w);
}

inline std::size_t token_count(const std::string& text) { return Tokenizer::builtin().tokenize(text).ids.size(); }

// Runs a sentence-at-a-time loop; `choose` picks a candidate index and may
// record retries.
template <typename Choose>
DecodeResult run(const Problem& prob, const DecodePolicy& policy, const DecodeConfig& cfg, Choose&& choose) {
  DecodeResult res;
  DecodeState state;
  std::size_t tokens = token_count(prob.text());
  while (true) {
    const auto cands = policy.propose(prob, state);
    if (cands.empty()) throw Error("policy proposed no candidates");
    const Candidate& c = cands[choose(state, cands, res)];
    const std::size_t t = token_count(c.text);
    if (tokens + t > cfg.max_tokens) {
      res.truncated = true;
      break;
    }
    tokens += t;
    state.sentences.push_back(c.text);
    res.score += c.score;
    if (c.terminal) break;
  }
  res.text = state.text();
  return res;
}

struct Beam {
  DecodeState state;
  double score = 0;
  std::size_t tokens = 0;
  bool done = false;
};

inline DecodeResult beam_search(const Problem& prob, const DecodePolicy& policy, const DecodeConfig& cfg) {
  const std::size_t k = static_cast<std::size_t>(cfg.beam);
  std::vector<Beam> live{Beam{{}, 0.0, token_count(prob.text()), false}};
  std::optional<Beam> best;  // best finished hypothesis
  while (!live.empty()) {
    std::vector<Beam> next;
    for (const auto& b : live) {
      const auto cands = policy.propose(prob, b.state);
      if (cands.empty()) throw Error("policy proposed no candidates");
      for (const auto& c : cands) {
        Beam nb = b;
        const std::size_t t = token_count(c.text);
        if (nb.tokens + t > cfg.max_tokens) {
          nb.done = true;  // truncated
        } else {
          nb.tokens += t;
          nb.state.sentences.push_back(c.text);
          nb.score += c.score;
          nb.done = c.terminal;
        }
        next.push_back(std::move(nb));
      }
    }
    std::stable_sort(next.begin(), next.end(), [](const Beam& a, const Beam& b) { return a.score > b.score; });
    if (next.size() > k) next.resize(k);
    live.clear();
    for (auto& b : next) {
      if (b.done) {
        if (!best || b.score > best->score) best = b;
      } else {
        live.push_back(std::move(b));
      }
    }
    // Scores only decrease, so a finished hypothesis beating every live one is final.
    if (best) {
      bool beaten = true;
      for (const auto& b : live) beaten = beaten && b.score <= best->score;
      if (beaten) break;
    }
  }
  if (!best) throw Error("beam search ended without a finished hypothesis");
  DecodeResult res;
  res.text = best->state.text();
  res.score = best->score;
  const auto cands_end = best->state.sentences.empty() ? std::string() : best->state.sentences.back();
  res.truncated = cands_end.rfind("Answer: ", 0) != 0;
  return res;
}

}  // namespace detail

// Decodes without a detector (greedy, multinomial or beam).
inline DecodeResult decode(const Problem& prob, const DecodePolicy& policy, const DecodeConfig& cfg, Rng& rng) {
  cfg.validate();
  switch (cfg.mode) {
    case DecodeMode::greedy:
      return detail::run(prob, policy, cfg, [](const auto&, const auto& c, auto&) { return detail::first_max(c); });
    case DecodeMode::multinomial:
      return detail::run(prob, policy, cfg, [&](const auto&, const auto& c, auto&) { return detail::sample_softmax(c, rng); });
    case DecodeMode::beam: return detail::beam_search(prob, policy, cfg);
    case DecodeMode::retry_upon_regret: throw ConfigError("retry_upon_regret needs a detector");
  }
  return {};
}

// Greedy first pick; whenever the detector flags the generated sentence it
// is deleted and regenerated by multinomial sampling, within the budget.
inline DecodeResult retry_upon_regret(const Problem& prob, const DecodePolicy& policy, const ErrorDetector& detector,
                                      const DecodeConfig& cfg, Rng& rng) {
  cfg.validate();
  int budget = cfg.max_retries;
  return detail::run(prob, policy, cfg, [&](const DecodeState& state, const std::vector<Candidate>& c, DecodeResult& res) {
    if (cfg.per_sentence_retries) budget = cfg.max_retries;
    std::size_t pick = detail::first_max(c);
    while (budget > 0 && detector.flags(prob, state, c[pick].text, rng)) {
      --budget;
      res.retries.push_back(RetryEvent{state.sentences.size(), c[pick].text});
      pick = detail::sample_softmax(c, rng);
    }
    return pick;
  });
}

//---------------------------------------------------------------------------
// Batch evaluation
//---------------------------------------------------------------------------

// Runs fn(i) for i in [0, n) on `threads` workers (0: hardware concurrency).
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct EvalResult {
  AggregateStats stats;
  std::vector<VerifierReport> reports;
  std::vector<DecodeResult> outputs;
};

// Decodes and verifies every problem. Problem i draws from
// derive_seed(seed, i), so two runs over the same set are paired.
inline EvalResult eval_accuracy(std::span<const Problem> problems, const DecodePolicy& policy,
                                const ErrorDetector* detector, const DecodeConfig& cfg, std::uint64_t seed,
                                unsigned threads = 0, const VerifyOptions& vopt = {}) {
  if (problems.empty()) throw ConfigError("evaluation needs at least one problem");
  cfg.validate();
  if (cfg.mode == DecodeMode::retry_upon_regret && !detector) throw ConfigError("retry_upon_regret needs a detector");
  EvalResult r;
  r.reports.resize(problems.size());
  r.outputs.resize(problems.size());
  parallel_for(problems.size(), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, 0x4556ull, i));
    r.outputs[i] = cfg.mode == DecodeMode::retry_upon_regret ? retry_upon_regret(problems[i], policy, *detector, cfg, rng)
                                                             : decode(problems[i], policy, cfg, rng);
    r.reports[i] = verify_text(problems[i], r.outputs[i].text, vopt);
  });
  r.stats = aggregate(r.reports);
  return r;
}

}  // namespace igsm
