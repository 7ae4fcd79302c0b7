#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "igsm/graph.hpp"
#include "igsm/render.hpp"

namespace igsm {

enum class AugmentMode { retry, weak, miss };

inline std::string to_string(AugmentMode m) {
  switch (m) {
    case AugmentMode::retry: return "retry";
    case AugmentMode::weak: return "weak";
    case AugmentMode::miss: return "miss";
  }
  return "retry";
}
inline AugmentMode augment_mode_from_string(const std::string& s) {
  if (s == "retry") return AugmentMode::retry;
  if (s == "weak") return AugmentMode::weak;
  if (s == "miss") return AugmentMode::miss;
  throw ConfigError("unknown augmentation mode '" + s + "' (expected retry, weak or miss)");
}

// Half-open character range.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct AugmentEvent {
  std::size_t position = 0;  // index of the step the fragment precedes
  std::optional<ParamId> param;
  std::string name;
  AugmentMode mode = AugmentMode::retry;
  bool suppressed = false;  // drawn, but no eligible parameter existed
};

struct AugmentedSample {
  std::string text;
  AugmentMode mode = AugmentMode::retry;
  double retry_rate = 0;
  std::vector<AugmentEvent> events;
  std::vector<CharSpan> mask_spans;
  std::uint64_t seed = 0;
  bool whole_sentence = false;

  std::size_t inserted() const {
    std::size_t n = 0;
    for (const auto& e : events) n += !e.suppressed;
    return n;
  }
};

inline constexpr std::string_view kBack = "[BACK]";

inline void check_retry_rate(double p) {
  if (!(p >= 0.0 && p <= 0.99)) throw ConfigError("retry_rate must be in [0, 0.99], got " + std::to_string(p));
}

namespace detail {

struct Insertion {
  std::string name;
  std::optional<ParamId> param;
  std::string sentence;  // whole-sentence variant; empty for "Define X as"
};

// Draws the geometric number of insertions before every step. `candidates`
// returns the eligible insertions at position k given what was already
// inserted there and anywhere in the sample.
template <typename Candidates>
AugmentedSample assemble(const SolutionScript& s, AugmentMode mode, double p, std::uint64_t seed, std::size_t first,
                         Candidates&& candidates) {
  check_retry_rate(p);
  Rng rng(derive_seed(seed, 0x4147ull, static_cast<std::uint64_t>(mode)));
  AugmentedSample out;
  out.mode = mode;
  out.retry_rate = p;
  out.seed = seed;

  auto append = [&](std::string_view sentence) {
    if (!out.text.empty()) out.text += ' ';
    out.text += sentence;
  };
  std::vector<Insertion> all;
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    std::vector<Insertion> here;
    if (k >= first) {
      while (rng.bernoulli(p)) {
        std::vector<Insertion> pool = candidates(k, here, all);
        AugmentEvent ev;
        ev.position = k;
        ev.mode = mode;
        if (pool.empty()) {
          ev.suppressed = true;
          out.events.push_back(std::move(ev));
          continue;
        }
        Insertion ins = pool[rng.below(pool.size())];
        ev.param = ins.param;
        ev.name = ins.name;
        out.events.push_back(ev);
        here.push_back(ins);
        all.push_back(ins);

        if (!out.text.empty()) out.text += ' ';
        const std::size_t begin = out.text.size();
        if (ins.sentence.empty()) {
          out.text += "Define " + ins.name + " as";
          out.mask_spans.push_back(CharSpan{begin, out.text.size()});
          out.text += " [BACK].";
        } else {
          out.text += ins.sentence;
          out.mask_spans.push_back(CharSpan{begin, out.text.size()});
          out.text += " [BACK].";
        }
      }
    }
    append(s.steps[k].text);
  }
  if (s.answer_sentence) append(SolutionScript::answer_text(s.answer));
  return out;
}

}  // namespace detail

// Before each step, repeatedly with probability p, a parameter that cannot be
// computed next (and is neither defined nor already inserted at this spot).
inline AugmentedSample inject_retry(const SolutionScript& s, const DependencyGraph& g, double p, std::uint64_t seed) {
  ParamSet computed(g.size());
  std::size_t prefix = 0;
  return detail::assemble(s, AugmentMode::retry, p, seed, 0, [&](std::size_t k, const std::vector<detail::Insertion>& here, const auto&) {
    for (; prefix < k; ++prefix) computed.insert(s.steps[prefix].param);
    std::vector<detail::Insertion> pool;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
      const ParamId id{i};
      if (computed.contains(id) || can_next(g, computed, id)) continue;
      bool seen = false;
      for (const auto& h : here) seen = seen || h.param == id;
      if (!seen) pool.push_back(detail::Insertion{g.at(id).name, id, {}});
    }
    return pool;
  });
}

// After each sentence, a strictly later step of the same solution. Uses the
// script alone.
inline AugmentedSample inject_retry_weak(const SolutionScript& s, double p, std::uint64_t seed,
                                         bool whole_sentence = false) {
  auto name_of = [](const SolutionStep& st) {
    const std::string_view t = st.text;
    return std::string(t.substr(7, t.find(" as ") - 7));
  };
  auto out = detail::assemble(s, AugmentMode::weak, p, seed, 1, [&](std::size_t k, const std::vector<detail::Insertion>& here, const auto&) {
    std::vector<detail::Insertion> pool;
    for (std::size_t j = k; j < s.steps.size(); ++j) {
      bool seen = false;
      for (const auto& h : here) seen = seen || h.param == s.steps[j].param;
      if (seen) continue;
      std::string sentence;
      if (whole_sentence) sentence = s.steps[j].text;
      pool.push_back(detail::Insertion{name_of(s.steps[j]), s.steps[j].param, sentence});
    }
    return pool;
  });
  out.whole_sentence = whole_sentence;
  return out;
}

// Parameter names appearing verbatim in the problem statement.
inline std::vector<ParamId> statement_parameters(const Problem& prob) {
  const auto& g = prob.graph;
  std::set<ParamId> ids;
  for (auto id : g.instance_parameters()) {
    ids.insert(id);
    for (auto d : g.at(id).rule.dependencies()) ids.insert(d);
  }
  return {ids.begin(), ids.end()};
}

// After each sentence, a statement parameter not yet defined in the
// solution and not inserted anywhere earlier.
inline AugmentedSample inject_retry_miss(const SolutionScript& s, const Problem& prob, double p, std::uint64_t seed) {
  const auto& g = prob.graph;
  const std::vector<ParamId> named = statement_parameters(prob);
  ParamSet excluded(g.size());
  std::size_t prefix = 0;
  std::size_t seen = 0;
  return detail::assemble(s, AugmentMode::miss, p, seed, 1,
                          [&](std::size_t k, const auto&, const std::vector<detail::Insertion>& all) {
    for (; prefix < k; ++prefix) excluded.insert(s.steps[prefix].param);
    for (; seen < all.size(); ++seen) excluded.insert(*all[seen].param);
    std::vector<detail::Insertion> pool;
    for (auto id : named) {
      if (!excluded.contains(id)) pool.push_back(detail::Insertion{g.at(id).name, id, {}});
    }
    return pool;
  });
}

// Recovers the masked ranges from text alone: for every [BACK], the
// fragment between the previous sentence boundary and " [BACK]".
inline std::vector<CharSpan> mask_spans(std::string_view text) {
  std::vector<CharSpan> spans;
  for (std::size_t b = text.find(kBack); b != std::string_view::npos; b = text.find(kBack, b + 1)) {
    if (b == 0 || text[b - 1] != ' ') continue;
    const std::size_t end = b - 1;
    std::size_t search = end;
    if (search > 0 && text[search - 1] == '.') --search;  // whole-sentence fragment
    const std::size_t prev = search == 0 ? std::string_view::npos : text.rfind(". ", search - 1);
    const std::size_t begin = prev == std::string_view::npos ? 0 : prev + 2;
    spans.push_back(CharSpan{begin, end});
  }
  return spans;
}

inline std::vector<CharSpan> mask_spans(const AugmentedSample& a) { return mask_spans(a.text); }

// Removes every inserted fragment together with its [BACK] and separator.
inline std::string strip_retries(std::string_view text) {
  const auto spans = mask_spans(text);
  std::string out;
  std::size_t at = 0;
  for (const auto& sp : spans) {
    out.append(text.substr(at, sp.begin - at));
    at = sp.end + 1 + kBack.size() + 1;  // " [BACK]."
    if (at < text.size() && text[at] == ' ') ++at;
  }
  if (at < text.size()) out.append(text.substr(at));
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace igsm
