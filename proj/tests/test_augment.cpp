#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace igsm;

namespace {

struct Case {
  Problem prob;
  SolutionScript sol;
};

Case school_case(std::uint64_t seed = 0) {
  const auto g = fixtures::school_graph();
  return {render_problem(g, Layout::pq, seed), render_solution(g, seed)};
}

Case generated(std::uint64_t seed, int op = 10) {
  const auto gen = generate_problem(preset_config("med"), op, Layout::pq, seed);
  return {gen.problem, gen.solution};
}

// Step-wise walk of an augmented text: calls fn(name, prefix names) for every fragment.
template <typename F>
void each_fragment(const std::string& text, F&& fn) {
  std::vector<std::string> defined;
  for (const auto& s : fixtures::sentences(text)) {
    if (!s.starts_with("Define ")) continue;
    const auto as = s.find(" as ");
    const std::string name = s.substr(7, as - 7);
    if (s.compare(as + 4, 6, "[BACK]") == 0) {
      fn(name, defined);
    } else {
      defined.push_back(name);
    }
  }
}

}  // namespace

TEST(Augment, ZeroRateIsIdentity) {
  const auto c = school_case();
  for (auto* f : {+[](const Case& c) { return inject_retry(c.sol, c.prob.graph, 0.0, 1); },
                  +[](const Case& c) { return inject_retry_weak(c.sol, 0.0, 1); },
                  +[](const Case& c) { return inject_retry_miss(c.sol, c.prob, 0.0, 1); }}) {
    const auto a = f(c);
    EXPECT_EQ(a.text, c.sol.text());
    EXPECT_TRUE(a.events.empty());
    EXPECT_TRUE(a.mask_spans.empty());
  }
}

TEST(Augment, RateOutOfRangeIsRejected) {
  const auto c = school_case();
  EXPECT_THROW(inject_retry(c.sol, c.prob.graph, 1.0, 1), ConfigError);
  EXPECT_THROW(inject_retry(c.sol, c.prob.graph, -0.1, 1), ConfigError);
  EXPECT_THROW(inject_retry_weak(c.sol, 0.995, 1), ConfigError);
  EXPECT_NO_THROW(inject_retry_miss(c.sol, c.prob, 0.99, 1));
}

TEST(Augment, StripRecoversCanonicalText) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto c = generated(s);
    const double p = 0.1 * static_cast<double>(s % 9);
    EXPECT_EQ(strip_retries(inject_retry(c.sol, c.prob.graph, p, s).text), c.sol.text());
    EXPECT_EQ(strip_retries(inject_retry_weak(c.sol, p, s).text), c.sol.text());
    EXPECT_EQ(strip_retries(inject_retry_weak(c.sol, p, s, true).text), c.sol.text());
    EXPECT_EQ(strip_retries(inject_retry_miss(c.sol, c.prob, p, s).text), c.sol.text());
  }
}

TEST(Augment, RetryInsertsOnlyTrueErrors) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto c = generated(s);
    const auto ops = oracle::operands(c.prob.graph);
    const auto a = inject_retry(c.sol, c.prob.graph, 0.5, s);
    std::map<std::size_t, std::set<std::string>> at_position;
    each_fragment(a.text, [&](const std::string& name, const std::vector<std::string>& prefix) {
      const std::set<std::string> done(prefix.begin(), prefix.end());
      EXPECT_FALSE(oracle::can_next(ops, done, name)) << name;
      EXPECT_FALSE(done.count(name));
      EXPECT_TRUE(at_position[prefix.size()].insert(name).second) << "repeated at one position: " << name;
    });
    const auto rep = verify_text(c.prob, a.text);
    EXPECT_TRUE(rep.fully_correct);
    EXPECT_EQ(rep.spurious_retries, 0);
    EXPECT_EQ(static_cast<std::size_t>(rep.retry_count), a.inserted());
  }
}

TEST(Augment, RetryFractionOnSchoolExample) {
  // The school example has several wrong parameters at every prefix, so nothing is suppressed at moderate p.
  const auto c = school_case(3);
  const auto a = inject_retry(c.sol, c.prob.graph, 0.3, 17);
  for (const auto& e : a.events) EXPECT_FALSE(e.suppressed);
}

TEST(Augment, WeakDrawsLaterSteps) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto c = generated(s);
    const auto a = inject_retry_weak(c.sol, 0.5, s);
    const auto names = oracle::defined_names(c.sol.text());
    each_fragment(a.text, [&](const std::string& name, const std::vector<std::string>& prefix) {
      EXPECT_GE(prefix.size(), 1u);
      const auto later = std::find(names.begin() + static_cast<std::ptrdiff_t>(prefix.size()), names.end(), name);
      EXPECT_NE(later, names.end()) << name;
    });
    for (const auto& e : a.events) EXPECT_GE(e.position, 1u);
  }
}

TEST(Augment, WeakCanProduceSpuriousRetries) {
  int spurious = 0, clean = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto c = generated(s);
    const auto a = inject_retry_weak(c.sol, 0.5, s);
    const auto strict = verify_text(c.prob, a.text);
    const auto tolerant = verify_text(c.prob, a.text, VerifyOptions{true, false});
    EXPECT_TRUE(tolerant.fully_correct);
    if (strict.spurious_retries > 0) {
      ++spurious;
      EXPECT_FALSE(strict.fully_correct);
      EXPECT_NE(strict.first_error->reason.find("retry"), std::string::npos);
    } else {
      ++clean;
    }
  }
  EXPECT_GT(spurious, 0);
}

TEST(Augment, WeakWholeSentence) {
  const auto c = school_case();
  const auto a = inject_retry_weak(c.sol, 0.6, 4, true);
  ASSERT_GT(a.inserted(), 0u);
  EXPECT_TRUE(a.whole_sentence);
  EXPECT_EQ(oracle::count_of(a.text, ". [BACK]."), static_cast<int>(a.inserted()));
  for (const auto& sp : a.mask_spans) {
    const std::string frag = a.text.substr(sp.begin, sp.end - sp.begin);
    EXPECT_TRUE(frag.starts_with("Define "));
    EXPECT_TRUE(frag.ends_with("."));
  }
  EXPECT_TRUE(verify_text(c.prob, a.text, VerifyOptions{true, false}).fully_correct);
}

TEST(Augment, SchoolExampleWeakFirstPositionOffersLaterParameters) {
  const auto c = school_case();
  const auto later = oracle::defined_names(c.sol.text());
  std::set<std::string> seen;
  for (std::uint64_t s = 0; s < 200; ++s) {
    for (const auto& e : inject_retry_weak(c.sol, 0.5, s).events) {
      if (e.position == 1 && !e.suppressed) seen.insert(e.name);
    }
  }
  EXPECT_EQ(seen, std::set<std::string>(later.begin() + 1, later.end()));
}

TEST(Augment, MissPoolIncludesUnusedStatementParameter) {
  const auto c = school_case();
  bool found = false;
  for (std::uint64_t s = 0; s < 200 && !found; ++s) {
    for (const auto& e : inject_retry_miss(c.sol, c.prob, 0.6, s).events) found = found || e.name == "Riverview High's Film Studio";
  }
  EXPECT_TRUE(found);
}

TEST(Augment, MissInsertsStatementParametersNotYetSeen) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto c = generated(s);
    const auto a = inject_retry_miss(c.sol, c.prob, 0.5, s);
    std::set<std::string> earlier;
    for (const auto& sent : fixtures::sentences(a.text)) {
      if (!sent.starts_with("Define ")) continue;
      const auto as = sent.find(" as ");
      const std::string name = sent.substr(7, as - 7);
      if (sent.compare(as + 4, 6, "[BACK]") == 0) {
        EXPECT_NE(c.prob.statement.find(name), std::string::npos) << name;
        EXPECT_FALSE(earlier.count(name)) << name;
      }
      earlier.insert(name);
    }
  }
}

TEST(MaskSpans, RecomputedEqualsRecorded) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto c = generated(s);
    for (const auto& a : {inject_retry(c.sol, c.prob.graph, 0.4, s), inject_retry_weak(c.sol, 0.4, s),
                          inject_retry_weak(c.sol, 0.4, s, true), inject_retry_miss(c.sol, c.prob, 0.4, s)}) {
      const auto spans = mask_spans(a.text);
      ASSERT_EQ(spans.size(), a.mask_spans.size());
      for (std::size_t i = 0; i < spans.size(); ++i) {
        EXPECT_EQ(spans[i], a.mask_spans[i]);
        if (i) EXPECT_LE(spans[i - 1].end, spans[i].begin);
        EXPECT_EQ(a.text.compare(spans[i].end, 7, " [BACK]"), 0);
      }
      std::string from_spans, from_events;
      for (const auto& sp : spans) from_spans += a.text.substr(sp.begin, sp.end - sp.begin);
      for (const auto& e : a.events) {
        if (e.suppressed) continue;
        if (a.whole_sentence) {
          for (const auto& st : c.sol.steps) {
            if (st.param == *e.param) from_events += st.text;
          }
        } else {
          from_events += "Define " + e.name + " as";
        }
      }
      EXPECT_EQ(from_spans, from_events);
    }
  }
}

TEST(MaskSpans, SchoolRetryHasFiveFragments) {
  const std::string t = fixtures::kSchoolRetry;
  const auto spans = mask_spans(t);
  ASSERT_EQ(spans.size(), 5u);
  EXPECT_EQ(t.substr(spans[0].begin, spans[0].end - spans[0].begin), "Define Film Studio's School Daypack as");
  EXPECT_EQ(t.substr(spans[1].begin, spans[1].end - spans[1].begin), "Define Central High's Classroom as");
  for (const auto& sp : spans) EXPECT_EQ(t.find("[BACK]", sp.begin), sp.end + 1);
  EXPECT_EQ(mask_spans(std::string(fixtures::kSchoolSolution)).size(), 0u);
}

TEST(MaskSpans, StripSchoolRetryGivesSolution) {
  EXPECT_EQ(strip_retries(fixtures::kSchoolRetry) + " Answer: 16.", fixtures::kSchoolSolution);
  EXPECT_EQ(strip_retries(fixtures::kHardRetry) + " Answer: 14.", fixtures::kHardSolution);
}

TEST(Augment, Deterministic) {
  const auto c = generated(5);
  EXPECT_EQ(inject_retry(c.sol, c.prob.graph, 0.3, 9).text, inject_retry(c.sol, c.prob.graph, 0.3, 9).text);
  EXPECT_NE(inject_retry(c.sol, c.prob.graph, 0.5, 9).text, inject_retry(c.sol, c.prob.graph, 0.5, 10).text);
}

TEST(Augment, ModeStrings) {
  for (auto m : {AugmentMode::retry, AugmentMode::weak, AugmentMode::miss}) EXPECT_EQ(augment_mode_from_string(to_string(m)), m);
  EXPECT_THROW(augment_mode_from_string("flip"), ConfigError);
}
