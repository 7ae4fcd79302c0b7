#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace igsm;

TEST(Records, GraphJsonRoundTrip) {
  for (const auto& g : {fixtures::school_graph(), fixtures::hard_graph()}) {
    const auto back = graph_from_json(graph_to_json(g));
    EXPECT_EQ(back.structure(), g.structure());
    EXPECT_EQ(back.query(), g.query());
    EXPECT_EQ(back.op(), g.op());
    ASSERT_EQ(back.size(), g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) {
      EXPECT_EQ(back.at(ParamId{i}).rule, g.at(ParamId{i}).rule);
      EXPECT_EQ(back.at(ParamId{i}).value, g.at(ParamId{i}).value);
    }
    EXPECT_EQ(graph_digest(back), graph_digest(g));
  }
}

TEST(Records, ProblemRecordSchema) {
  const auto gen = generate_problem(preset_config("med"), 11, Layout::qp, 42);
  const auto j = problem_record(gen.problem, gen.solution, "med");
  for (const char* key : {"statement", "question", "solution", "op", "layout", "seed", "graph_digest"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["op"], 11);
  EXPECT_EQ(j["layout"], "qp");
  EXPECT_EQ(j["graph_digest"].get<std::string>().size(), 16u);
}

TEST(Records, ProblemRecordRoundTrip) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto gen = generate_problem(preset_config("hard"), 14, Layout::pq, s);
    const auto j = json::parse(problem_record(gen.problem, gen.solution, "hard").dump());
    const auto p = problem_from_record(j);
    EXPECT_EQ(p.text(), gen.problem.text());
    EXPECT_EQ(solution_from_record(j, p).text(), gen.solution.text());
  }
}

TEST(Records, DigestDetectsTampering) {
  const auto gen = generate_problem(preset_config("med"), 6, Layout::pq, 3);
  auto j = problem_record(gen.problem, gen.solution, "med");
  auto bad = j;
  bad["graph_digest"] = "0000000000000000";
  EXPECT_THROW(problem_from_record(bad), ConfigError);
  auto broken = j;
  broken.erase("graph");
  EXPECT_THROW(problem_from_record(broken), ConfigError);
  auto wrong = j;
  wrong["solution"] = "Define A as p; so p = 1.";
  EXPECT_THROW(solution_from_record(wrong, problem_from_record(j)), ConfigError);
}

TEST(Records, DigestDependsOnRulesAndQuery) {
  auto g = fixtures::school_graph();
  const auto d0 = graph_digest(g);
  g.set_query(g.lookup("Central High's Film Studio"));
  EXPECT_NE(graph_digest(g), d0);
}

TEST(Records, AugmentRecordSchema) {
  const auto gen = generate_problem(preset_config("med"), 9, Layout::pq, 5);
  const auto a = inject_retry(gen.solution, gen.problem.graph, 0.5, 1);
  const auto j = augment_record(a, problem_record(gen.problem, gen.solution, "med"));
  for (const char* key : {"text", "mode", "retry_rate", "events", "mask_spans", "seed"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["mask_spans"].size(), a.mask_spans.size());
  EXPECT_EQ(augment_record(a, json::object(), false)["mask_spans"].size(), 0u);
}

TEST(Records, ReportJson) {
  const auto rep = verify_text(fixtures::school_problem(), "Define Mars's Backpack as q; so q = 3.");
  const auto j = report_to_json(rep);
  EXPECT_FALSE(j["fully_correct"].get<bool>());
  EXPECT_TRUE(j["first_error"].is_object());
  EXPECT_TRUE(report_to_json(verify_text(fixtures::school_problem(), fixtures::kSchoolSolution))["first_error"].is_null());
}

TEST(Pipeline, OpRangeParsing) {
  EXPECT_EQ(parse_op_range("7").min, 7);
  EXPECT_EQ(parse_op_range("7").max, 7);
  EXPECT_EQ(parse_op_range("2..15").max, 15);
  EXPECT_THROW(parse_op_range("9..3"), ConfigError);
  EXPECT_THROW(parse_op_range("x"), ConfigError);
}

TEST(Pipeline, GenerateSetIsThreadIndependent) {
  const auto a = generate_set(preset_config("med"), parse_op_range("2..15"), Layout::pq, 30, 7, false, 1);
  const auto b = generate_set(preset_config("med"), parse_op_range("2..15"), Layout::pq, 30, 7, false, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].problem.text(), b[i].problem.text());
    EXPECT_EQ(a[i].solution.text(), b[i].solution.text());
    EXPECT_GE(a[i].problem.graph.op(), 2);
    EXPECT_LE(a[i].problem.graph.op(), 15);
  }
}

TEST(Pipeline, ReaskKeepsRecordsConsistent) {
  const auto set = generate_set(preset_config("med"), parse_op_range("5..10"), Layout::pq, 20, 3, true, 1);
  for (const auto& gp : set) {
    EXPECT_TRUE(verify_text(gp.problem, gp.solution.text()).fully_correct);
    EXPECT_EQ(gp.problem.question, render_question(gp.problem.graph, gp.problem.graph.query()));
  }
}

TEST(Pipeline, ReaskOnHardGraphsStaysRenderable) {
  const auto set = generate_set(preset_config("hard"), parse_op_range("2..21"), Layout::pq, 300, 1, true, 0);
  for (const auto& gp : set) {
    EXPECT_LE(gp.problem.graph.op(), static_cast<int>(kLetterPool.size()));
    EXPECT_TRUE(verify_text(gp.problem, gp.solution.text()).fully_correct);
  }
}
