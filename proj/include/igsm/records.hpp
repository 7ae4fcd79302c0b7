#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "igsm/augment.hpp"
#include "igsm/harness.hpp"
#include "igsm/render.hpp"
#include "igsm/verify.hpp"

namespace igsm {

using json = nlohmann::json;

//---------------------------------------------------------------------------
// Graphs
//---------------------------------------------------------------------------

inline std::string to_string(RuleKind k) {
  switch (k) {
    case RuleKind::constant: return "constant";
    case RuleKind::copy: return "copy";
    case RuleKind::sum: return "sum";
    case RuleKind::difference: return "difference";
    case RuleKind::aggregate: return "aggregate";
  }
  return "constant";
}

inline std::string to_string(Modifier m) {
  switch (m) {
    case Modifier::none: return "none";
    case Modifier::plus: return "plus";
    case Modifier::times: return "times";
  }
  return "none";
}

// Structure, instance rules (abstract rules follow from the structure) and
// query, all by name.
inline json graph_to_json(const DependencyGraph& g) {
  json j;
  const auto& sg = g.structure();
  j["layers"] = json::array();
  for (const auto& l : sg.layers) j["layers"].push_back({{"category", l.category}, {"items", l.items}});
  j["edges"] = json::array();
  for (const auto& e : sg.edges) j["edges"].push_back({e.layer, e.from, e.to});
  j["rules"] = json::array();
  for (auto id : g.instance_parameters()) {
    const auto& p = g.at(id);
    json r{{"param", p.name}, {"kind", to_string(p.rule.kind)}};
    if (p.rule.kind == RuleKind::constant) {
      r["k"] = p.rule.k.value();
    } else {
      json ops = json::array();
      for (auto o : p.rule.operands) ops.push_back(g.at(o).name);
      r["operands"] = ops;
      r["modifier"] = to_string(p.rule.modifier);
      if (p.rule.modifier != Modifier::none) r["k"] = p.rule.k.value();
    }
    j["rules"].push_back(r);
  }
  j["query"] = g.at(g.query()).name;
  return j;
}

inline DependencyGraph graph_from_json(const json& j) {
  try {
    StructureGraph sg;
    const auto& layers = j.at("layers");
    if (layers.size() != kLayerCount) throw ConfigError("graph must have 4 layers");
    for (std::size_t i = 0; i < kLayerCount; ++i) {
      sg.layers[i].category = layers[i].at("category").get<std::string>();
      sg.layers[i].items = layers[i].at("items").get<std::vector<std::string>>();
    }
    for (const auto& e : j.at("edges")) sg.edges.push_back(Edge{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    std::sort(sg.edges.begin(), sg.edges.end());
    DependencyGraph g = DependencyGraph::from_structure(std::move(sg));
    for (const auto& r : j.at("rules")) {
      const ParamId id = g.lookup(r.at("param").get<std::string>());
      const std::string kind = r.at("kind").get<std::string>();
      if (kind == "constant") {
        g.set_rule(id, Rule::make_constant(r.at("k").get<int>()));
        continue;
      }
      std::vector<ParamId> ops;
      for (const auto& o : r.at("operands")) ops.push_back(g.lookup(o.get<std::string>()));
      const std::string m = r.value("modifier", std::string("none"));
      const Modifier mod = m == "plus" ? Modifier::plus : m == "times" ? Modifier::times : Modifier::none;
      if (m != "none" && m != "plus" && m != "times") throw ConfigError("unknown modifier '" + m + "'");
      const int k = r.value("k", 0);
      if (kind == "copy" && ops.size() == 1) {
        g.set_rule(id, Rule::make_copy(ops[0], mod, k));
      } else if (kind == "sum" && ops.size() >= 2) {
        g.set_rule(id, Rule::make_sum(std::move(ops), mod, k));
      } else if (kind == "difference" && ops.size() == 2) {
        g.set_rule(id, Rule::make_difference(ops[0], ops[1], mod, k));
      } else {
        throw ConfigError("malformed '" + kind + "' rule for '" + g.at(id).name + "'");
      }
    }
    g.finalize();
    g.set_query(g.lookup(j.at("query").get<std::string>()));
    return g;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed graph record: ") + e.what());
  }
}

inline std::string graph_digest(const DependencyGraph& g) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(graph_to_json(g).dump())));
  return buf;
}

//---------------------------------------------------------------------------
// Problem records
//---------------------------------------------------------------------------

inline json problem_record(const Problem& prob, const SolutionScript& sol, const std::string& preset) {
  return json{{"statement", prob.statement},
              {"question", prob.question},
              {"solution", sol.text()},
              {"op", prob.graph.op()},
              {"layout", to_string(prob.layout)},
              {"seed", prob.seed},
              {"graph_digest", graph_digest(prob.graph)},
              {"preset", preset},
              {"graph", graph_to_json(prob.graph)}};
}

inline Problem problem_from_record(const json& j) {
  try {
    Problem p;
    p.graph = graph_from_json(j.at("graph"));
    p.layout = layout_from_string(j.at("layout").get<std::string>());
    p.statement = j.at("statement").get<std::string>();
    p.question = j.at("question").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("graph_digest") && j["graph_digest"].get<std::string>() != graph_digest(p.graph)) {
      throw ConfigError("graph_digest does not match the embedded graph");
    }
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed problem record: ") + e.what());
  }
}

// The canonical script is re-derived from the graph and the record seed.
inline SolutionScript solution_from_record(const json& j, const Problem& p) {
  SolutionScript s = render_solution(p.graph, p.seed);
  if (s.text() != j.at("solution").get<std::string>()) {
    s.answer_sentence = false;
    if (s.text() != j.at("solution").get<std::string>()) throw ConfigError("solution does not match the embedded graph");
  }
  return s;
}

//---------------------------------------------------------------------------
// Augmented samples
//---------------------------------------------------------------------------

inline json spans_to_json(const std::vector<CharSpan>& spans) {
  json a = json::array();
  for (const auto& s : spans) a.push_back({s.begin, s.end});
  return a;
}

inline json augment_record(const AugmentedSample& a, const json& problem, bool with_mask = true) {
  json events = json::array();
  for (const auto& e : a.events) {
    json ev{{"position", e.position}, {"mode", to_string(e.mode)}, {"suppressed", e.suppressed}};
    if (!e.suppressed) ev["param"] = e.name;
    events.push_back(ev);
  }
  return json{{"text", a.text},
              {"mode", to_string(a.mode)},
              {"retry_rate", a.retry_rate},
              {"events", events},
              {"mask_spans", with_mask ? spans_to_json(a.mask_spans) : json::array()},
              {"seed", a.seed},
              {"problem", problem}};
}

//---------------------------------------------------------------------------
// Reports
//---------------------------------------------------------------------------

inline json report_to_json(const VerifierReport& r) {
  json j{{"parsed", r.parsed},
         {"fully_correct", r.fully_correct},
         {"answer_correct", r.answer_correct},
         {"answer", r.answer ? json(*r.answer) : json(nullptr)},
         {"retry_count", r.retry_count},
         {"spurious_retries", r.spurious_retries},
         {"unnecessary_params", r.unnecessary_params},
         {"unnecessary_ops", r.unnecessary_ops}};
  if (r.first_error) {
    j["first_error"] = {{"step", r.first_error->step}, {"offset", r.first_error->offset}, {"reason", r.first_error->reason}};
  } else {
    j["first_error"] = nullptr;
  }
  return j;
}

inline json stats_to_json(const AggregateStats& s) {
  return json{{"n", s.n},
              {"fully_correct", s.correct},
              {"answer_correct", s.answer_correct},
              {"accuracy", s.accuracy},
              {"answer_accuracy", s.answer_accuracy},
              {"mean_retries_correct", s.mean_retries_correct},
              {"mean_retries_wrong", s.mean_retries_wrong},
              {"mean_unnecessary_params", s.mean_unnecessary_params},
              {"mean_unnecessary_ops", s.mean_unnecessary_ops}};
}

}  // namespace igsm
