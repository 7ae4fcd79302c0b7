#pragma once

#include <string>

#include "golden_texts.hpp"
#include "igsm/igsm.hpp"

namespace fixtures {

using igsm::DependencyGraph;
using igsm::Modifier;
using igsm::Rule;

inline void rule(DependencyGraph& g, const std::string& name, Rule r) { g.set_rule(g.lookup(name), std::move(r)); }
inline igsm::ParamId id(const DependencyGraph& g, const std::string& name) { return g.lookup(name); }

// Schools -> classrooms -> backpacks; the 7-operation example.
inline DependencyGraph school_graph() {
  igsm::StructureGraph sg;
  sg.layers[0] = {"School", {"Central High", "Riverview High"}};
  sg.layers[1] = {"Classroom", {"Film Studio", "Dance Studio"}};
  sg.layers[2] = {"Backpack", {"School Daypack", "Messenger Backpack"}};
  sg.layers[3] = {"Stationery", {"Pencil Case"}};
  sg.edges = {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}, {1, 0, 1}, {1, 1, 0}};
  auto g = DependencyGraph::from_structure(sg);
  rule(g, "Riverview High's Film Studio",
       Rule::make_sum({id(g, "Film Studio's Backpack"), id(g, "Dance Studio's School Daypack")}, Modifier::times, 5));
  rule(g, "Film Studio's School Daypack",
       Rule::make_sum({id(g, "Film Studio's Messenger Backpack"), id(g, "Central High's Film Studio")}, Modifier::plus, 12));
  rule(g, "Central High's Film Studio",
       Rule::make_sum({id(g, "Dance Studio's School Daypack"), id(g, "Film Studio's Messenger Backpack")}));
  rule(g, "Riverview High's Dance Studio",
       Rule::make_sum({id(g, "Film Studio's Backpack"), id(g, "Film Studio's Messenger Backpack"),
                       id(g, "Film Studio's School Daypack"), id(g, "Central High's Backpack")}));
  rule(g, "Dance Studio's School Daypack", Rule::make_constant(17));
  rule(g, "Film Studio's Messenger Backpack", Rule::make_constant(13));
  g.finalize();
  g.set_query(id(g, "Central High's Backpack"));
  return g;
}

// Districts -> supermarkets -> products -> ingredients; the 21-operation example.
inline DependencyGraph hard_graph() {
  igsm::StructureGraph sg;
  sg.layers[0] = {"District", {"Residential College District", "School District", "Vocational School District", "Arts Campus"}};
  sg.layers[1] = {"Supermarket", {"Jungle Jim's International Market", "The Fresh Market", "New Seasons Market", "Trader Joe's"}};
  sg.layers[2] = {"Product", {"Parmesan Cheese", "Ice Cream", "Cheese", "Goat Cheese"}};
  sg.layers[3] = {"Ingredient", {"Grape", "Pineapple", "Pear", "Banana"}};
  // District -> Supermarket
  sg.edges = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 2, 1}, {0, 3, 2}, {0, 3, 3}};
  // Supermarket -> Product
  for (igsm::Edge e : std::initializer_list<igsm::Edge>{{1, 0, 0}, {1, 0, 1}, {1, 0, 2}, {1, 1, 0}, {1, 1, 1},
                                                        {1, 1, 2}, {1, 2, 3}, {1, 3, 0}, {1, 3, 2}}) {
    sg.edges.push_back(e);
  }
  // Product -> Ingredient
  for (igsm::Edge e : std::initializer_list<igsm::Edge>{{2, 0, 0}, {2, 0, 1}, {2, 0, 2}, {2, 1, 0}, {2, 1, 1}, {2, 1, 2},
                                                        {2, 1, 3}, {2, 2, 1}, {2, 3, 0}, {2, 3, 1}, {2, 3, 3}}) {
    sg.edges.push_back(e);
  }
  std::sort(sg.edges.begin(), sg.edges.end());
  auto g = DependencyGraph::from_structure(sg);
  auto sum = [&](std::vector<std::string> names, Modifier m = Modifier::none, int k = 0) {
    std::vector<igsm::ParamId> ids;
    for (const auto& n : names) ids.push_back(id(g, n));
    return Rule::make_sum(ids, m, k);
  };
  auto copy = [&](const std::string& n, Modifier m = Modifier::none, int k = 0) { return Rule::make_copy(id(g, n), m, k); };
  auto diff = [&](const std::string& a, const std::string& b, Modifier m = Modifier::none, int k = 0) {
    return Rule::make_difference(id(g, a), id(g, b), m, k);
  };
  const std::string JJ = "Jungle Jim's International Market", TFM = "The Fresh Market", RCD = "Residential College District";
  rule(g, JJ + "'s Cheese", sum({"Parmesan Cheese's Pear", TFM + "'s Ice Cream"}));
  rule(g, "Ice Cream's Pineapple", copy("Goat Cheese's Grape", Modifier::plus, 2));
  rule(g, "New Seasons Market's Goat Cheese", sum({RCD + "'s " + JJ, JJ + "'s Parmesan Cheese", RCD + "'s Supermarket"}));
  rule(g, "Arts Campus's New Seasons Market", copy("Cheese's Pineapple"));
  rule(g, "Goat Cheese's Banana", copy("Vocational School District's Product"));
  rule(g, RCD + "'s " + JJ, copy("Ice Cream's Grape", Modifier::plus, 5));
  rule(g, "Parmesan Cheese's Pineapple", copy("Parmesan Cheese's Pear"));
  rule(g, RCD + "'s " + TFM, copy("Arts Campus's Trader Joe's"));
  rule(g, "Arts Campus's Trader Joe's", copy("Parmesan Cheese's Ingredient"));
  rule(g, "Goat Cheese's Grape", Rule::make_constant(0));
  rule(g, TFM + "'s Ice Cream", diff(RCD + "'s " + TFM, "Parmesan Cheese's Grape", Modifier::plus, 13));
  rule(g, "Goat Cheese's Pineapple", copy("New Seasons Market's Product"));
  rule(g, "Vocational School District's " + TFM, sum({"Trader Joe's's Cheese", TFM + "'s Cheese"}));
  rule(g, "Trader Joe's's Cheese", Rule::make_constant(6));
  rule(g, TFM + "'s Cheese", Rule::make_constant(3));
  rule(g, JJ + "'s Ice Cream", diff("Ice Cream's Banana", "Goat Cheese's Grape"));
  rule(g, JJ + "'s Parmesan Cheese", copy("Ice Cream's Pineapple"));
  rule(g, "Parmesan Cheese's Pear", diff("Goat Cheese's Grape", "Ice Cream's Grape"));
  rule(g, "Parmesan Cheese's Grape", copy(RCD + "'s " + JJ, Modifier::times, 12));
  rule(g, TFM + "'s Parmesan Cheese", copy(TFM + "'s Cheese"));
  rule(g, "Ice Cream's Banana", sum({"Parmesan Cheese's Pineapple", "Ice Cream's Pineapple"}));
  rule(g, "School District's " + JJ, copy(TFM + "'s Ice Cream"));
  rule(g, "Cheese's Pineapple", sum({"Trader Joe's's Cheese", TFM + "'s Cheese"}, Modifier::plus, 20));
  rule(g, "Trader Joe's's Parmesan Cheese", Rule::make_constant(16));
  rule(g, "Ice Cream's Pear", Rule::make_constant(8));
  rule(g, "Ice Cream's Grape", copy("Goat Cheese's Grape"));
  g.finalize();
  g.set_query(id(g, "School District's Product"));
  return g;
}

// A Problem whose statement is the printed text (question split off).
inline igsm::Problem printed_problem(const DependencyGraph& g, const std::string& text) {
  const auto q = text.find(" How many ");
  igsm::Problem p;
  p.graph = g;
  p.layout = igsm::Layout::pq;
  p.statement = text.substr(0, q);
  p.question = text.substr(q + 1);
  return p;
}

inline igsm::Problem school_problem() { return printed_problem(school_graph(), kSchoolProblem); }
inline igsm::Problem hard_problem() { return printed_problem(hard_graph(), kHardProblem); }

// Splits "A. B. C." into sentences, each keeping its period.
inline std::vector<std::string> sentences(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t p = text.find(". "); p != std::string::npos; p = text.find(". ", start)) {
    out.push_back(text.substr(start, p + 1 - start));
    start = p + 2;
  }
  out.push_back(text.substr(start));
  return out;
}

}  // namespace fixtures
