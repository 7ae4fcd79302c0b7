// Generates one problem, adds retry data and checks both solutions.

#include <iostream>

#include "igsm/igsm.hpp"

int main() {
  const igsm::GenConfig cfg = igsm::preset_config("med");
  const igsm::GeneratedProblem gp = igsm::generate_problem(cfg, 7, igsm::Layout::pq, 2024);

  std::cout << "Problem: " << gp.problem.text() << "\n\n";
  std::cout << "Solution: " << gp.solution.text() << "\n\n";

  const auto retry = igsm::inject_retry(gp.solution, gp.problem.graph, 0.3, 7);
  std::cout << "With retries: " << retry.text << "\n\n";

  for (const auto& text : {gp.solution.text(), retry.text}) {
    const auto report = igsm::verify_text(gp.problem, text);
    std::cout << "fully_correct=" << report.fully_correct << " retry_count=" << report.retry_count
              << " answer=" << report.answer.value_or(-1) << "\n";
  }
}
