// Clustering, assortativity and ball-law trajectories of the active model
// along a size ladder, printed as CSV.
//
//   sample_clustering_ladder [P] [replications]

#include <cstdlib>
#include <iostream>

#include "rig/rig.hpp"

int main(int argc, char** argv) {
  using namespace rig;
  const long long P = argc > 1 ? std::atoll(argv[1]) : 3;
  const std::size_t reps = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 3;
  ExperimentPlan plan;
  plan.model = {{"model", "active"}, {"beta", 1.0}, {"P", P}};
  plan.ladder = {1000, 10000, 100000};
  plan.statistics = {"alpha", "alpha_2", "moment_2", "ball_dist(1)"};
  plan.replications = reps;
  plan.seed = 1;
  try {
    write_csv(std::cout, run_experiment(plan));
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
