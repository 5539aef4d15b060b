// A planted clique of size n^gamma inflates the second degree moment by a
// growing factor while the r = 1 ball law barely moves.
//
//   sample_clique_planting [gamma]

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "rig/rig.hpp"

int main(int argc, char** argv) {
  using namespace rig;
  const double gamma = argc > 1 ? std::atof(argv[1]) : 0.5;
  std::cout << "n1,clique,moment2_base,moment2_planted,ratio,ball_tv\n";
  for (std::size_t n : {1000, 10000, 100000}) {
    ModelConfig cfg;
    cfg.model = ModelKind::active;
    cfg.n1 = cfg.n2 = n;
    cfg.P = DegreeLaw::constant(2);
    cfg.seed = n;
    const Graph g = intersection_graph(generate(cfg));
    Rng rng(n + 1);
    const std::size_t s = detail::clique_size(n, gamma);
    const Graph h = plant_clique(g, s, rng);
    const double m0 = degree_moment(g, 2), m1 = degree_moment(h, 2);
    const double tv = tv_distance(empirical_ball_dist(g, 1), empirical_ball_dist(h, 1));
    std::cout << n << ',' << s << ',' << m0 << ',' << m1 << ',' << m1 / m0 << ',' << std::setprecision(4) << tv
              << '\n';
  }
  return 0;
}
