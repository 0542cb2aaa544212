// Runs a small coupled estimate: the k = 2 stretch against the flat
// triangulation on shared randomness. Agreement is exact because both
// lattices discretize to the same site graph.

#include <cstdio>

#include "cardylab/experiment.hpp"

int main() {
  cardylab::ExperimentConfig cfg;
  cfg.experiment = cardylab::ExperimentKind::Coupling;
  cfg.family = cardylab::Family::TriangularK;
  cfg.k = 2.0;
  cfg.delta = 1.0 / 32.0;
  cfg.x_params = {0.25};
  cfg.n_samples = 2000;

  const cardylab::ExperimentResult res = cardylab::run_coupling(cfg);
  std::printf("%s", cardylab::serialize_csv(res).c_str());
  return res.exit_code();
}
