#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dipolatt/errors.hpp"

namespace dipolatt::ensemble_protocol {

// 1D chain of alternating-species sites: even sites host the control (+)
// species, odd sites the target (-) species.  Sparse Bernoulli filling;
// pairing is greedy left-to-right between occupied nearest neighbours.
struct LatticeEnsemble {
  int n_sites = 0;
  double fill_probability = 0.0;
  std::uint64_t rng_seed = 0;
  static constexpr const char* rng_algorithm = "mt19937_64";

  std::vector<std::uint8_t> occupied;    // per site
  std::vector<std::int32_t> paired_with; // partner site or -1
  std::mt19937_64 rng;

  long count_occupied_targets() const;
  long count_paired_targets() const;
  void repair();  // recompute greedy nearest-neighbour pairing
};

LatticeEnsemble fill_lattice(int n_sites, double fill_probability,
                             std::uint64_t seed);

// Greedy-pairing density: paired fraction of atoms approaches 2p/(1+p).
double analytic_paired_fraction(double fill_probability);

// Gate error taxonomy.  The split resolves "partner lost" into which qubit
// survives; the four probabilities are rescaled to sum to 1.
struct ErrorModel {
  double gate_fidelity = 1.0;        // F_true
  double p_control_lost = 1.0;       // target correct, control lost
  double p_target_lost = 0.0;        // control correct, target lost
  double p_both_lost = 0.0;
  double p_wrong_state = 0.0;        // wrong logic state -> flushed
  double unpaired_flip_probability = 0.0;

  void validate() const;
};

struct CycleCounts {
  long pairs_before = 0;
  long target_after = 0;       // target-species atoms surviving the flush
  long paired_after = 0;
  long new_unpaired = 0;       // targets orphaned by control-only errors
  long flushed = 0;
  long lost = 0;
  long retained = 0;
};

// One CNOT + flush cycle on the |1>_+ |0>_- input: paired targets survive
// with probability F_true, originally unpaired targets are flushed (unless
// spuriously flipped), failed gates lose one or both qubits.
CycleCounts cnot_flush_cycle(LatticeEnsemble& ens, const ErrorModel& model);

struct FidelityEstimate {
  double f_hat;
  double sigma;
  double ci_low;
  double ci_high;
};

// F_hat = count2/count1 with a binomially propagated 1-sigma interval.
FidelityEstimate estimate_fidelity(long count_cycle1, long count_cycle2);

}  // namespace dipolatt::ensemble_protocol
