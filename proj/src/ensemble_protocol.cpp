#include "dipolatt/ensemble_protocol.hpp"

#include <cmath>

namespace dipolatt::ensemble_protocol {

namespace {

// portable uniform in [0,1): fixed 53-bit construction from the raw stream
double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

bool is_target_site(int i) { return (i % 2) == 1; }

}  // namespace

long LatticeEnsemble::count_occupied_targets() const {
  long c = 0;
  for (int i = 0; i < n_sites; ++i)
    if (is_target_site(i) && occupied[i]) ++c;
  return c;
}

long LatticeEnsemble::count_paired_targets() const {
  long c = 0;
  for (int i = 0; i < n_sites; ++i)
    if (is_target_site(i) && occupied[i] && paired_with[i] >= 0) ++c;
  return c;
}

void LatticeEnsemble::repair() {
  std::fill(paired_with.begin(), paired_with.end(), -1);
  for (int i = 0; i + 1 < n_sites; ++i) {
    if (occupied[i] && paired_with[i] < 0 && occupied[i + 1] &&
        paired_with[i + 1] < 0) {
      paired_with[i] = i + 1;
      paired_with[i + 1] = i;
    }
  }
}

LatticeEnsemble fill_lattice(int n_sites, double fill_probability,
                             std::uint64_t seed) {
  if (n_sites < 0) throw DomainError("fill_lattice: n_sites must be >= 0");
  if (fill_probability < 0.0 || fill_probability > 1.0)
    throw DomainError("fill_lattice: fill probability must be in [0,1]");
  LatticeEnsemble ens;
  ens.n_sites = n_sites;
  ens.fill_probability = fill_probability;
  ens.rng_seed = seed;
  ens.rng.seed(seed);
  ens.occupied.resize(n_sites, 0);
  ens.paired_with.resize(n_sites, -1);
  for (int i = 0; i < n_sites; ++i)
    ens.occupied[i] = uniform01(ens.rng) < fill_probability ? 1 : 0;
  ens.repair();
  return ens;
}

double analytic_paired_fraction(double p) {
  if (p <= 0.0) return 0.0;
  return 2.0 * p / (1.0 + p);
}

void ErrorModel::validate() const {
  if (gate_fidelity < 0.0 || gate_fidelity > 1.0)
    throw DomainError("ErrorModel: gate fidelity must be in [0,1]");
  const double s = p_control_lost + p_target_lost + p_both_lost + p_wrong_state;
  if (s <= 0.0 && gate_fidelity < 1.0)
    throw DomainError("ErrorModel: error split must have positive weight");
  if (p_control_lost < 0 || p_target_lost < 0 || p_both_lost < 0 || p_wrong_state < 0)
    throw DomainError("ErrorModel: negative probability");
  if (unpaired_flip_probability < 0.0 || unpaired_flip_probability > 1.0)
    throw DomainError("ErrorModel: unpaired flip probability must be in [0,1]");
}

CycleCounts cnot_flush_cycle(LatticeEnsemble& ens, const ErrorModel& model) {
  model.validate();
  CycleCounts counts;
  counts.pairs_before = ens.count_paired_targets();

  const double split_sum = model.p_control_lost + model.p_target_lost +
                           model.p_both_lost + model.p_wrong_state;
  const long atoms_before = [&] {
    long c = 0;
    for (int i = 0; i < ens.n_sites; ++i) c += ens.occupied[i] ? 1 : 0;
    return c;
  }();

  // pass 1: gate on every pair, in site order
  for (int i = 0; i + 1 < ens.n_sites; ++i) {
    if (!ens.occupied[i] || ens.paired_with[i] != i + 1) continue;
    const int control = (i % 2 == 0) ? i : i + 1;
    const int target = (i % 2 == 0) ? i + 1 : i;
    const double u = uniform01(ens.rng);
    if (u < model.gate_fidelity) continue;  // success: both retained, still paired

    double v = uniform01(ens.rng) * split_sum;
    if ((v -= model.p_control_lost) < 0.0) {
      ens.occupied[control] = 0;  // target survives, orphaned
      counts.lost += 1;
      counts.new_unpaired += 1;
    } else if ((v -= model.p_target_lost) < 0.0) {
      ens.occupied[target] = 0;
      counts.lost += 1;
    } else if ((v -= model.p_both_lost) < 0.0) {
      ens.occupied[control] = 0;
      ens.occupied[target] = 0;
      counts.lost += 2;
    } else {
      // wrong logic state: removed by the flush
      ens.occupied[control] = 0;
      ens.occupied[target] = 0;
      counts.flushed += 2;
    }
  }

  // pass 2: the flush removes every originally unpaired target unless the
  // gate beams spuriously flipped it
  for (int i = 0; i < ens.n_sites; ++i) {
    if (!is_target_site(i) || !ens.occupied[i]) continue;
    if (ens.paired_with[i] >= 0) continue;  // handled above or newly orphaned
    const double u = uniform01(ens.rng);
    if (u >= model.unpaired_flip_probability) {
      ens.occupied[i] = 0;
      counts.flushed += 1;
    }
  }

  ens.repair();
  counts.target_after = ens.count_occupied_targets();
  counts.paired_after = ens.count_paired_targets();
  long atoms_after = 0;
  for (int i = 0; i < ens.n_sites; ++i) atoms_after += ens.occupied[i] ? 1 : 0;
  counts.retained = atoms_after;
  // every atom present at the start is retained, flushed or lost
  if (counts.retained + counts.flushed + counts.lost != atoms_before)
    throw NumericalError("cnot_flush_cycle: atom bookkeeping violated");
  return counts;
}

FidelityEstimate estimate_fidelity(long count_cycle1, long count_cycle2) {
  if (count_cycle1 <= 0)
    throw DomainError("estimate_fidelity: first cycle count must be positive");
  FidelityEstimate out;
  out.f_hat = double(count_cycle2) / double(count_cycle1);
  const double var = std::max(out.f_hat * (1.0 - out.f_hat), 0.0) /
                     double(count_cycle1);
  out.sigma = std::sqrt(var);
  out.ci_low = out.f_hat - 1.96 * out.sigma;
  out.ci_high = out.f_hat + 1.96 * out.sigma;
  return out;
}

}  // namespace dipolatt::ensemble_protocol
