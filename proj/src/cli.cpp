#include "dipolatt/cli.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <variant>
#include <vector>

#include "dipolatt/ensemble_protocol.hpp"
#include "dipolatt/errors.hpp"
#include "dipolatt/fidelity_budget.hpp"
#include "dipolatt/figures_of_merit.hpp"
#include "dipolatt/gate_sim.hpp"

namespace dipolatt::cli {

namespace {

using Cell = std::variant<double, long, std::string>;
using Row = std::vector<std::pair<std::string, Cell>>;

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string cell_text(const Cell& c, int double_digits) {
  if (std::holds_alternative<double>(c))
    return format_double(std::get<double>(c), double_digits);
  if (std::holds_alternative<long>(c)) return std::to_string(std::get<long>(c));
  return std::get<std::string>(c);
}

void write_json(std::ostream& out, const RunConfig& cfg,
                const std::vector<Row>& rows) {
  nlohmann::json config;
  config["subcommand"] = cfg.subcommand;
  nlohmann::json params(nlohmann::json::value_t::object);
  for (const auto& [k, v] : cfg.parameters) params[k] = v;
  config["parameters"] = params;
  config["output_format"] = cfg.output_format;
  config["seed"] = cfg.seed;
  config["workers"] = cfg.workers;

  out << "{\"config\": " << config.dump() << ", \"version\": \"" << kVersion
      << "\", \"rows\": [";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << (r ? ", {" : "{");
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i) out << ", ";
      out << '"' << rows[r][i].first << "\": ";
      const Cell& c = rows[r][i].second;
      if (std::holds_alternative<std::string>(c))
        out << nlohmann::json(std::get<std::string>(c)).dump();
      else
        out << cell_text(c, 17);
    }
    out << "}";
  }
  out << "]}\n";
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows.front().size(); ++i)
    out << (i ? "," : "") << rows.front()[i].first;
  out << "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << cell_text(row[i].second, 9);
    out << "\r\n";
  }
}

class Params {
 public:
  Params(const std::map<std::string, std::string>& kv,
         std::set<std::string> known)
      : kv_(kv) {
    for (const auto& [k, v] : kv) {
      (void)v;
      if (!known.count(k))
        throw InputError("unknown parameter '" + k + "'");
    }
  }
  bool has(const std::string& k) const { return kv_.count(k) > 0; }
  std::string str(const std::string& k, const std::string& dflt = "") const {
    auto it = kv_.find(k);
    return it == kv_.end() ? dflt : it->second;
  }
  double num(const std::string& k) const {
    auto it = kv_.find(k);
    if (it == kv_.end()) throw InputError("missing required parameter '" + k + "'");
    return parse_num(k, it->second);
  }
  double num(const std::string& k, double dflt) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? dflt : parse_num(k, it->second);
  }
  long integer(const std::string& k, long dflt) const {
    const double v = num(k, double(dflt));
    return static_cast<long>(v);
  }
  bool flag(const std::string& k, bool dflt) const {
    auto it = kv_.find(k);
    if (it == kv_.end()) return dflt;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw InputError("parameter '" + k + "' expects a boolean, got '" + v + "'");
  }

 private:
  static double parse_num(const std::string& k, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw InputError("parameter '" + k + "' expects a number, got '" + v + "'");
    }
  }
  const std::map<std::string, std::string>& kv_;
};

figures_of_merit::TrapGeometry geometry_from(const Params& p) {
  const std::string g = p.str("geometry");
  if (g == "ellipsoid")
    return figures_of_merit::CommonEllipsoid{p.num("eta_perp"), p.num("eta_par")};
  if (g == "separated")
    return figures_of_merit::SeparatedSpheres{p.num("eta"), p.num("zbar")};
  if (g == "sphere") return figures_of_merit::CommonSphere{p.num("eta")};
  throw InputError("geometry must be one of ellipsoid|separated|sphere|sqrt_swap");
}

const std::set<std::string> kFomKeys = {
    "geometry", "eta", "eta_perp", "eta_par", "zbar",
    "q",        "method", "retardation"};

double evaluate_fom(const Params& p) {
  const std::string g = p.str("geometry");
  const std::string method = p.str("method", "analytic");
  const int q = static_cast<int>(p.num("q", 0));
  if (g == "sqrt_swap")
    return figures_of_merit::fom_sqrt_swap(p.num("eta"), method != "quadrature")
        .fom.value;
  if (method == "analytic") {
    if (g == "ellipsoid")
      return figures_of_merit::fom_ellipsoid_nearfield(p.num("eta_perp"),
                                                       p.num("eta_par")).value;
    if (g == "separated")
      return figures_of_merit::fom_separated_spheres(p.num("zbar"), p.num("eta")).value;
    if (g == "sphere") return 0.0;
    throw InputError("geometry must be one of ellipsoid|separated|sphere|sqrt_swap");
  }
  if (method != "quadrature")
    throw InputError("method must be analytic or quadrature");
  figures_of_merit::QuadratureOptions qopts;
  qopts.include_retardation = p.flag("retardation", false);
  return figures_of_merit::fom_generic(geometry_from(p), q, qopts).value;
}

void echo_fom_inputs(const Params& p, Row& row) {
  row.emplace_back("geometry", p.str("geometry"));
  for (const char* k : {"eta", "eta_perp", "eta_par", "zbar"})
    if (p.has(k)) row.emplace_back(k, p.num(k));
  row.emplace_back("q", long(p.num("q", 0)));
}

std::vector<Row> run_fom(const Params& p) {
  Row row;
  echo_fom_inputs(p, row);
  row.emplace_back("fom", evaluate_fom(p));
  return {row};
}

struct SweepGrid {
  double lo, hi;
  long count;
};

SweepGrid parse_range(const std::string& text) {
  SweepGrid g{};
  char colon1 = 0, colon2 = 0;
  std::istringstream is(text);
  if (!(is >> g.lo >> colon1 >> g.hi >> colon2 >> g.count) || colon1 != ':' ||
      colon2 != ':' || !is.eof())
    throw InputError("range must be lo:hi:count, got '" + text + "'");
  if (g.count < 1) throw InputError("empty sweep range");
  if (g.count > 1 && !(g.lo < g.hi)) throw InputError("sweep needs lo < hi");
  return g;
}

std::vector<Row> run_sweep(const Params& p, int workers) {
  const std::string swept = p.str("param");
  if (swept.empty()) throw InputError("missing required parameter 'param'");
  if (!kFomKeys.count(swept) || swept == "geometry" || swept == "method")
    throw InputError("cannot sweep parameter '" + swept + "'");
  const SweepGrid grid = parse_range(p.str("range"));

  std::vector<double> values(grid.count);
  for (long i = 0; i < grid.count; ++i)
    values[i] = grid.count == 1
                    ? grid.lo
                    : grid.lo + (grid.hi - grid.lo) * double(i) / double(grid.count - 1);

  std::vector<double> fom(grid.count);
  std::vector<std::string> failures(grid.count);
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= grid.count) return;
      try {
        std::map<std::string, std::string> kv;
        for (const char* k : {"geometry", "eta", "eta_perp", "eta_par", "zbar",
                              "q", "method", "retardation"}) {
          if (p.has(k)) kv[k] = p.str(k);
        }
        kv[swept] = format_double(values[i], 17);
        Params sp(kv, kFomKeys);
        fom[i] = evaluate_fom(sp);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const int nw = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (long i = 0; i < grid.count; ++i)
    if (!failures[i].empty())
      throw NumericalError("sweep point " + std::to_string(i) + ": " + failures[i]);

  std::vector<Row> rows;
  rows.reserve(grid.count);
  for (long i = 0; i < grid.count; ++i) {
    Row row;
    row.emplace_back("index", long(i));
    row.emplace_back(swept, values[i]);
    row.emplace_back("fom", fom[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> run_gate(const Params& p) {
  const std::string protocol = p.str("protocol");
  gate_sim::GateReport rep;
  Row row;
  row.emplace_back("protocol", protocol);
  if (protocol == "cphase") {
    rep = gate_sim::cphase_levelshift(geometry_from(p), p.num("s", 1e-3),
                                      int(p.num("q", 0)));
  } else if (protocol == "sqrt_swap") {
    gate_sim::SqrtSwapOptions opts;
    opts.s = p.num("s", 1e-3);
    opts.twice_I = int(2.0 * p.num("nuclear_spin", 1.5));
    opts.twice_F = int(2.0 * p.num("f", 2.0));
    rep = gate_sim::sqrt_swap(p.num("eta"), opts);
    row.emplace_back("eta", p.num("eta"));
  } else if (protocol == "ramsey") {
    gate_sim::TwoLevelParams tl;
    tl.v_c = p.num("vc");
    tl.gamma_c = p.num("gamma_c", 0.0);
    tl.gamma = p.num("gamma", 1.0);
    gate_sim::RamseyPulseConfig cfg;
    cfg.pulse_duration = p.num("pulse_duration", 0.0);
    rep = gate_sim::ramsey_cphase(tl, cfg);
  } else {
    throw InputError("protocol must be cphase|sqrt_swap|ramsey");
  }
  row.emplace_back("fidelity", rep.fidelity);
  row.emplace_back("fidelity_superposition", rep.fidelity_superposition);
  row.emplace_back("leakage", rep.leakage);
  row.emplace_back("phase", rep.phase);
  row.emplace_back("duration", rep.duration);
  for (int i = 0; i < 4; ++i) {
    row.emplace_back("u" + std::to_string(i) + std::to_string(i) + "_mag",
                     std::abs(rep.unitary(i, i)));
  }
  row.emplace_back("u12_mag", std::abs(rep.unitary(1, 2)));
  row.emplace_back("u33_phase", std::arg(rep.unitary(3, 3)));
  return {row};
}

std::vector<Row> run_fidelity(const Params& p) {
  fidelity_budget::LatticeParams lp;
  lp.hyperfine_F = int(p.num("f"));
  lp.linewidth_over_recoil = p.num("gamma_over_recoil");
  lp.intensity_ratio = p.num("intensity_ratio");
  lp.protocol_constant = p.num("c");
  lp.transport_factor = p.num("n", 2.0);
  const bool with_ent = p.flag("include_entangling_time", false);

  Row row;
  row.emplace_back("f", long(lp.hyperfine_F));
  row.emplace_back("gamma_over_recoil", lp.linewidth_over_recoil);
  row.emplace_back("intensity_ratio", lp.intensity_ratio);
  row.emplace_back("c", lp.protocol_constant);
  row.emplace_back("n", lp.transport_factor);
  double detuning;
  if (p.has("detuning")) {
    detuning = p.num("detuning");
  } else {
    const auto opt = fidelity_budget::optimize_detuning(lp, with_ent);
    detuning = opt.detuning;
    row.emplace_back("analytic_detuning", opt.analytic_detuning);
  }
  const auto budget = fidelity_budget::total_fidelity(lp, detuning, with_ent);
  row.emplace_back("detuning", budget.detuning);
  row.emplace_back("eta", budget.eta);
  row.emplace_back("omega_osc_over_recoil", budget.omega_osc_over_recoil);
  row.emplace_back("fom_magnitude", budget.fom_magnitude);
  row.emplace_back("err_catalysis", budget.err_catalysis);
  row.emplace_back("err_lattice", budget.err_lattice);
  row.emplace_back("fidelity", budget.fidelity);
  return {row};
}

std::vector<Row> run_ensemble(const Params& p, std::uint64_t seed) {
  const long sites = p.integer("sites", 1000);
  const double fill = p.num("fill", 0.1);
  ensemble_protocol::ErrorModel model;
  model.gate_fidelity = p.num("f_true", 0.9);
  model.p_control_lost = p.num("p_control_lost", 1.0);
  model.p_target_lost = p.num("p_target_lost", 0.0);
  model.p_both_lost = p.num("p_both_lost", 0.0);
  model.p_wrong_state = p.num("p_wrong_state", 0.0);
  model.unpaired_flip_probability = p.num("unpaired_flip", 0.0);
  const long cycles = p.integer("cycles", 2);
  if (cycles < 1) throw InputError("cycles must be >= 1");

  auto ens = ensemble_protocol::fill_lattice(int(sites), fill, seed);
  std::vector<ensemble_protocol::CycleCounts> counts;
  for (long c = 0; c < cycles; ++c)
    counts.push_back(ensemble_protocol::cnot_flush_cycle(ens, model));

  double f_hat = -1.0, sigma = 0.0;
  if (cycles >= 2 && counts[0].target_after > 0) {
    const auto est = ensemble_protocol::estimate_fidelity(
        counts[0].target_after, counts[1].target_after);
    f_hat = est.f_hat;
    sigma = est.sigma;
  }

  std::vector<Row> rows;
  for (long c = 0; c < cycles; ++c) {
    Row row;
    row.emplace_back("cycle", c + 1);
    row.emplace_back("pairs_before", counts[c].pairs_before);
    row.emplace_back("target_after", counts[c].target_after);
    row.emplace_back("paired_after", counts[c].paired_after);
    row.emplace_back("new_unpaired", counts[c].new_unpaired);
    row.emplace_back("flushed", counts[c].flushed);
    row.emplace_back("lost", counts[c].lost);
    row.emplace_back("f_hat", f_hat);
    row.emplace_back("f_sigma", sigma);
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::set<std::string> kSweepKeys = [] {
  std::set<std::string> s = kFomKeys;
  s.insert("param");
  s.insert("range");
  return s;
}();

const std::set<std::string> kGateKeys = {
    "protocol", "geometry", "eta",  "eta_perp",       "eta_par", "zbar", "q",
    "s",        "vc",       "gamma_c", "gamma", "pulse_duration", "nuclear_spin", "f"};

const std::set<std::string> kFidelityKeys = {
    "f", "gamma_over_recoil", "intensity_ratio", "c", "n", "detuning",
    "include_entangling_time"};

const std::set<std::string> kEnsembleKeys = {
    "sites",       "fill",          "f_true",        "p_control_lost",
    "p_target_lost", "p_both_lost", "p_wrong_state", "unpaired_flip",
    "cycles"};

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand") {
      cfg.subcommand = value.get<std::string>();
    } else if (key == "parameters") {
      if (!value.is_object()) throw InputError("config: parameters must be an object");
      for (const auto& [k, v] : value.items()) {
        if (v.is_string())
          cfg.parameters[k] = v.get<std::string>();
        else
          cfg.parameters[k] = v.dump();
      }
    } else if (key == "output_format") {
      cfg.output_format = value.get<std::string>();
    } else if (key == "output_path") {
      cfg.output_path = value.get<std::string>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "workers") {
      cfg.workers = value.get<int>();
    } else if (key == "version") {
      // tolerated so that emitted documents can be re-ingested
    } else if (key == "rows") {
      // ditto
    } else if (key == "config") {
      // a full output document: recurse into its config object
      return config_from_json_text(value.dump());
    } else {
      throw InputError("config: unknown key '" + key + "'");
    }
  }
  if (cfg.subcommand.empty()) throw InputError("config: missing subcommand");
  return cfg;
}

int run(const RunConfig& config, std::ostream& fallback_out, std::ostream& diag) {
  std::vector<Row> rows;
  try {
    if (config.output_format != "json" && config.output_format != "csv") {
      throw InputError("output format must be json or csv");
    }
    if (config.subcommand == "fom") {
      rows = run_fom(Params(config.parameters, kFomKeys));
    } else if (config.subcommand == "sweep") {
      rows = run_sweep(Params(config.parameters, kSweepKeys), config.workers);
    } else if (config.subcommand == "gate") {
      rows = run_gate(Params(config.parameters, kGateKeys));
    } else if (config.subcommand == "fidelity") {
      rows = run_fidelity(Params(config.parameters, kFidelityKeys));
    } else if (config.subcommand == "ensemble") {
      rows = run_ensemble(Params(config.parameters, kEnsembleKeys), config.seed);
    } else {
      throw InputError("unknown subcommand '" + config.subcommand + "'");
    }
  } catch (const InputError& e) {
    diag << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    diag << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    diag << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }

  std::ofstream file;
  std::ostream* out = &fallback_out;
  if (!config.output_path.empty()) {
    file.open(config.output_path);
    if (!file) {
      diag << "io error: cannot open '" << config.output_path << "'\n";
      return kExitIo;
    }
    out = &file;
  }
  if (config.output_format == "csv")
    write_csv(*out, rows);
  else
    write_json(*out, config, rows);
  out->flush();
  if (!*out) {
    diag << "io error: write failed\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace dipolatt::cli
