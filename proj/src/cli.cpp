#include "entkit/cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entkit/harness.hpp"
#include "entkit/io.hpp"
#include "entkit/sepopt.hpp"
#include "entkit/steinsim.hpp"

namespace entkit {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Output {
  std::string path;
  std::string format;

  void write(std::ostream& fallback, const std::string& text) const {
    if (path.empty()) {
      fallback << text;
      return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
    if (!f) throw UsageError("failed writing '" + path + "'");
  }
};

void add_output(CLI::App* cmd, Output& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--out", o.path, "Write the report to this file instead of stdout");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

struct SolverFlags {
  double tol = 1e-4;
  int max_iters = 5000;
  std::uint64_t seed = 0;
  int restarts = 20;

  FwOptions options() const {
    FwOptions o;
    o.tol_gap = tol;
    o.max_iters = max_iters;
    o.seed = seed;
    o.lmo_restarts = restarts;
    return o;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& s, double default_tol, int default_iters) {
  s.tol = default_tol;
  s.max_iters = default_iters;
  cmd->add_option("--tol", s.tol, "Duality-gap tolerance in bits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", s.max_iters, "Frank-Wolfe iteration limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", s.seed, "Seed for the randomized oracle")->required();
  cmd->add_option("--restarts", s.restarts, "Random restarts per oracle call")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

Dims parse_dims(const std::string& text) {
  Dims dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int d = std::stoi(item, &used);
      if (used != item.size() || d < 1) throw UsageError("");
      dims.push_back(d);
    } catch (const std::exception&) {
      throw UsageError("--dims must be a comma-separated list of positive integers");
    }
  }
  if (dims.empty()) throw UsageError("--dims must not be empty");
  return dims;
}

const std::vector<std::string>& battery_names() {
  static const std::vector<std::string> names{"phi",        "phi-table",        "classical-ext",
                                              "ssa",        "pinsker",          "continuity",
                                              "donald-horodecki", "pure-state"};
  return names;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::string phi_table_csv(const CheckReport& rep) {
  std::ostringstream os;
  os << "d,closed_form,lo_value,two_outcome_value,sweep_max,pass\n";
  for (const auto& r : rep.records) {
    os << r.values["d"].get<int>() << ',' << format_number(r.values["closed_form"].get<double>())
       << ',' << format_number(r.values["lo_value"].get<double>()) << ','
       << format_number(r.values["two_outcome_value"].get<double>()) << ','
       << format_number(r.values["sweep_max"].get<double>()) << ','
       << (r.violation ? "false" : "true") << '\n';
  }
  return os.str();
}

std::string report_text(const std::vector<CheckReport>& reports, const std::string& format) {
  if (format == "csv") return reports_csv(reports);
  if (reports.size() == 1) return reports.front().to_json().dump(2) + "\n";
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr.dump(2) + "\n";
}

int exit_for(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    if (!r.passed()) return kExitViolations;
  }
  return kExitOk;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + " must be a comma-separated list of numbers");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " must not be empty");
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement measures toolkit: separable-set solvers, Stein simulation and "
               "verification batteries"};
  app.name("entkit");
  app.require_subcommand(1);
  std::function<int()> action;

  // phi-table
  int dmax = 6;
  Output phi_out;
  auto* phi = app.add_subcommand("phi-table", "Measured relative entropy table for maximally entangled states");
  phi->add_option("--dmax", dmax, "Largest local dimension (2..6)")->capture_default_str();
  add_output(phi, phi_out, "csv");
  phi->callback([&] {
    action = [&] {
      if (dmax < 2 || dmax > 6) throw UsageError("--dmax must lie in [2, 6]");
      const CheckReport rep = check_phi_table(dmax);
      phi_out.write(out, phi_out.format == "csv" ? phi_table_csv(rep) : rep.to_json().dump(2) + "\n");
      return exit_for({rep});
    };
  });

  // ree
  std::string state_path;
  SolverFlags ree_flags;
  Output ree_out;
  auto* ree = app.add_subcommand("ree", "Relative entropy of entanglement of a bipartite state");
  ree->add_option("--state", state_path, "State JSON file")->required();
  add_solver_flags(ree, ree_flags, 1e-4, 5000);
  add_output(ree, ree_out, "json");
  ree->callback([&] {
    action = [&] {
      const DensityMatrix rho = state_from_json(read_json_file(state_path));
      const FwResult r = fw_ree(rho, ree_flags.options());
      ree_out.write(out, fw_result_to_json(r).dump(2) + "\n");
      return kExitOk;
    };
  });

  // measured-ree
  std::string mstate_path;
  std::string mpovm_path;
  SolverFlags mree_flags;
  Output mree_out;
  auto* mree = app.add_subcommand("measured-ree", "Measured relative entropy of entanglement for one POVM");
  mree->add_option("--state", mstate_path, "State JSON file")->required();
  mree->add_option("--povm", mpovm_path, "POVM JSON file")->required();
  add_solver_flags(mree, mree_flags, 1e-4, 5000);
  add_output(mree, mree_out, "json");
  mree->callback([&] {
    action = [&] {
      const DensityMatrix rho = state_from_json(read_json_file(mstate_path));
      const ParsedPovm m = povm_from_json(read_json_file(mpovm_path));
      const FwResult r = fw_measured_ree(m.povm, rho, mree_flags.options());
      Json j = fw_result_to_json(r);
      j["measurement_class"] = to_string(m.povm.tag());
      mree_out.write(out, j.dump(2) + "\n");
      return kExitOk;
    };
  });

  // stein
  std::string rho_path;
  std::string sigma_path;
  std::string stein_povm_path;
  std::string preset;
  int nmax = 6;
  double alpha = 0.05;
  std::size_t side_cap = kDisturbanceSideCap;
  int stein_jobs = 0;
  Output stein_out;
  auto* stein = app.add_subcommand("stein", "n-copy hypothesis-testing sweep with disturbance");
  stein->add_option("--preset", preset,
                    "Built-in pair: qubit-pair (Phi_2 vs isotropic(2,1/3), computational basis)")
      ->check(CLI::IsMember({"qubit-pair"}));
  stein->add_option("--rho", rho_path, "State JSON on [dA,dB] or [dA,dB,dE]");
  stein->add_option("--sigma", sigma_path, "Alternative-hypothesis state JSON");
  stein->add_option("--povm", stein_povm_path,
                    "ONE_LOCC POVM JSON (default: computational bases on A and B)");
  stein->add_option("--nmax", nmax, "Sweep n = 1..nmax")->check(CLI::PositiveNumber)->capture_default_str();
  stein->add_option("--alpha", alpha, "Target type-I error")->capture_default_str();
  stein->add_option("--side-cap", side_cap, "Largest B^nE^n side for the disturbance")
      ->capture_default_str();
  stein->add_option("--jobs", stein_jobs, "Worker threads (default: ENTKIT_JOBS or all cores)");
  stein_out.format = "csv";
  stein->add_option("--out", stein_out.path, "Write the CSV to this file instead of stdout");
  stein->callback([&] {
    action = [&] {
      std::optional<DensityMatrix> rho;
      std::optional<DensityMatrix> sigma;
      if (!preset.empty()) {
        if (!rho_path.empty() || !sigma_path.empty()) {
          throw UsageError("--preset cannot be combined with --rho/--sigma");
        }
        rho = tensor(max_entangled(2), maximally_mixed({1}));
        sigma = tensor(isotropic(2, 1.0 / 3.0), maximally_mixed({1}));
      } else {
        if (rho_path.empty() || sigma_path.empty()) {
          throw UsageError("stein needs --rho and --sigma (or --preset)");
        }
        rho = state_from_json(read_json_file(rho_path));
        sigma = state_from_json(read_json_file(sigma_path));
      }
      if (rho->parties() < 2) throw UsageError("stein needs states on [dA,dB] or [dA,dB,dE]");
      std::optional<OneWayLoccPovm> m;
      if (!stein_povm_path.empty()) {
        ParsedPovm parsed = povm_from_json(read_json_file(stein_povm_path));
        if (!parsed.one_way) throw UsageError("--povm must be a ONE_LOCC measurement with alice/bob parts");
        m = std::move(parsed.one_way);
      } else {
        m = product_basis_onelocc(rho->dims()[0], rho->dims()[1]);
      }
      if (!(alpha >= 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in [0, 1)");
      std::vector<int> ns(nmax);
      std::iota(ns.begin(), ns.end(), 1);
      SteinOptions so;
      so.disturbance_side_cap = side_cap;
      const auto reports = run_stein_sweep(*m, *rho, *sigma, ns, alpha, stein_jobs, so);
      stein_out.write(out, stein_csv(reports));
      return kExitOk;
    };
  });

  // harness
  std::string battery;
  std::size_t samples = 100;
  std::string dims_text;
  std::uint64_t seed = 0;
  int ensemble = 3;
  std::string eps_text = "0.01,0.05,0.1";
  int hdmax = 6;
  std::uint64_t family_seed = 7;
  int jobs = 0;
  double htol = 1e-3;
  int hiters = 2000;
  Output h_out;
  auto* harness = app.add_subcommand("harness", "Run one verification battery");
  harness->add_option("battery", battery, "Battery: " + join(battery_names()))->required();
  harness->add_option("--samples", samples, "Number of samples")->capture_default_str();
  harness->add_option("--dims", dims_text, "Subsystem dims, e.g. 2,2,2");
  harness->add_option("--seed", seed, "Base seed");
  harness->add_option("--ensemble", ensemble, "Ensemble size (classical-ext)")->capture_default_str();
  harness->add_option("--eps", eps_text, "Distance grid (continuity, donald-horodecki)")
      ->capture_default_str();
  harness->add_option("--dmax", hdmax, "Largest dimension (phi)")->capture_default_str();
  harness->add_option("--family-seed", family_seed, "Seed of the random family members")
      ->capture_default_str();
  harness->add_option("--jobs", jobs, "Worker threads (default: ENTKIT_JOBS or all cores)");
  harness->add_option("--tol", htol, "Solver duality-gap tolerance")->capture_default_str();
  harness->add_option("--max-iters", hiters, "Solver iteration limit")->capture_default_str();
  add_output(harness, h_out, "json");
  harness->callback([&] {
    action = [&] {
      const auto& names = battery_names();
      if (std::find(names.begin(), names.end(), battery) == names.end()) {
        throw UsageError("unknown battery '" + battery + "'; available: " + join(names));
      }
      HarnessOptions ho;
      ho.jobs = jobs;
      ho.fw.tol_gap = htol;
      ho.fw.max_iters = hiters;
      CheckReport rep;
      if (battery == "phi" || battery == "phi-table") {
        if (hdmax < 2 || hdmax > 6) throw UsageError("--dmax must lie in [2, 6]");
        rep = check_phi_table(hdmax, ho);
      } else {
        if (harness->count("--seed") == 0) throw UsageError("--seed is required for randomized batteries");
        if (samples == 0) throw UsageError("--samples must be positive");
        const bool tripartite = battery == "ssa" || battery == "pinsker";
        const Dims dims = dims_text.empty() ? (tripartite ? Dims{2, 2, 2} : Dims{2, 2}) : parse_dims(dims_text);
        if (dims.size() != (tripartite ? 3u : 2u)) {
          throw UsageError("battery '" + battery + "' needs " + (tripartite ? "3" : "2") + " dims");
        }
        const auto family = default_family(dims[0], dims[1], family_seed);
        if (battery == "classical-ext") {
          if (ensemble < 1) throw UsageError("--ensemble must be positive");
          rep = check_classical_extension_bound(samples, dims, ensemble, seed, ho);
        } else if (battery == "ssa") {
          rep = check_ssa_strengthening(samples, dims, one_way_members(family), seed, ho);
        } else if (battery == "pinsker") {
          rep = check_pinsker_chain(samples, dims, one_way_members(family), seed, ho);
        } else if (battery == "continuity") {
          rep = check_asymptotic_continuity(samples, dims, family, parse_list(eps_text, "--eps"), seed, ho);
        } else if (battery == "donald-horodecki") {
          rep = check_donald_horodecki(samples, dims, parse_list(eps_text, "--eps"), seed, ho);
        } else {
          rep = check_pure_state_entropy(samples, dims, family, seed, ho);
        }
      }
      h_out.write(out, report_text({rep}, h_out.format));
      return exit_for({rep});
    };
  });

  // continuity: both continuity batteries on one grid
  std::size_t c_samples = 50;
  std::string c_dims = "2,2";
  std::uint64_t c_seed = 0;
  std::string c_eps = "0.01,0.05,0.1";
  int c_jobs = 0;
  Output c_out;
  auto* cont = app.add_subcommand("continuity", "Asymptotic-continuity and Donald-Horodecki batteries");
  cont->add_option("--samples", c_samples, "Pairs per battery")->capture_default_str();
  cont->add_option("--dims", c_dims, "Bipartite dims")->capture_default_str();
  cont->add_option("--seed", c_seed, "Base seed")->required();
  cont->add_option("--eps", c_eps, "Distance grid")->capture_default_str();
  cont->add_option("--jobs", c_jobs, "Worker threads (default: ENTKIT_JOBS or all cores)");
  add_output(cont, c_out, "csv");
  cont->callback([&] {
    action = [&] {
      if (c_samples == 0) throw UsageError("--samples must be positive");
      const Dims dims = parse_dims(c_dims);
      if (dims.size() != 2) throw UsageError("continuity needs 2 dims");
      const auto grid = parse_list(c_eps, "--eps");
      HarnessOptions ho;
      ho.jobs = c_jobs;
      const auto family = default_family(dims[0], dims[1], 7);
      std::vector<CheckReport> reps;
      reps.push_back(check_asymptotic_continuity(c_samples, dims, family, grid, c_seed, ho));
      reps.push_back(check_donald_horodecki(c_samples, dims, grid, c_seed, ho));
      c_out.write(out, report_text(reps, c_out.format));
      return exit_for(reps);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionCapError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace entkit
