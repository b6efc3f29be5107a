#ifndef TF_SCENARIO_HPP
#define TF_SCENARIO_HPP

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diagnostics.hpp"
#include "stepper.hpp"

namespace tf {

/** Flat key-value scenario description (INI-style sections). Unknown keys
 * are rejected. */
struct ScenarioConfig {
    std::string raw;
    std::string name = "scenario";

    double a = 0.0, b = 1.0;
    int grid_n = 128;

    double n_exp = 2.0, s = 0.75, eps = 1e-6;
    std::optional<double> anchor; // default: mean of u0

    double u0_mean = 1.0;
    std::vector<std::pair<int, double>> u0_modes; // orthonormal-basis coefficients

    std::string forcing_kind = "constant"; // constant | spatial | spacetime
    double s0 = 0.0;
    double f_mean = 0.0;
    std::vector<std::pair<int, double>> f_modes;
    double a1 = 0.0, sigma = 1.5;

    double tau = 1e-2, t_end = 1.0;
    int checkpoint_stride = 0;

    double newton_tol = 1e-12;
    int max_newton = 50;
    double tau_min = 1e-6;
    bool forcing_sample_end = false;

    std::string theorem = "none"; // none | 1.1 | 1.2 | 1.3
    double fit_start_fraction = 0.5;
    int embedding_draws = 2000;
    std::uint64_t seed = 1234;

    static ScenarioConfig from_string(const std::string& text, const std::string& name);
    static ScenarioConfig from_file(const std::string& path);

    Field initial_state(const DomainPtr& d) const;
    ForcingSpec forcing_spec(const DomainPtr& d) const;
};

struct ScenarioResult {
    Trajectory traj;
    std::vector<CheckResult> checks;
    nlohmann::json verdict;
    bool admissible = true;
    bool ok = true; // every check passes or is hypothesis-violated
};

/** Run a scenario; when outdir is nonempty, write trajectory.csv,
 * verdict.json, manifest.json and a final checkpoint there. */
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& outdir = "");

/** Continue a checkpointed run to its configured end time. */
ScenarioResult resume_scenario(const std::string& checkpoint_path, const std::string& outdir = "");

void write_checkpoint(const ScenarioConfig& cfg, const Trajectory& tr, std::size_t step_index,
                      const std::string& path);

/** Randomized verification of the auxiliary inequalities (comparison ODE
 * envelopes, weighted interpolation, Poincare, seminorm interpolation,
 * embedding constants). Returns a JSON report with a top-level "pass". */
nlohmann::json verify_lemmas(std::uint64_t seed, int draws);

/** Emit a (t, x_rk4, envelope) CSV for the comparison ODE. sigma > 0 uses
 * the decaying-coefficient envelope, sigma == 0 the constant-coefficient
 * one. */
void ode_envelope_csv(double lambda, double p, double beta, double a1, double sigma, double x0,
                      double t_end, double dt, const std::string& path);

} // namespace tf

#endif
