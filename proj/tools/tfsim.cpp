#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "thinfilm.h"

namespace {

int run_configs(const std::vector<std::string>& configs, const std::string& outbase, int jobs) {
    std::atomic<size_t> next{0};
    std::atomic<int> failures{0};
    std::vector<std::string> lines(configs.size());

    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            std::string stem = std::filesystem::path(configs[i]).stem().string();
            std::string outdir = outbase.empty() ? stem + "_out" : outbase + "/" + stem;
            int failed = 0;
            tf_status st = tf_run_scenario(configs[i].c_str(), outdir.c_str(), &failed);
            if (st == TF_OK) {
                lines[i] = "PASS " + stem + " -> " + outdir;
            } else if (st == TF_ERR_CHECKS_FAILED) {
                lines[i] = "FAIL " + stem + " (" + std::to_string(failed) +
                           " checks failed) -> " + outdir;
                failures++;
            } else {
                lines[i] = std::string("ERROR ") + stem + ": " + tf_status_name(st);
                failures++;
            }
        }
    };

    jobs = std::max(1, std::min<int>(jobs, (int)configs.size()));
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; j++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& l : lines) std::printf("%s\n", l.c_str());
    return failures.load() == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thin-film fractional-diffusion simulator and diagnostics"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one or more scenario configs");
    std::vector<std::string> configs;
    std::string outbase;
    int jobs = 1;
    run->add_option("configs", configs, "scenario config files")->required();
    run->add_option("-o,--output-dir", outbase, "base directory for per-scenario outputs");
    run->add_option("-j,--jobs", jobs, "number of parallel scenario runs");

    auto* verify = app.add_subcommand("verify-lemmas", "randomized inequality verification");
    unsigned long long seed = 1234;
    int draws = 50;
    std::string report = "lemma_report.json";
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--draws", draws, "draws per inequality family");
    verify->add_option("--report", report, "JSON report path");

    auto* resume = app.add_subcommand("resume", "continue a checkpointed run");
    std::string checkpoint, resume_out;
    resume->add_option("checkpoint", checkpoint, "checkpoint file")->required();
    resume->add_option("-o,--output-dir", resume_out, "output directory");

    auto* ode = app.add_subcommand("ode-envelope", "comparison-ODE trajectory vs envelope CSV");
    double lambda = 0.0, p = 2.0, beta = -1.0, a1 = 1.0, sigma = 2.0, x0 = 0.5, t_end = 50.0,
           dt = 1e-3;
    std::string csv = "ode_envelope.csv";
    ode->add_option("--lambda", lambda, "exponent of the growth term");
    ode->add_option("--p", p, "exponent of the damping term");
    ode->add_option("--beta", beta, "damping coefficient (negative)");
    ode->add_option("--a1", a1, "growth coefficient");
    ode->add_option("--sigma", sigma, "decay rate of the growth coefficient, 0 for constant");
    ode->add_option("--x0", x0, "initial value");
    ode->add_option("--t-end", t_end, "integration horizon");
    ode->add_option("--dt", dt, "RK4 step");
    ode->add_option("--csv", csv, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_configs(configs, outbase, jobs);

    if (verify->parsed()) {
        tf_status st = tf_verify_lemmas(seed, draws, report.c_str());
        if (st == TF_OK) {
            std::printf("PASS lemma verification (report: %s)\n", report.c_str());
            return 0;
        }
        if (st == TF_ERR_CHECKS_FAILED) {
            std::printf("FAIL lemma verification (report: %s)\n", report.c_str());
            return 1;
        }
        std::fprintf(stderr, "error: %s: %s\n", tf_status_name(st), tf_last_error());
        return 2;
    }

    if (resume->parsed()) {
        int failed = 0;
        tf_status st = tf_resume(checkpoint.c_str(), resume_out.empty() ? nullptr : resume_out.c_str(),
                                 &failed);
        if (st == TF_OK) {
            std::printf("PASS resumed run\n");
            return 0;
        }
        if (st == TF_ERR_CHECKS_FAILED) {
            std::printf("FAIL resumed run (%d checks failed)\n", failed);
            return 1;
        }
        std::fprintf(stderr, "error: %s: %s\n", tf_status_name(st), tf_last_error());
        return 2;
    }

    if (ode->parsed()) {
        tf_status st = tf_ode_envelope_csv(lambda, p, beta, a1, sigma, x0, t_end, dt, csv.c_str());
        if (st != TF_OK) {
            std::fprintf(stderr, "error: %s: %s\n", tf_status_name(st), tf_last_error());
            return 2;
        }
        std::printf("wrote %s\n", csv.c_str());
        return 0;
    }
    return 2;
}
