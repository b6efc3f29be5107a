#include "thinfilm.h"

#include <cstring>
#include <fstream>
#include <string>

#include "scenario.hpp"

namespace {

thread_local std::string g_last_error;

tf_status fail(tf_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn> tf_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        return fail(TF_ERR_INVALID_ARGUMENT, e.what());
    } catch (const tf::SolverError& e) {
        return fail(TF_ERR_SOLVER, e.what());
    } catch (const std::runtime_error& e) {
        return fail(TF_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(TF_ERR_INTERNAL, e.what());
    }
}

} // namespace

struct tf_grid {
    tf::DomainPtr dom;
};
struct tf_field {
    tf::Field field;
};
struct tf_ops {
    std::shared_ptr<tf::FractionalOps> ops;
};

extern "C" {

const char* tf_status_name(tf_status status) {
    switch (status) {
        case TF_OK: return "ok";
        case TF_ERR_INVALID_ARGUMENT: return "invalid argument";
        case TF_ERR_IO: return "io error";
        case TF_ERR_CONFIG: return "config error";
        case TF_ERR_SOLVER: return "solver error";
        case TF_ERR_CHECKS_FAILED: return "checks failed";
        case TF_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* tf_last_error(void) { return g_last_error.c_str(); }

tf_status tf_grid_create(double a, double b, int n, tf_grid** out) {
    if (!out) return fail(TF_ERR_INVALID_ARGUMENT, "null out pointer");
    return guarded([&] {
        *out = new tf_grid{std::make_shared<tf::Domain>(a, b, n)};
        return TF_OK;
    });
}

void tf_grid_destroy(tf_grid* g) { delete g; }

int tf_grid_size(const tf_grid* g) { return g ? g->dom->size() : 0; }

tf_status tf_grid_nodes(const tf_grid* g, double* nodes) {
    if (!g || !nodes) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    for (int j = 0; j < g->dom->size(); j++) nodes[j] = g->dom->node(j);
    return TF_OK;
}

tf_status tf_field_from_nodal(const tf_grid* g, const double* values, tf_field** out) {
    if (!g || !values || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        tf::Vec v = Eigen::Map<const tf::Vec>(values, g->dom->size());
        *out = new tf_field{tf::Field::from_nodal(g->dom, std::move(v))};
        return TF_OK;
    });
}

tf_status tf_field_from_coeff(const tf_grid* g, const double* coeff, tf_field** out) {
    if (!g || !coeff || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        tf::Vec v = Eigen::Map<const tf::Vec>(coeff, g->dom->size());
        *out = new tf_field{tf::Field::from_coeff(g->dom, std::move(v))};
        return TF_OK;
    });
}

tf_status tf_field_nodal(const tf_field* f, double* out) {
    if (!f || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    const tf::Vec& v = f->field.nodal();
    std::memcpy(out, v.data(), sizeof(double) * v.size());
    return TF_OK;
}

tf_status tf_field_coeff(const tf_field* f, double* out) {
    if (!f || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    const tf::Vec& v = f->field.coeff();
    std::memcpy(out, v.data(), sizeof(double) * v.size());
    return TF_OK;
}

tf_status tf_field_mass(const tf_field* f, double* out) {
    if (!f || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    *out = f->field.mass();
    return TF_OK;
}

void tf_field_destroy(tf_field* f) { delete f; }

tf_status tf_ops_create(const tf_grid* g, double s, tf_ops** out) {
    if (!g || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new tf_ops{std::make_shared<tf::FractionalOps>(g->dom, s)};
        return TF_OK;
    });
}

void tf_ops_destroy(tf_ops* o) { delete o; }

tf_status tf_ops_apply(const tf_ops* o, const tf_field* f, tf_field** out) {
    if (!o || !f || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new tf_field{o->ops->apply_I(f->field)};
        return TF_OK;
    });
}

tf_status tf_ops_solve(const tf_ops* o, const tf_field* g, tf_field** out) {
    if (!o || !g || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new tf_field{o->ops->solve_poisson(g->field)};
        return TF_OK;
    });
}

tf_status tf_ops_seminorm_sq(const tf_ops* o, const tf_field* f, double sigma, double* out) {
    if (!o || !f || !out) return fail(TF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = o->ops->seminorm_sq(f->field, sigma);
        return TF_OK;
    });
}

tf_status tf_run_scenario(const char* config_path, const char* output_dir, int* checks_failed) {
    if (!config_path) return fail(TF_ERR_INVALID_ARGUMENT, "null config path");
    return guarded([&]() -> tf_status {
        tf::ScenarioConfig cfg;
        try {
            cfg = tf::ScenarioConfig::from_file(config_path);
        } catch (const std::invalid_argument& e) {
            return fail(TF_ERR_CONFIG, e.what());
        }
        tf::ScenarioResult res = tf::run_scenario(cfg, output_dir ? output_dir : "");
        int failed = 0;
        for (const auto& c : res.checks)
            if (!c.pass && !c.hypothesis_violated) failed++;
        if (checks_failed) *checks_failed = failed;
        if (failed > 0) return fail(TF_ERR_CHECKS_FAILED, "scenario checks failed");
        return TF_OK;
    });
}

tf_status tf_resume(const char* checkpoint_path, const char* output_dir, int* checks_failed) {
    if (!checkpoint_path) return fail(TF_ERR_INVALID_ARGUMENT, "null checkpoint path");
    return guarded([&]() -> tf_status {
        tf::ScenarioResult res =
            tf::resume_scenario(checkpoint_path, output_dir ? output_dir : "");
        int failed = 0;
        for (const auto& c : res.checks)
            if (!c.pass && !c.hypothesis_violated) failed++;
        if (checks_failed) *checks_failed = failed;
        if (failed > 0) return fail(TF_ERR_CHECKS_FAILED, "scenario checks failed");
        return TF_OK;
    });
}

tf_status tf_verify_lemmas(unsigned long long seed, int draws, const char* report_path) {
    if (draws <= 0) return fail(TF_ERR_INVALID_ARGUMENT, "draws must be positive");
    return guarded([&]() -> tf_status {
        nlohmann::json rep = tf::verify_lemmas(seed, draws);
        if (report_path) {
            std::ofstream f(report_path);
            if (!f) return fail(TF_ERR_IO, std::string("cannot write ") + report_path);
            f << rep.dump(2) << "\n";
        }
        if (!rep["pass"].get<bool>()) return fail(TF_ERR_CHECKS_FAILED, "lemma checks failed");
        return TF_OK;
    });
}

tf_status tf_ode_envelope_csv(double lambda, double p, double beta, double a1, double sigma,
                              double x0, double t_end, double dt, const char* csv_path) {
    if (!csv_path) return fail(TF_ERR_INVALID_ARGUMENT, "null path");
    return guarded([&] {
        tf::ode_envelope_csv(lambda, p, beta, a1, sigma, x0, t_end, dt, csv_path);
        return TF_OK;
    });
}

} // extern "C"
