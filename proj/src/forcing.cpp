#include "forcing.hpp"

#include <cmath>

namespace tf {

double ForcingSpec::time_factor(double t) const {
    switch (kind) {
        case Kind::Constant:
        case Kind::Spatial: return 1.0;
        case Kind::SpaceTime: return a1 / (2.0 * std::pow(1.0 + t, sigma));
    }
    return 0.0;
}

Field ForcingSpec::evaluate(const DomainPtr& d, double t) const {
    if (kind == Kind::Constant) return Field::constant(d, s0);
    Vec c = Vec::Zero(d->size());
    for (int k = 0; k < (int)coeffs.size() && k < d->size(); k++) c[k] = coeffs[k];
    return time_factor(t) * Field::from_coeff(d, std::move(c));
}

double ForcingSpec::seminorm(const FractionalOps& ops, double t) const {
    if (kind == Kind::Constant) return 0.0;
    double acc = 0.0;
    for (int k = 1; k < (int)coeffs.size(); k++)
        acc += coeffs[k] * coeffs[k] * std::pow(ops.domain()->lambda(k), ops.s());
    return time_factor(t) * std::sqrt(acc);
}

double ForcingSpec::mass_rate(const DomainPtr& d, double t) const {
    if (kind == Kind::Constant) return s0 * d->length();
    double c0 = coeffs.empty() ? 0.0 : coeffs[0];
    return time_factor(t) * c0 * std::sqrt(d->length());
}

bool ForcingSpec::admissible(const FractionalOps& ops, double c_emb, double t_end,
                             int samples) const {
    if (kind == Kind::Constant) return s0 >= 0.0;
    const auto& d = ops.domain();
    for (int i = 0; i <= samples; i++) {
        double t = t_end * i / std::max(1, samples);
        double lhs = seminorm(ops, t);
        double rhs = mass_rate(d, t) / (d->length() * c_emb);
        if (lhs > rhs) return false;
        if (kind == Kind::Spatial) break; // time-independent
    }
    return true;
}

} // namespace tf
