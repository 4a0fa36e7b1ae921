#include "jim/kernels.hpp"

#include "jim/errors.hpp"

#include <cmath>

namespace jim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw DomainError(what);
    }
}

void check_pareto(double rho, double mu) {
    require(std::isfinite(rho) && rho > 2.0, "Pareto shape must exceed 2");
    require(std::isfinite(mu) && mu > 0.0, "Pareto scale must be positive");
}

} // namespace

double decay(double alpha, double dt) {
    require(std::isfinite(alpha) && alpha > 0.0, "decay rate must be positive");
    require(dt >= 0.0, "elapsed time must be non-negative");
    return alpha * std::exp(-alpha * dt);
}

double cumulative_decay(double alpha, double dt) {
    require(std::isfinite(alpha) && alpha > 0.0, "decay rate must be positive");
    require(dt >= 0.0, "elapsed time must be non-negative");
    return -std::expm1(-alpha * dt);
}

double pareto_pdf(double rho, double mu, double x) {
    return std::exp(pareto_log_pdf(rho, mu, x));
}

double pareto_log_pdf(double rho, double mu, double x) {
    check_pareto(rho, mu);
    require(std::isfinite(x) && x >= 0.0, "mark must be non-negative");
    return std::log(rho) + rho * std::log(mu) - (rho + 1.0) * std::log(x + mu);
}

double pareto_mean(double rho, double mu) {
    check_pareto(rho, mu);
    return mu / (rho - 1.0);
}

double pareto_from_survival(double rho, double mu, double u) {
    check_pareto(rho, mu);
    require(u > 0.0 && u <= 1.0, "survival probability must lie in (0, 1]");
    return mu * std::expm1(-std::log(u) / rho);
}

double impact_scale(double rho, double mu, double phi, double psi) {
    check_pareto(rho, mu);
    require(phi >= 0.0 && psi >= 0.0, "impact coefficients must be non-negative");
    if (!(phi + psi > 0.0)) {
        throw DomainError("degenerate impact: phi + psi must be positive");
    }
    return (rho - 1.0) / (phi * (rho - 1.0) + psi * mu);
}

double impact(double rho, double mu, double phi, double psi, double x) {
    const double scale = impact_scale(rho, mu, phi, psi);
    require(std::isfinite(x) && x >= 0.0, "mark must be non-negative");
    return scale * (phi + psi * x);
}

} // namespace jim
