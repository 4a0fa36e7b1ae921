#pragma once

// Closed-form building blocks of the influence model: exponential decay,
// the Pareto intent-match density and the unit-mean affine impact function.

namespace jim {

// alpha * exp(-alpha * dt)
[[nodiscard]] double decay(double alpha, double dt);

// 1 - exp(-alpha * dt), the integral of decay() over [0, dt].
[[nodiscard]] double cumulative_decay(double alpha, double dt);

[[nodiscard]] double pareto_pdf(double rho, double mu, double x);
[[nodiscard]] double pareto_log_pdf(double rho, double mu, double x);
[[nodiscard]] double pareto_mean(double rho, double mu);

// Inverse of the survival function: maps u in (0, 1] to a Pareto draw.
[[nodiscard]] double pareto_from_survival(double rho, double mu, double u);

// Multiplier in front of (phi + psi x). Equals (rho-1)/(phi(rho-1) + psi mu),
// the (rho-2) factors of the textbook form having cancelled.
[[nodiscard]] double impact_scale(double rho, double mu, double phi, double psi);

// Affine impact of a point with mark x; has mean exactly 1 under the
// Pareto(rho, mu) mark density.
[[nodiscard]] double impact(double rho, double mu, double phi, double psi, double x);

} // namespace jim
