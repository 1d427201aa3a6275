#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "igfade/numerics.hpp"

namespace igfade {

// Baseline fast-fading models, parameterized by the mean power omega_x = E[X].

struct Rayleigh {
    double omega_x = 1.0;
};

struct Rician {
    double k_r = 0.0;  ///< Rice factor K >= 0
    double omega_x = 1.0;
};

struct NakagamiM {
    double m_f = 1.0;  ///< shape, >= 0.5
    double omega_x = 1.0;
};

struct Hoyt {
    double q = 1.0;  ///< in (0, 1]
    double omega_x = 1.0;
};

struct KappaMu {
    double kappa = 0.0;
    double mu = 1.0;
    double omega_x = 1.0;
};

/// eta-mu in format 1: eta is the in-phase/quadrature power ratio, in (0, 1].
struct EtaMu {
    double eta = 1.0;
    double mu = 0.5;
    double omega_x = 1.0;
};

struct KappaMuShadowed {
    double kappa = 0.0;
    double mu = 1.0;
    double m_f = 1.0;
    double omega_x = 1.0;
};

/// Two-wave with diffuse power; omega_x is Omega_T = V1^2 + V2^2 + 2 sigma^2.
struct TWDP {
    double k_r = 0.0;
    double delta = 0.0;  ///< in [0, 1]
    double omega_x = 1.0;
};

using FadingModel =
    std::variant<Rayleigh, Rician, NakagamiM, Hoyt, KappaMu, EtaMu, KappaMuShadowed, TWDP>;

struct GammaComponent {
    double weight = 0.0;
    double shape = 1.0;
    double omega = 1.0;  ///< component mean
};

/// pdf(x) = prefactor * sum_i weight_i * gamma_pdf(shape_i, omega_i; x).
struct GammaMixture {
    std::vector<GammaComponent> terms;
    double prefactor = 1.0;
    /// Weight mass left out by truncation, 1 - prefactor * sum_i weight_i.
    double truncation_error_bound = 0.0;
};

/// Small-x law F_X(x) ~ alpha / (beta + 1) * (x / omega_x)^(beta + 1).
struct TailParams {
    double alpha = 1.0;
    double beta = 0.0;
};

/// TWDP physical parameters recovered from (K, Delta, Omega_T); v1 >= v2.
struct TwdpPhysical {
    double v1 = 0.0;
    double v2 = 0.0;
    double sigma2 = 0.0;  ///< per-dimension diffuse variance
};

namespace fading {

void validate(const FadingModel& model);
std::string name(const FadingModel& model);
double mean_power(const FadingModel& model);
FadingModel with_mean_power(const FadingModel& model, double omega_x);

/// Generalized MGF E[X^p e^{sX}] for p >= 0, s <= 0.
/// TWDP uses the finite closed form for small integer p and the single
/// periodic integral otherwise.
double gmgf(const FadingModel& model, double p, double s, const Tolerance& tol = {});
/// ln E[X^p e^{sX}], evaluated without forming the (possibly huge or tiny) value.
/// TWDP always goes through the periodic integral, for any real p.
double log_gmgf(const FadingModel& model, double p, double s, const Tolerance& tol = {});
/// E[X^p e^{sX}] by quadrature of x^p e^{sx} pdf(x) over (0, inf).
Estimate gmgf_numeric(const FadingModel& model, double p, double s, const Tolerance& tol = {});

double pdf(const FadingModel& model, double x, const Tolerance& tol = {});
double cdf(const FadingModel& model, double x, const Tolerance& tol = {});

bool has_gamma_mixture(const FadingModel& model);
/// Throws UnsupportedError for Hoyt and eta-mu.
GammaMixture gamma_mixture(const FadingModel& model, const Tolerance& tol = {});

TailParams tail_params(const FadingModel& model);

TwdpPhysical twdp_physical(const TWDP& model);

/// `count` draws of the power X; deterministic for a given seed.
std::vector<double> sample(const FadingModel& model, std::size_t count, std::uint64_t seed);

}  // namespace fading
}  // namespace igfade
