#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "igfade/montecarlo.hpp"
#include "igfade/shadowing.hpp"

namespace igfade {

/// Paper: t = 20 t_dB / ln 10. Conventional: t = t_dB ln 10 / 20,
/// Paper: t = 20 t_dB / ln 10 as printed. Conventional: t = t_dB ln 10 / 20,
/// the natural log of the amplitude whose level is t_dB.
enum class DbDirection { Paper, Conventional };

struct FitOptions {
    bool integer_m = false;        ///< inverse gamma only: restrict m to integers
    std::size_t multistart = 8;    ///< simplex runs from a lattice around the moment estimate
    double support_pad = 5.0;      ///< log-units added beyond the data on each side
    std::size_t max_iterations = 2000;  ///< per simplex run
};

struct FitResult {
    ShadowingFamily family = ShadowingFamily::Lognormal;
    ShadowingModel params;
    double cvm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool integer_m = false;
    std::string error;  ///< set when the fit could not be carried out
};

namespace fitting {

/// Integral of (F-hat(t) - F(t))^2 over [t_min - pad, t_max + pad]. Each step of
/// the eCDF is integrated by Simpson's rule on panels no wider than 1/2000 of the
/// data range; the two pads use adaptive quadrature.
double cvm_statistic(const EmpiricalCdf& ecdf, const std::function<double(double)>& theory, double support_pad = 5.0);

/// Minimizes cvm_statistic over the family's parameter box. `log_ecdf` holds
/// natural-log data. Never throws for optimizer trouble: converged=false instead.
FitResult fit(ShadowingFamily family, const EmpiricalCdf& log_ecdf, const FitOptions& options = {});

double db_to_natural_log(double t_db, DbDirection direction = DbDirection::Paper);

/// Fits every family (plus the integer-m inverse gamma when requested) and sorts
/// by ascending cvm. Failed fits carry `error` and sort last.
std::vector<FitResult> compare_families(const EmpiricalCdf& log_ecdf, std::span<const ShadowingFamily> families,
                                        const FitOptions& options = {});

/// "inverse-gamma", or "inverse-gamma (integer m)" for constrained fits.
std::string label(const FitResult& result);

}  // namespace fitting
}  // namespace igfade
