#pragma once

#include <string>
#include <vector>

#include "ekfrac/density.hpp"
#include "ekfrac/function.hpp"

namespace ekfrac {

/// Unit exponential e^{-t}.
TestFunction exp1_density();
/// Gamma(k, 1) density t^{k-1} e^{-t} / Gamma(k).
TestFunction gamma_density(double k);
/// t^k on (0, inf); not a density.
TestFunction power_function(double k);
/// e^t on (0, inf); not a density and not integrable at infinity.
TestFunction exp_growth();

/// Function by registry name:
///   exp1, gamma:k, uniform, beta1:lambda,alpha, pow:k, expgrow,
///   pathway:g=..,d=..,e=..,a=..,q=..[,kind=1|2]
/// Throws DomainError for unknown names or bad parameters.
TestFunction lookup_function(const std::string& name);

/// Density by registry name (see lookup_function); the function is checked
/// with check_registration first. Throws DomainError for non-densities.
Density lookup_density(const std::string& name);

struct RegistryEntry {
    std::string pattern;
    std::string description;
    bool density = false;
};

std::vector<RegistryEntry> registry_entries();

struct RegistrationReport {
    double mass_error = 0.0;         ///< |int f - 1| for densities, 0 otherwise
    double mellin_max_error = 0.0;   ///< max relative gap of closed vs numeric f* over the probes
    std::size_t mellin_probes = 0;
};

/// Checks that a density integrates to 1 within 1e-8 and that a closed-form
/// Mellin transform matches the numeric one within 1e-8 at three probe points
/// in the strip. Throws DomainError on failure.
RegistrationReport check_registration(const TestFunction& f);

}  // namespace ekfrac
