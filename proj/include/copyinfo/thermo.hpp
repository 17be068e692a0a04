#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "copyinfo/prob.hpp"

namespace copyinfo {

/// Physical constants for the work bounds. All information quantities in
/// this module are accumulated in nats and scaled by kT.
struct ThermoConfig {
    double boltzmann_k = 1.0;
    double temperature = 1.0;
    double kT() const;
};

struct StateWork {
    double min_work = 0.0;             // kT * D(posterior || equilibrium)
    double min_exact_copy_work = 0.0;  // kT * D^copy vs the equilibrium
    double excess_bound = 0.0;         // kT * D^trans vs the equilibrium
};

struct EnsembleWork {
    double mean_min_work = 0.0;        // kT * [I + D(p_Y || equilibrium)]
    double mean_exact_min_work = 0.0;  // kT * [I^copy + D(p_Y || equilibrium)]
    double excess_bound = 0.0;         // kT * I^trans
    std::optional<double> thermo_efficiency;  // I^copy / I when equilibrium == marginal
};

struct WorkBounds {
    std::vector<std::string> states;  // source symbols, alphabet order
    std::vector<StateWork> per_state;
    EnsembleWork ensemble;
    double kT = 1.0;
};

/// Minimum work to drive the equilibrium into `posterior`.
double min_work_state(const Distribution& posterior, const Distribution& equilibrium,
                      const ThermoConfig& cfg);

/// Minimum work over all processes whose exact-copy probability of x is at
/// least posterior(x).
double min_exact_copy_work(const Distribution& posterior, const Distribution& equilibrium,
                           std::string_view x, const ThermoConfig& cfg);

double excess_work_bound_state(const Distribution& posterior, const Distribution& equilibrium,
                               std::string_view x, const ThermoConfig& cfg);

WorkBounds ensemble_bounds(const Channel& ch, const Distribution& source,
                           const Distribution& equilibrium, const ThermoConfig& cfg);

}  // namespace copyinfo
