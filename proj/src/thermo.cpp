#include "copyinfo/thermo.hpp"

#include <cmath>
#include <limits>

#include "copyinfo/decomp.hpp"

namespace copyinfo {

namespace {

void require_shared(const Distribution& a, const Distribution& b) {
    if (a.alphabet() != b.alphabet())
        throw AlphabetMismatch("posterior and equilibrium must share an alphabet");
}

}  // namespace

double ThermoConfig::kT() const {
    if (!(boltzmann_k > 0.0) || !(temperature > 0.0))
        throw OutOfRange("boltzmann_k and temperature must be positive");
    return boltzmann_k * temperature;
}

double min_work_state(const Distribution& posterior, const Distribution& equilibrium,
                      const ThermoConfig& cfg) {
    require_shared(posterior, equilibrium);
    return cfg.kT() * detail::kl_nats(posterior.weights(), equilibrium.weights());
}

double min_exact_copy_work(const Distribution& posterior, const Distribution& equilibrium,
                           std::string_view x, const ThermoConfig& cfg) {
    require_shared(posterior, equilibrium);
    std::size_t idx = equilibrium.alphabet().index_of(x);
    return cfg.kT() *
           detail::copy_info_nats(posterior.weights(), equilibrium.weights(), idx);
}

double excess_work_bound_state(const Distribution& posterior, const Distribution& equilibrium,
                               std::string_view x, const ThermoConfig& cfg) {
    require_shared(posterior, equilibrium);
    std::size_t idx = equilibrium.alphabet().index_of(x);
    double kl = detail::kl_nats(posterior.weights(), equilibrium.weights());
    double copy = detail::copy_info_nats(posterior.weights(), equilibrium.weights(), idx);
    if (std::isinf(kl) && std::isinf(copy))
        throw IndeterminateInfinity("work bound and exact-copy bound are both infinite");
    return cfg.kT() * std::max(0.0, kl - copy);
}

WorkBounds ensemble_bounds(const Channel& ch, const Distribution& source,
                           const Distribution& equilibrium, const ThermoConfig& cfg) {
    if (!ch.square())
        throw NonSquareChannel("ensemble_bounds requires a square channel");
    if (source.alphabet() != ch.source_alphabet())
        throw AlphabetMismatch("source distribution does not match channel alphabet");
    if (equilibrium.alphabet() != ch.dest_alphabet())
        throw AlphabetMismatch("equilibrium distribution does not match channel alphabet");

    const double kT = cfg.kT();
    DecompositionReport decomp = decompose_channel(ch, source, InfoBase::nats);

    WorkBounds bounds;
    bounds.kT = kT;
    bounds.states = ch.source_alphabet().labels();
    bounds.per_state.reserve(ch.source_size());
    for (std::size_t x = 0; x < ch.source_size(); ++x) {
        auto row = ch.row(x);
        double kl = detail::kl_nats(row, equilibrium.weights());
        double copy = detail::copy_info_nats(row, equilibrium.weights(), x);
        StateWork w;
        w.min_work = kT * kl;
        w.min_exact_copy_work = kT * copy;
        w.excess_bound = std::isinf(kl) && std::isinf(copy)
                             ? std::numeric_limits<double>::quiet_NaN()
                             : kT * std::max(0.0, kl - copy);
        bounds.per_state.push_back(w);
    }

    double marginal_gap = detail::kl_nats(decomp.marginal.weights(), equilibrium.weights());
    bounds.ensemble.mean_min_work = kT * (decomp.total_mi + marginal_gap);
    bounds.ensemble.mean_exact_min_work = kT * (decomp.total_copy + marginal_gap);
    bounds.ensemble.excess_bound = kT * decomp.total_trans;

    double max_diff = 0.0;
    for (std::size_t y = 0; y < equilibrium.size(); ++y)
        max_diff = std::max(max_diff, std::abs(equilibrium[y] - decomp.marginal[y]));
    if (max_diff <= 1e-12 && decomp.total_mi > 0.0)
        bounds.ensemble.thermo_efficiency = decomp.total_copy / decomp.total_mi;
    return bounds;
}

}  // namespace copyinfo
