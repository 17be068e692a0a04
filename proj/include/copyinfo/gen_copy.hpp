#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "copyinfo/decomp.hpp"
#include "copyinfo/prob.hpp"

namespace copyinfo {

/// Scalar or vector-valued loss l_i(x, y) over source x destination alphabets.
/// Entries must be finite; component i is stored row-major.
class LossFunction {
public:
    LossFunction(Alphabet source, Alphabet dest,
                 std::vector<std::vector<std::vector<double>>> components);

    const Alphabet& source_alphabet() const noexcept { return source_; }
    const Alphabet& dest_alphabet() const noexcept { return dest_; }
    std::size_t arity() const noexcept { return components_.size(); }

    double value(std::size_t component, std::size_t x, std::size_t y) const {
        return components_[component][x * dest_.size() + y];
    }
    std::span<const double> row(std::size_t component, std::size_t x) const {
        return {components_[component].data() + x * dest_.size(), dest_.size()};
    }
    const std::vector<double>& component_flat(std::size_t component) const {
        return components_[component];
    }

private:
    Alphabet source_;
    Alphabet dest_;
    std::vector<std::vector<double>> components_;  // flattened |source| x |dest|
};

enum class BuiltinLoss { zero_one, squared_error };

/// zero_one: 1 - delta(x, y), alphabets must be equal.
/// squared_error: (x - y)^2 on numeric labels (parsed from the alphabet
/// labels unless explicit values are given).
LossFunction builtin_loss(BuiltinLoss kind, const Alphabet& source, const Alphabet& dest,
                          std::optional<std::vector<double>> source_values = std::nullopt,
                          std::optional<std::vector<double>> dest_values = std::nullopt);

/// Result of a constrained minimum cross-entropy solve.
///
/// `feasible == false` means the targets are unreachable within the prior
/// support (the posterior had mass outside it); `value` is then +inf and the
/// optimizer is the limiting tilt.
struct TiltedSolution {
    Distribution optimizer;
    std::vector<double> multipliers;  // natural-log tilt parameters, >= 0
    double value = 0.0;               // G^copy in the requested base
    std::vector<double> achieved_losses;
    std::vector<double> target_losses;
    bool converged = true;
    bool feasible = true;
    double kkt_residual = 0.0;
};

/// w(y) proportional to prior(y) exp(-lambda * loss_row[y]).
Distribution tilted_distribution(const Distribution& prior, std::span<const double> loss_row,
                                 double lambda);

/// min_r D(r || prior) subject to E_r[l(x, Y)] <= E_posterior[l(x, Y)],
/// solved exactly by bisection on the tilt parameter.
TiltedSolution gen_copy_scalar(const Distribution& posterior, const Distribution& prior,
                               std::string_view x, const LossFunction& loss, InfoBase base);

/// Surprise minus generalized copy information; >= 0.
double gen_trans_scalar(const Distribution& posterior, const Distribution& prior,
                        std::string_view x, const LossFunction& loss, InfoBase base);

/// Vector-loss variant: maximizes the concave dual over lambda >= 0 by
/// projected gradient ascent with Armijo backtracking.
TiltedSolution gen_copy_vector(const Distribution& posterior, const Distribution& prior,
                               std::string_view x, const LossFunction& loss, InfoBase base);

double gen_trans_vector(const Distribution& posterior, const Distribution& prior,
                        std::string_view x, const LossFunction& loss, InfoBase base);

/// Channel-level decomposition with generalized per-message terms; the
/// channel need not be square as long as the loss covers both alphabets.
DecompositionReport gen_decompose_channel(const Channel& ch, const Distribution& source,
                                          const LossFunction& loss, InfoBase base);

/// Test oracle: minimizes D(r || prior) over a simplex grid restricted to the
/// feasible set. Destination alphabets larger than 4 are rejected.
double brute_force_gen_copy(const Distribution& posterior, const Distribution& prior,
                            std::string_view x, const LossFunction& loss, InfoBase base,
                            double grid_resolution);

}  // namespace copyinfo
