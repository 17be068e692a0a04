#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "copyinfo/prob.hpp"

namespace copyinfo {

/// Copy/transformation split of the Bayesian surprise for one source message.
///
/// `transformation` is NaN and `indeterminate` is set when both the surprise
/// and the copy term are +inf (prior probability zero at the sent symbol).
struct MessageDecomposition {
    std::string message;
    double surprise = 0.0;
    double copy = 0.0;
    double transformation = 0.0;
    std::optional<double> efficiency;
    bool indeterminate = false;
};

struct DecompositionReport {
    std::vector<MessageDecomposition> per_message;
    Distribution source;
    Distribution marginal;
    double total_mi = 0.0;
    double total_copy = 0.0;
    double total_trans = 0.0;
    double conditional_entropy = 0.0;
    double marginal_entropy = 0.0;
    std::optional<double> channel_efficiency;
    InfoBase base = InfoBase::bits;
};

/// Copy information D^copy_x: binary KL between the posterior and prior
/// probabilities of the sent symbol when the posterior exceeds the prior
/// there, zero otherwise.
double copy_info(const Distribution& posterior, const Distribution& prior, std::string_view x,
                 InfoBase base);

/// Transformation information: surprise minus copy information.
/// Throws IndeterminateInfinity when both terms are +inf.
double trans_info(const Distribution& posterior, const Distribution& prior, std::string_view x,
                  InfoBase base);

/// copy / surprise in [0, 1]; absent when the surprise is zero or infinite.
std::optional<double> copying_efficiency_message(const Distribution& posterior,
                                                 const Distribution& prior, std::string_view x,
                                                 InfoBase base);

/// total copy / total MI; absent when total MI is zero.
std::optional<double> copying_efficiency_channel(const DecompositionReport& report);

/// Posterior that places probability alpha on x and scales the prior on the
/// remaining symbols; its surprise is pure copy information.
Distribution alpha_posterior(const Distribution& prior, std::string_view x, double alpha);

/// Full per-message and aggregate decomposition of a square channel, with the
/// channel marginal as the prior.
DecompositionReport decompose_channel(const Channel& ch, const Distribution& source,
                                      InfoBase base);

namespace detail {

// Index-based primitives shared with gen_copy and thermo.
double copy_info_nats(std::span<const double> posterior, std::span<const double> prior,
                      std::size_t x);

}  // namespace detail

}  // namespace copyinfo
