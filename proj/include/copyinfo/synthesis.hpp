#pragma once

#include <vector>

#include "copyinfo/prob.hpp"

namespace copyinfo {

/// Request for a channel whose diagonal hits prescribed copy probabilities.
struct SynthesisSpec {
    Distribution source;               // full support required
    std::vector<double> copy_targets;  // c(x) in [0, 1] per source symbol
};

struct SynthesisResult {
    Channel channel;
    Distribution marginal;
    double multiplier_a = 0.0;  // in [-1, 1]
    bool pure_copy = false;     // sum of copy targets >= 1
    double residual = 0.0;      // max marginal-consistency violation
    bool two_symbol_fallback = false;  // all-zero targets use the explicit two-symbol marginal
};

enum class RootSign { minus, plus };

/// Root (a + s +- sqrt((a+s)^2 - 4asc)) / (2a) of the marginal-consistency
/// quadratic. The minus root is evaluated in a cancellation-free form that
/// extends continuously to a = 0 (where it equals c); the plus root requires
/// a != 0.
double quadratic_marginal_root(double a, double s, double c, RootSign sign);

/// The unique a in [-1, 1] with sum_x f_-(a, s(x), c(x)) = 1. Requires all
/// copy targets positive.
double solve_multiplier(const SynthesisSpec& spec);

/// Build the channel with diagonal p(x|x) = c(x) and off-diagonal rows
/// proportional to the induced marginal.
SynthesisResult synthesize_channel(const SynthesisSpec& spec);

/// One-parameter pure-copy family: marginal equals the source and all mutual
/// information is copy information; gamma sweeps MI from 0 to H(source).
SynthesisResult gamma_family_channel(const Distribution& source, double gamma);

/// Bisects gamma until the family's total copy information matches target_mi.
SynthesisResult pure_copy_channel_at_mi(const Distribution& source, double target_mi,
                                        InfoBase base);

/// Total copy information (= total MI) of the gamma-family channel, without
/// materializing it.
double gamma_family_copy_info(const Distribution& source, double gamma, InfoBase base);

Channel bsc_channel(double epsilon);

struct BscReference {
    double mi = 0.0;
    double copy = 0.0;
    double trans = 0.0;
};

/// Closed-form decomposition of the binary symmetric channel with a uniform
/// source: MI = 1 - H2(epsilon) bits, all copy below epsilon = 1/2 and all
/// transformation above.
BscReference bsc_reference(double epsilon, InfoBase base);

}  // namespace copyinfo
