#include "copyinfo/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copyinfo/decomp.hpp"

namespace copyinfo {

namespace {

constexpr double kSumTol = 1e-12;

double discriminant_root(double a, double s, double c) {
    double d = (a + s) * (a + s) - 4.0 * a * s * c;
    return std::sqrt(std::max(0.0, d));
}

/// f_-(a, s, c) = 2sc / (a + s + sqrt((a+s)^2 - 4asc)); identical to the
/// quadratic minus root for a != 0 and equal to the a -> 0 limit c at a = 0.
double f_minus(double a, double s, double c) {
    if (c == 0.0) return 0.0;
    return 2.0 * s * c / (a + s + discriminant_root(a, s, c));
}

void validate_spec(const SynthesisSpec& spec) {
    if (spec.copy_targets.size() != spec.source.size())
        throw AlphabetMismatch("copy target count must match the source alphabet");
    for (double w : spec.source.weights())
        if (w <= 0.0) throw SourceNotFullSupport("source distribution must have full support");
    for (double c : spec.copy_targets)
        if (!(c >= 0.0 && c <= 1.0)) throw OutOfRange("copy targets must lie in [0, 1]");
}

/// Bisection for sum_{x in active} f_-(a, s(x), c(x)) = 1 on a in [-1, 1];
/// the sum is continuous and non-increasing in a.
double solve_on(std::span<const double> s, std::span<const double> c,
                std::span<const std::size_t> active) {
    double target_sum = 0.0;
    for (std::size_t x : active) target_sum += c[x];
    if (std::abs(target_sum - 1.0) <= kSumTol) return 0.0;

    auto sum_at = [&](double a) {
        double total = 0.0;
        for (std::size_t x : active) total += f_minus(a, s[x], c[x]);
        return total;
    };

    double lo = -1.0, hi = 1.0;
    if (sum_at(hi) >= 1.0 - kSumTol) return hi;
    if (sum_at(lo) <= 1.0 + kSumTol) return lo;
    double a = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        a = 0.5 * (lo + hi);
        double sum = sum_at(a);
        if (std::abs(sum - 1.0) <= kSumTol) break;
        if (sum > 1.0)
            lo = a;
        else
            hi = a;
    }
    return a;
}

std::vector<std::vector<double>> rows_from_marginal(std::span<const double> c,
                                                    std::span<const double> marginal) {
    std::size_t n = c.size();
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        if (marginal[x] >= 1.0) {
            rows[x][x] = 1.0;  // degenerate marginal forces a point mass
            continue;
        }
        double scale = (1.0 - c[x]) / (1.0 - marginal[x]);
        for (std::size_t y = 0; y < n; ++y) rows[x][y] = scale * marginal[y];
        rows[x][x] = c[x];
    }
    return rows;
}

SynthesisResult assemble(const SynthesisSpec& spec, std::vector<double> marginal, double a,
                         bool two_symbol_fallback) {
    const auto& alphabet = spec.source.alphabet();
    auto rows = rows_from_marginal(spec.copy_targets, marginal);
    Channel channel(alphabet, alphabet, std::move(rows));
    Distribution marginal_dist(alphabet, std::move(marginal), true);

    Distribution induced = channel_marginal(channel, spec.source);
    double residual = 0.0;
    for (std::size_t y = 0; y < induced.size(); ++y)
        residual = std::max(residual, std::abs(induced[y] - marginal_dist[y]));

    double target_sum = std::accumulate(spec.copy_targets.begin(), spec.copy_targets.end(), 0.0);
    return SynthesisResult{.channel = std::move(channel),
                           .marginal = std::move(marginal_dist),
                           .multiplier_a = a,
                           .pure_copy = target_sum >= 1.0,
                           .residual = residual,
                           .two_symbol_fallback = two_symbol_fallback};
}

}  // namespace

double quadratic_marginal_root(double a, double s, double c, RootSign sign) {
    if (!(s > 0.0 && s <= 1.0)) throw OutOfRange("s must lie in (0, 1]");
    if (!(c >= 0.0 && c <= 1.0)) throw OutOfRange("c must lie in [0, 1]");
    if (sign == RootSign::plus) {
        if (a == 0.0) throw ZeroMultiplier("plus root is undefined at a = 0");
        return (a + s + discriminant_root(a, s, c)) / (2.0 * a);
    }
    return f_minus(a, s, c);
}

double solve_multiplier(const SynthesisSpec& spec) {
    validate_spec(spec);
    for (double c : spec.copy_targets)
        if (c == 0.0) throw OutOfRange("solve_multiplier requires strictly positive copy targets");
    std::vector<std::size_t> active(spec.copy_targets.size());
    std::iota(active.begin(), active.end(), 0);
    return solve_on(spec.source.weights(), spec.copy_targets, active);
}

SynthesisResult synthesize_channel(const SynthesisSpec& spec) {
    validate_spec(spec);
    const auto& s = spec.source.weights();
    const auto& c = spec.copy_targets;
    std::size_t n = s.size();

    if (n == 1) {
        if (c[0] < 1.0)
            throw NoSolution("a single-symbol channel must copy with probability 1");
        return assemble(spec, {1.0}, 1.0, false);
    }

    std::vector<std::size_t> active;
    for (std::size_t x = 0; x < n; ++x)
        if (c[x] > 0.0) active.push_back(x);

    if (active.empty()) {
        // All-zero targets: marginal supported on two symbols (the paper's
        // explicit construction); we pick the two most probable sources.
        std::size_t first = 0, second = 1;
        for (std::size_t x = 0; x < n; ++x)
            if (s[x] > s[first]) first = x;
        second = first == 0 ? 1 : 0;
        for (std::size_t x = 0; x < n; ++x)
            if (x != first && s[x] > s[second]) second = x;
        std::vector<double> marginal(n, 0.0);
        double pair_mass = s[first] + s[second];
        marginal[first] = s[second] / pair_mass;
        marginal[second] = s[first] / pair_mass;
        return assemble(spec, std::move(marginal), -1.0, true);
    }

    if (active.size() == 1) {
        std::size_t x0 = active[0];
        if (c[x0] < 1.0)
            throw NoSolution(
                "a single positive copy target below 1 cannot carry the whole marginal");
        std::vector<double> marginal(n, 0.0);
        marginal[x0] = 1.0;
        return assemble(spec, std::move(marginal), 1.0, false);
    }

    double a = solve_on(s, c, active);
    std::vector<double> marginal(n, 0.0);
    for (std::size_t x : active) marginal[x] = f_minus(a, s[x], c[x]);
    double total = std::accumulate(marginal.begin(), marginal.end(), 0.0);
    for (double& v : marginal) v /= total;
    return assemble(spec, std::move(marginal), a, false);
}

double gamma_family_copy_info(const Distribution& source, double gamma, InfoBase base) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw GammaOutOfRange("gamma must lie in [0, 1]");
    double total = 0.0;
    for (std::size_t x = 0; x < source.size(); ++x) {
        double s = source[x];
        double c = gamma + s - gamma * s;
        total += s * detail::binary_kl_nats(c, s);
    }
    return total * from_nats_factor(base);
}

SynthesisResult gamma_family_channel(const Distribution& source, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw GammaOutOfRange("gamma must lie in [0, 1]");
    for (double w : source.weights())
        if (w <= 0.0) throw SourceNotFullSupport("source distribution must have full support");
    SynthesisSpec spec{source, {}};
    spec.copy_targets.resize(source.size());
    for (std::size_t x = 0; x < source.size(); ++x)
        spec.copy_targets[x] = gamma + source[x] - gamma * source[x];
    SynthesisResult result = assemble(spec, source.weights(), gamma, false);
    return result;
}

SynthesisResult pure_copy_channel_at_mi(const Distribution& source, double target_mi,
                                        InfoBase base) {
    double h = entropy(source, base);
    if (target_mi < 0.0) throw OutOfRange("target mutual information must be non-negative");
    if (target_mi > h + 1e-12)
        throw TargetAboveEntropy("target mutual information exceeds the source entropy");
    if (target_mi == 0.0) return gamma_family_channel(source, 0.0);
    if (std::abs(target_mi - h) <= 1e-12 * std::max(1.0, h))
        return gamma_family_channel(source, 1.0);

    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        double value = gamma_family_copy_info(source, mid, base);
        if (std::abs(value - target_mi) <= 1e-9) {
            lo = hi = mid;
            break;
        }
        if (value < target_mi)
            lo = mid;
        else
            hi = mid;
    }
    double gamma = 0.5 * (lo + hi);
    return gamma_family_channel(source, gamma);
}

Channel bsc_channel(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw OutOfRange("error probability must lie in [0, 1]");
    Alphabet binary({"0", "1"});
    return Channel(binary, binary,
                   {{1.0 - epsilon, epsilon}, {epsilon, 1.0 - epsilon}});
}

BscReference bsc_reference(double epsilon, InfoBase base) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw OutOfRange("error probability must lie in [0, 1]");
    double factor = from_nats_factor(base);
    double h2 = 0.0;
    if (epsilon > 0.0) h2 -= epsilon * std::log(epsilon);
    if (epsilon < 1.0) h2 -= (1.0 - epsilon) * std::log(1.0 - epsilon);
    double mi = (M_LN2 - h2) * factor;
    BscReference ref;
    ref.mi = mi;
    ref.copy = epsilon <= 0.5 ? mi : 0.0;
    ref.trans = epsilon >= 0.5 ? mi : 0.0;
    return ref;
}

}  // namespace copyinfo
