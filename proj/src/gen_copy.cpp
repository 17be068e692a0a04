#include "copyinfo/gen_copy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace copyinfo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambdaBranchTol = 1e-12;  // expected-loss comparison for the lambda = 0 branch
constexpr double kBisectTol = 1e-10;        // |E_w[l] - target|
constexpr double kLambdaCap = 1e12;

double expectation(std::span<const double> weights, std::span<const double> values) {
    double e = 0.0;
    for (std::size_t y = 0; y < weights.size(); ++y) e += weights[y] * values[y];
    return e;
}

double support_min(std::span<const double> prior, std::span<const double> loss_row) {
    double m = kInf;
    for (std::size_t y = 0; y < prior.size(); ++y)
        if (prior[y] > 0.0) m = std::min(m, loss_row[y]);
    return m;
}

/// Tilted weights w(y) ~ prior(y) exp(-sum_i lambda_i l_i(y)), log-sum-exp
/// stabilized. Returns log Z alongside.
struct Tilt {
    std::vector<double> w;
    double log_z;
};

Tilt tilt_weights(std::span<const double> prior,
                  const std::vector<std::span<const double>>& loss_rows,
                  std::span<const double> lambdas) {
    std::size_t n = prior.size();
    std::vector<double> expo(n, -kInf);
    double m = -kInf;
    for (std::size_t y = 0; y < n; ++y) {
        if (prior[y] == 0.0) continue;
        double e = 0.0;
        for (std::size_t i = 0; i < lambdas.size(); ++i) e -= lambdas[i] * loss_rows[i][y];
        expo[y] = e;
        m = std::max(m, e);
    }
    std::vector<double> w(n, 0.0);
    double z = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
        if (prior[y] == 0.0) continue;
        w[y] = prior[y] * std::exp(expo[y] - m);
        z += w[y];
    }
    for (double& v : w) v /= z;
    return {std::move(w), m + std::log(z)};
}

struct SolveInput {
    std::span<const double> prior;
    std::vector<std::span<const double>> loss_rows;
    std::vector<double> targets;  // E_posterior[l_i]
};

struct SolveOutput {
    std::vector<double> w;
    std::vector<double> lambdas;
    double value_nats = 0.0;
    std::vector<double> achieved;
    bool converged = true;
    bool feasible = true;
    double kkt_residual = 0.0;
};

double dual_value(const SolveInput& in, std::span<const double> lambdas, const Tilt& tilt) {
    double g = -tilt.log_z;
    for (std::size_t i = 0; i < lambdas.size(); ++i) g -= lambdas[i] * in.targets[i];
    return g;
}

SolveOutput lambda_zero_solution(const SolveInput& in) {
    SolveOutput out;
    out.w.assign(in.prior.begin(), in.prior.end());
    out.lambdas.assign(in.loss_rows.size(), 0.0);
    out.value_nats = 0.0;
    out.achieved.resize(in.loss_rows.size());
    for (std::size_t i = 0; i < in.loss_rows.size(); ++i)
        out.achieved[i] = expectation(in.prior, in.loss_rows[i]);
    return out;
}

/// Restrict the prior to a subset of symbols (conditional distribution).
/// Adds -log prior(subset) to the value of any solution on the restriction.
std::vector<double> restrict_prior(std::span<const double> prior, const std::vector<bool>& keep,
                                   double& log_mass) {
    double mass = 0.0;
    std::vector<double> restricted(prior.size(), 0.0);
    for (std::size_t y = 0; y < prior.size(); ++y)
        if (keep[y]) mass += prior[y];
    log_mass = std::log(mass);
    for (std::size_t y = 0; y < prior.size(); ++y)
        if (keep[y]) restricted[y] = prior[y] / mass;
    return restricted;
}

SolveOutput solve_scalar(const SolveInput& in) {
    const auto loss_row = in.loss_rows[0];
    const double target = in.targets[0];
    const double prior_loss = expectation(in.prior, loss_row);
    const double min_loss = support_min(in.prior, loss_row);

    if (target >= prior_loss - kLambdaBranchTol) return lambda_zero_solution(in);

    SolveOutput out;
    out.lambdas.assign(1, 0.0);
    out.achieved.assign(1, 0.0);

    if (target < min_loss - kLambdaBranchTol) {
        // Unreachable within the prior support: the posterior put mass
        // outside it, so D(posterior || prior) is infinite as well.
        out.feasible = false;
        out.value_nats = kInf;
        out.lambdas[0] = kInf;
        double log_mass = 0.0;
        std::vector<bool> keep(in.prior.size());
        for (std::size_t y = 0; y < in.prior.size(); ++y)
            keep[y] = in.prior[y] > 0.0 && loss_row[y] <= min_loss + kLambdaBranchTol;
        out.w = restrict_prior(in.prior, keep, log_mass);
        out.achieved[0] = min_loss;
        return out;
    }

    if (target <= min_loss + kLambdaBranchTol) {
        // Limit of infinite tilt: prior conditioned on the minimum-loss set.
        double log_mass = 0.0;
        std::vector<bool> keep(in.prior.size());
        for (std::size_t y = 0; y < in.prior.size(); ++y)
            keep[y] = in.prior[y] > 0.0 && loss_row[y] <= min_loss + kLambdaBranchTol;
        out.w = restrict_prior(in.prior, keep, log_mass);
        out.lambdas[0] = kInf;
        out.value_nats = -log_mass;
        out.achieved[0] = min_loss;
        return out;
    }

    auto achieved_at = [&](double lambda) {
        Tilt t = tilt_weights(in.prior, in.loss_rows, std::span(&lambda, 1));
        return std::pair{expectation(t.w, loss_row), std::move(t)};
    };

    // E_w[l] is continuous and non-increasing in lambda; bracket then bisect.
    double lo = 0.0, hi = 1.0;
    auto [e_hi, tilt_hi] = achieved_at(hi);
    while (e_hi > target && hi < kLambdaCap) {
        lo = hi;
        hi *= 2.0;
        std::tie(e_hi, tilt_hi) = achieved_at(hi);
    }
    if (e_hi > target + kBisectTol) {
        out.feasible = false;
        out.value_nats = kInf;
        out.lambdas[0] = kInf;
        out.w = std::move(tilt_hi.w);
        out.achieved[0] = e_hi;
        return out;
    }

    double lambda = hi;
    Tilt tilt = std::move(tilt_hi);
    double achieved = e_hi;
    for (int iter = 0; iter < 200 && std::abs(achieved - target) > kBisectTol; ++iter) {
        double mid = 0.5 * (lo + hi);
        auto [e_mid, tilt_mid] = achieved_at(mid);
        if (e_mid > target) {
            lo = mid;
        } else {
            hi = mid;
            lambda = mid;
            tilt = std::move(tilt_mid);
            achieved = e_mid;
        }
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) {
            lambda = hi;
            std::tie(achieved, tilt) = achieved_at(lambda);
            break;
        }
    }

    out.lambdas[0] = lambda;
    out.w = tilt.w;
    out.achieved[0] = achieved;
    out.value_nats = std::max(0.0, -lambda * target - tilt.log_z);
    double primal = detail::kl_nats(out.w, in.prior);
    out.kkt_residual = std::max({std::abs(out.value_nats - primal),
                                 std::max(0.0, achieved - target - kBisectTol)});
    return out;
}

/// Projected gradient ascent on the concave dual
///   g(lambda) = -sum_i lambda_i c_i - log Z(lambda),  lambda >= 0,
/// with gradient E_w[l_i] - c_i and Armijo backtracking.
SolveOutput solve_vector(const SolveInput& in) {
    const std::size_t m = in.loss_rows.size();

    // Constraints pinned at their support minimum force the solution onto the
    // minimizing set; peel them off and solve the reduced problem there.
    std::vector<double> mins(m), prior_losses(m);
    for (std::size_t i = 0; i < m; ++i) {
        mins[i] = support_min(in.prior, in.loss_rows[i]);
        prior_losses[i] = expectation(in.prior, in.loss_rows[i]);
        if (in.targets[i] < mins[i] - kLambdaBranchTol) {
            SolveOutput out;
            out.feasible = false;
            out.value_nats = kInf;
            out.lambdas.assign(m, kInf);
            out.w.assign(in.prior.begin(), in.prior.end());
            out.achieved = prior_losses;
            return out;
        }
    }

    std::vector<std::size_t> forced;
    for (std::size_t i = 0; i < m; ++i)
        if (in.targets[i] <= mins[i] + kLambdaBranchTol) forced.push_back(i);
    if (!forced.empty()) {
        std::vector<bool> keep(in.prior.size());
        for (std::size_t y = 0; y < in.prior.size(); ++y) {
            keep[y] = in.prior[y] > 0.0;
            for (std::size_t i : forced)
                keep[y] = keep[y] && in.loss_rows[i][y] <= mins[i] + kLambdaBranchTol;
        }
        if (std::none_of(keep.begin(), keep.end(), [](bool b) { return b; })) {
            SolveOutput out;
            out.feasible = false;
            out.value_nats = kInf;
            out.lambdas.assign(m, kInf);
            out.w.assign(in.prior.begin(), in.prior.end());
            out.achieved = prior_losses;
            return out;
        }
        double log_mass = 0.0;
        SolveInput reduced;
        auto restricted = restrict_prior(in.prior, keep, log_mass);
        reduced.prior = restricted;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < m; ++i)
            if (std::find(forced.begin(), forced.end(), i) == forced.end()) rest.push_back(i);
        for (std::size_t i : rest) {
            reduced.loss_rows.push_back(in.loss_rows[i]);
            reduced.targets.push_back(in.targets[i]);
        }
        SolveOutput sub = reduced.loss_rows.empty() ? lambda_zero_solution(reduced)
                                                    : solve_vector(reduced);
        SolveOutput out;
        out.w = std::move(sub.w);
        out.converged = sub.converged;
        out.feasible = sub.feasible;
        out.value_nats = sub.feasible ? sub.value_nats - log_mass : kInf;
        out.lambdas.assign(m, 0.0);
        for (std::size_t k = 0; k < rest.size(); ++k) out.lambdas[rest[k]] = sub.lambdas[k];
        for (std::size_t i : forced) out.lambdas[i] = kInf;
        out.achieved.resize(m);
        for (std::size_t i = 0; i < m; ++i) out.achieved[i] = expectation(out.w, in.loss_rows[i]);
        out.kkt_residual = sub.kkt_residual;
        return out;
    }

    bool all_slack = true;
    for (std::size_t i = 0; i < m; ++i)
        all_slack = all_slack && in.targets[i] >= prior_losses[i] - kLambdaBranchTol;
    if (all_slack) return lambda_zero_solution(in);

    double prior_min = kInf;
    for (double p : in.prior)
        if (p > 0.0) prior_min = std::min(prior_min, p);
    const double value_bound = -std::log(prior_min) + 1.0;  // any feasible value is below this

    std::vector<double> lambdas(m, 0.0);
    Tilt tilt = tilt_weights(in.prior, in.loss_rows, lambdas);
    double g = dual_value(in, lambdas, tilt);

    auto gradient = [&](const Tilt& t) {
        std::vector<double> grad(m);
        for (std::size_t i = 0; i < m; ++i)
            grad[i] = expectation(t.w, in.loss_rows[i]) - in.targets[i];
        return grad;
    };
    auto kkt = [&](std::span<const double> lam, std::span<const double> grad) {
        double r = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            r = std::max(r, lam[i] > 0.0 ? std::abs(grad[i]) : std::max(0.0, grad[i]));
        return r;
    };

    std::vector<double> grad = gradient(tilt);
    double step = 1.0;
    bool converged = false;
    bool infeasible = false;
    constexpr int kMaxIter = 100000;
    int iter = 0;
    for (; iter < kMaxIter; ++iter) {
        if (kkt(lambdas, grad) <= 1e-8) {
            converged = true;
            break;
        }
        if (g > value_bound) {
            infeasible = true;
            break;
        }
        std::vector<double> trial(m);
        double trial_g = -kInf;
        Tilt trial_tilt;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            double descent = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                trial[i] = std::max(0.0, lambdas[i] + step * grad[i]);
                descent += grad[i] * (trial[i] - lambdas[i]);
            }
            trial_tilt = tilt_weights(in.prior, in.loss_rows, trial);
            trial_g = dual_value(in, trial, trial_tilt);
            if (trial_g >= g + 1e-4 * descent && descent >= 0.0) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        lambdas = trial;
        tilt = std::move(trial_tilt);
        g = trial_g;
        grad = gradient(tilt);
        step = std::min(step * 2.0, 1e8);
    }

    if (infeasible || g > value_bound) {
        SolveOutput out;
        out.feasible = false;
        out.value_nats = kInf;
        out.lambdas = lambdas;
        out.w = tilt.w;
        out.achieved.resize(m);
        for (std::size_t i = 0; i < m; ++i) out.achieved[i] = expectation(tilt.w, in.loss_rows[i]);
        return out;
    }

    SolveOutput out;
    out.w = tilt.w;
    out.lambdas = lambdas;
    out.converged = converged;
    out.value_nats = std::max(0.0, g);
    out.achieved.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.achieved[i] = expectation(tilt.w, in.loss_rows[i]);
    double primal = detail::kl_nats(out.w, in.prior);
    out.kkt_residual = std::max(kkt(lambdas, grad), std::abs(out.value_nats - primal));
    return out;
}

TiltedSolution finish(const SolveInput& in, SolveOutput&& raw, const Alphabet& dest,
                      InfoBase base) {
    double factor = from_nats_factor(base);
    TiltedSolution sol{.optimizer = Distribution(dest, std::move(raw.w)),
                       .multipliers = std::move(raw.lambdas),
                       .value = std::isinf(raw.value_nats) ? kInf : raw.value_nats * factor,
                       .achieved_losses = std::move(raw.achieved),
                       .target_losses = in.targets,
                       .converged = raw.converged,
                       .feasible = raw.feasible,
                       .kkt_residual = raw.kkt_residual};
    return sol;
}

SolveInput make_input(const Distribution& posterior, const Distribution& prior,
                      std::size_t x, const LossFunction& loss) {
    if (posterior.alphabet() != prior.alphabet())
        throw AlphabetMismatch("posterior and prior must share an alphabet");
    if (loss.dest_alphabet() != prior.alphabet())
        throw AlphabetMismatch("loss destination alphabet does not match the distributions");
    SolveInput in;
    in.prior = prior.weights();
    for (std::size_t i = 0; i < loss.arity(); ++i) {
        in.loss_rows.push_back(loss.row(i, x));
        in.targets.push_back(expectation(posterior.weights(), loss.row(i, x)));
    }
    return in;
}

}  // namespace

LossFunction::LossFunction(Alphabet source, Alphabet dest,
                           std::vector<std::vector<std::vector<double>>> components)
    : source_(std::move(source)), dest_(std::move(dest)) {
    if (components.empty()) throw OutOfRange("loss function needs at least one component");
    for (const auto& matrix : components) {
        if (matrix.size() != source_.size())
            throw AlphabetMismatch("loss matrix must have one row per source symbol");
        std::vector<double> flat;
        flat.reserve(source_.size() * dest_.size());
        for (const auto& row : matrix) {
            if (row.size() != dest_.size())
                throw AlphabetMismatch("loss matrix row length must match destination alphabet");
            for (double v : row) {
                if (!std::isfinite(v)) throw OutOfRange("loss entries must be finite");
                flat.push_back(v);
            }
        }
        components_.push_back(std::move(flat));
    }
}

LossFunction builtin_loss(BuiltinLoss kind, const Alphabet& source, const Alphabet& dest,
                          std::optional<std::vector<double>> source_values,
                          std::optional<std::vector<double>> dest_values) {
    std::size_t nx = source.size(), ny = dest.size();
    std::vector<std::vector<double>> matrix(nx, std::vector<double>(ny, 0.0));
    if (kind == BuiltinLoss::zero_one) {
        if (source != dest)
            throw AlphabetMismatch("zero_one loss requires equal source and destination alphabets");
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) matrix[x][y] = x == y ? 0.0 : 1.0;
    } else {
        auto numeric = [](const Alphabet& a,
                          const std::optional<std::vector<double>>& given) {
            if (given) {
                if (given->size() != a.size())
                    throw AlphabetMismatch("numeric label vector length mismatch");
                return *given;
            }
            std::vector<double> vals;
            vals.reserve(a.size());
            for (const auto& label : a.labels()) {
                const char* begin = label.data();
                const char* end = begin + label.size();
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(begin, end, v);
                if (ec != std::errc() || ptr != end)
                    throw NonNumericLabels("label '" + label + "' is not numeric");
                vals.push_back(v);
            }
            return vals;
        };
        auto xs = numeric(source, source_values);
        auto ys = numeric(dest, dest_values);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) {
                double d = xs[x] - ys[y];
                matrix[x][y] = d * d;
            }
    }
    return LossFunction(source, dest, {std::move(matrix)});
}

Distribution tilted_distribution(const Distribution& prior, std::span<const double> loss_row,
                                 double lambda) {
    if (lambda < 0.0) throw NegativeLambda("tilt parameter must be non-negative");
    if (loss_row.size() != prior.size())
        throw AlphabetMismatch("loss row length must match the prior");
    for (double v : loss_row)
        if (!std::isfinite(v)) throw OutOfRange("loss entries must be finite");
    std::vector<std::span<const double>> rows{loss_row};
    Tilt t = tilt_weights(prior.weights(), rows, std::span(&lambda, 1));
    return Distribution(prior.alphabet(), std::move(t.w));
}

TiltedSolution gen_copy_scalar(const Distribution& posterior, const Distribution& prior,
                               std::string_view x, const LossFunction& loss, InfoBase base) {
    if (loss.arity() != 1) throw OutOfRange("gen_copy_scalar requires a scalar loss");
    std::size_t idx = loss.source_alphabet().index_of(x);
    SolveInput in = make_input(posterior, prior, idx, loss);
    return finish(in, solve_scalar(in), prior.alphabet(), base);
}

TiltedSolution gen_copy_vector(const Distribution& posterior, const Distribution& prior,
                               std::string_view x, const LossFunction& loss, InfoBase base) {
    std::size_t idx = loss.source_alphabet().index_of(x);
    SolveInput in = make_input(posterior, prior, idx, loss);
    return finish(in, solve_vector(in), prior.alphabet(), base);
}

namespace {

double gen_trans_impl(const Distribution& posterior, const Distribution& prior,
                      std::string_view x, const LossFunction& loss, InfoBase base, bool vector) {
    double surprise = specific_mi(posterior, prior, base);
    TiltedSolution sol = vector ? gen_copy_vector(posterior, prior, x, loss, base)
                                : gen_copy_scalar(posterior, prior, x, loss, base);
    if (std::isinf(surprise) && std::isinf(sol.value))
        throw IndeterminateInfinity("surprise and generalized copy are both infinite");
    return std::max(0.0, surprise - sol.value);
}

}  // namespace

double gen_trans_scalar(const Distribution& posterior, const Distribution& prior,
                        std::string_view x, const LossFunction& loss, InfoBase base) {
    return gen_trans_impl(posterior, prior, x, loss, base, false);
}

double gen_trans_vector(const Distribution& posterior, const Distribution& prior,
                        std::string_view x, const LossFunction& loss, InfoBase base) {
    return gen_trans_impl(posterior, prior, x, loss, base, true);
}

DecompositionReport gen_decompose_channel(const Channel& ch, const Distribution& source,
                                          const LossFunction& loss, InfoBase base) {
    if (source.alphabet() != ch.source_alphabet())
        throw AlphabetMismatch("source distribution does not match channel alphabet");
    if (loss.source_alphabet() != ch.source_alphabet() ||
        loss.dest_alphabet() != ch.dest_alphabet())
        throw AlphabetMismatch("loss alphabets do not match the channel");

    Distribution marginal = channel_marginal(ch, source);
    double factor = from_nats_factor(base);

    DecompositionReport report{.per_message = {},
                               .source = source,
                               .marginal = marginal,
                               .base = base};
    report.per_message.reserve(ch.source_size());

    double mi = 0.0, copy_total = 0.0, cond_h = 0.0;
    for (std::size_t x = 0; x < ch.source_size(); ++x) {
        auto row = ch.row(x);
        double surprise = detail::kl_nats(row, marginal.weights());

        SolveInput in;
        in.prior = marginal.weights();
        for (std::size_t i = 0; i < loss.arity(); ++i) {
            in.loss_rows.push_back(loss.row(i, x));
            in.targets.push_back(expectation(row, loss.row(i, x)));
        }
        SolveOutput solved = loss.arity() == 1 ? solve_scalar(in) : solve_vector(in);
        double copy = solved.value_nats;

        MessageDecomposition msg;
        msg.message = ch.source_alphabet().label(x);
        msg.surprise = surprise * factor;
        msg.copy = std::isinf(copy) ? kInf : copy * factor;
        if (std::isinf(surprise) && std::isinf(copy)) {
            msg.transformation = std::numeric_limits<double>::quiet_NaN();
            msg.indeterminate = true;
        } else {
            msg.transformation = std::max(0.0, surprise - copy) * factor;
        }
        if (surprise > 0.0 && !std::isinf(surprise))
            msg.efficiency = std::min(1.0, std::max(0.0, copy / surprise));
        report.per_message.push_back(std::move(msg));

        double sx = source[x];
        if (sx > 0.0) {
            mi += sx * surprise;
            copy_total += sx * copy;
            cond_h += sx * detail::entropy_nats(row);
        }
    }

    report.total_mi = mi * factor;
    report.total_copy = copy_total * factor;
    report.total_trans = std::max(0.0, mi - copy_total) * factor;
    report.conditional_entropy = cond_h * factor;
    report.marginal_entropy = detail::entropy_nats(marginal.weights()) * factor;
    report.channel_efficiency = copying_efficiency_channel(report);
    return report;
}

double brute_force_gen_copy(const Distribution& posterior, const Distribution& prior,
                            std::string_view x, const LossFunction& loss, InfoBase base,
                            double grid_resolution) {
    if (prior.size() > 4)
        throw AlphabetTooLarge("brute_force_gen_copy supports destination alphabets up to 4");
    if (grid_resolution <= 0.0 || grid_resolution > 1.0)
        throw OutOfRange("grid resolution must lie in (0, 1]");
    std::size_t idx = loss.source_alphabet().index_of(x);
    SolveInput in = make_input(posterior, prior, idx, loss);

    const std::size_t n = prior.size();
    const std::size_t m = in.loss_rows.size();
    const long N = std::lround(1.0 / grid_resolution);
    const double h = 1.0 / static_cast<double>(N);

    // Per-coordinate tables: kl_tab[y][k] = r log(r / p_y) at r = k h, and
    // loss_tab[i][y][k] = r l_i(x, y). The scan is then pure table adds.
    std::vector<std::vector<double>> kl_tab(n, std::vector<double>(N + 1));
    std::vector<std::vector<std::vector<double>>> loss_tab(
        m, std::vector<std::vector<double>>(n, std::vector<double>(N + 1)));
    for (std::size_t y = 0; y < n; ++y) {
        double p = prior[y];
        for (long k = 0; k <= N; ++k) {
            double r = k * h;
            kl_tab[y][k] = k == 0 ? 0.0 : (p == 0.0 ? kInf : r * std::log(r / p));
            for (std::size_t i = 0; i < m; ++i) loss_tab[i][y][k] = r * in.loss_rows[i][y];
        }
    }
    std::vector<double> slack(m);
    for (std::size_t i = 0; i < m; ++i)
        slack[i] = in.targets[i] + 1e-12 * std::max(1.0, std::abs(in.targets[i]));

    double best = kInf;
    std::vector<long> counts(n, 0);
    std::vector<double> loss_acc(m, 0.0);

    auto scan = [&](auto&& self, std::size_t y, long remaining, double kl_acc) -> void {
        if (y + 1 == n) {
            double kl = kl_acc + kl_tab[y][remaining];
            if (kl >= best) return;
            for (std::size_t i = 0; i < m; ++i)
                if (loss_acc[i] + loss_tab[i][y][remaining] > slack[i]) return;
            best = kl;
            return;
        }
        for (long k = 0; k <= remaining; ++k) {
            double kl = kl_acc + kl_tab[y][k];
            if (std::isinf(kl)) continue;
            for (std::size_t i = 0; i < m; ++i) loss_acc[i] += loss_tab[i][y][k];
            self(self, y + 1, remaining - k, kl);
            for (std::size_t i = 0; i < m; ++i) loss_acc[i] -= loss_tab[i][y][k];
        }
    };
    scan(scan, 0, N, 0.0);

    if (std::isinf(best)) return kInf;
    return std::max(0.0, best) * from_nats_factor(base);
}

}  // namespace copyinfo
