#include "copyinfo/decomp.hpp"

#include <cmath>
#include <limits>

namespace copyinfo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_shared_alphabet(const Distribution& posterior, const Distribution& prior) {
    if (posterior.alphabet() != prior.alphabet())
        throw AlphabetMismatch("posterior and prior must share an alphabet");
}

std::optional<double> efficiency_of(double copy, double surprise) {
    if (surprise <= 0.0 || std::isinf(surprise)) return std::nullopt;
    double eta = copy / surprise;
    return std::min(1.0, std::max(0.0, eta));
}

}  // namespace

namespace detail {

double copy_info_nats(std::span<const double> posterior, std::span<const double> prior,
                      std::size_t x) {
    double a = posterior[x];
    double b = prior[x];
    if (a <= b) return 0.0;
    return binary_kl_nats(a, b);
}

}  // namespace detail

double copy_info(const Distribution& posterior, const Distribution& prior, std::string_view x,
                 InfoBase base) {
    require_shared_alphabet(posterior, prior);
    std::size_t idx = prior.alphabet().index_of(x);
    return detail::copy_info_nats(posterior.weights(), prior.weights(), idx) *
           from_nats_factor(base);
}

double trans_info(const Distribution& posterior, const Distribution& prior, std::string_view x,
                  InfoBase base) {
    require_shared_alphabet(posterior, prior);
    std::size_t idx = prior.alphabet().index_of(x);
    double surprise = detail::kl_nats(posterior.weights(), prior.weights());
    double copy = detail::copy_info_nats(posterior.weights(), prior.weights(), idx);
    if (std::isinf(surprise) && std::isinf(copy))
        throw IndeterminateInfinity("surprise and copy information are both infinite");
    return std::max(0.0, surprise - copy) * from_nats_factor(base);
}

std::optional<double> copying_efficiency_message(const Distribution& posterior,
                                                 const Distribution& prior, std::string_view x,
                                                 InfoBase base) {
    require_shared_alphabet(posterior, prior);
    std::size_t idx = prior.alphabet().index_of(x);
    double surprise = detail::kl_nats(posterior.weights(), prior.weights());
    double copy = detail::copy_info_nats(posterior.weights(), prior.weights(), idx);
    (void)base;  // the ratio is base-independent
    return efficiency_of(copy, surprise);
}

std::optional<double> copying_efficiency_channel(const DecompositionReport& report) {
    if (report.total_mi <= 0.0) return std::nullopt;
    return std::min(1.0, std::max(0.0, report.total_copy / report.total_mi));
}

Distribution alpha_posterior(const Distribution& prior, std::string_view x, double alpha) {
    std::size_t idx = prior.alphabet().index_of(x);
    double b = prior[idx];
    if (b >= 1.0) throw DegeneratePrior("prior already concentrates all mass on the symbol");
    if (alpha < b || alpha > 1.0)
        throw AlphaOutOfRange("alpha must lie in [prior(x), 1]");
    std::vector<double> w(prior.size());
    double scale = (1.0 - alpha) / (1.0 - b);
    for (std::size_t y = 0; y < prior.size(); ++y) w[y] = scale * prior[y];
    w[idx] = alpha;
    return Distribution(prior.alphabet(), std::move(w));
}

DecompositionReport decompose_channel(const Channel& ch, const Distribution& source,
                                      InfoBase base) {
    if (!ch.square())
        throw NonSquareChannel("decompose_channel requires source and destination alphabets to match");
    if (source.alphabet() != ch.source_alphabet())
        throw AlphabetMismatch("source distribution does not match channel alphabet");

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
        double copy = detail::copy_info_nats(row, marginal.weights(), x);
        MessageDecomposition msg;
        msg.message = ch.source_alphabet().label(x);
        msg.surprise = surprise * factor;
        msg.copy = copy * factor;
        if (std::isinf(surprise) && std::isinf(copy)) {
            msg.transformation = kNaN;
            msg.indeterminate = true;
        } else {
            msg.transformation = std::max(0.0, surprise - copy) * factor;
        }
        msg.efficiency = efficiency_of(copy, surprise);
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

}  // namespace copyinfo
