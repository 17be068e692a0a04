#include "copyinfo/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace copyinfo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRenormTol = 1e-9;
}  // namespace

double from_nats_factor(InfoBase base) {
    return base == InfoBase::bits ? 1.0 / M_LN2 : 1.0;
}

std::string to_string(InfoBase base) {
    return base == InfoBase::bits ? "bits" : "nats";
}

InfoBase info_base_from_string(std::string_view s) {
    if (s == "bits") return InfoBase::bits;
    if (s == "nats") return InfoBase::nats;
    throw OutOfRange("unknown information base '" + std::string(s) + "'");
}

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw DuplicateLabel("alphabet must be non-empty");
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        auto [it, inserted] = index_.emplace(labels_[i], i);
        if (!inserted) throw DuplicateLabel("duplicate label '" + labels_[i] + "'");
    }
}

bool Alphabet::contains(std::string_view label) const {
    return index_.find(std::string(label)) != index_.end();
}

std::size_t Alphabet::index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end())
        throw SymbolNotInAlphabet("symbol '" + std::string(label) + "' not in alphabet");
    return it->second;
}

namespace {

std::vector<double> validate_weights(const Alphabet& alphabet, std::vector<double> weights,
                                     bool renormalize) {
    if (weights.size() != alphabet.size())
        throw AlphabetMismatch("weight vector length " + std::to_string(weights.size()) +
                               " does not match alphabet size " + std::to_string(alphabet.size()));
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw NegativeWeight("weights must be finite and non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > kRenormTol && !renormalize) {
        std::ostringstream msg;
        msg << "weights sum to " << total << ", not 1";
        throw NotNormalized(msg.str());
    }
    if (total <= 0.0) throw NotNormalized("weights sum to zero");
    if (total != 1.0)
        for (double& w : weights) w /= total;
    return weights;
}

}  // namespace

Distribution::Distribution(Alphabet alphabet, std::vector<double> weights, bool renormalize)
    : alphabet_(std::move(alphabet)),
      weights_(validate_weights(alphabet_, std::move(weights), renormalize)) {}

Distribution make_distribution(std::vector<std::string> labels, std::vector<double> weights,
                               bool renormalize) {
    return Distribution(Alphabet(std::move(labels)), std::move(weights), renormalize);
}

Distribution uniform_distribution(Alphabet alphabet) {
    std::vector<double> w(alphabet.size(), 1.0 / static_cast<double>(alphabet.size()));
    return Distribution(std::move(alphabet), std::move(w));
}

Distribution point_mass(Alphabet alphabet, std::size_t index) {
    std::vector<double> w(alphabet.size(), 0.0);
    w.at(index) = 1.0;
    return Distribution(std::move(alphabet), std::move(w));
}

Channel::Channel(Alphabet source, Alphabet dest, std::vector<std::vector<double>> rows,
                 bool renormalize)
    : source_(std::move(source)), dest_(std::move(dest)), rows_(std::move(rows)) {
    if (rows_.size() != source_.size())
        throw AlphabetMismatch("channel must have one row per source symbol");
    for (auto& r : rows_)
        r = validate_weights(dest_, std::move(r), renormalize);
}

Distribution Channel::row_distribution(std::size_t x) const {
    return Distribution(dest_, rows_.at(x));
}

Channel Channel::identity(Alphabet alphabet) {
    std::size_t n = alphabet.size();
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
    return Channel(alphabet, alphabet, std::move(rows));
}

namespace detail {

double entropy_nats(std::span<const double> p) {
    double h = 0.0;
    for (double w : p)
        if (w > 0.0) h -= w * std::log(w);
    return std::max(0.0, h);
}

double kl_nats(std::span<const double> s, std::span<const double> q) {
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0.0) continue;
        if (q[i] == 0.0) return kInf;
        d += s[i] * std::log(s[i] / q[i]);
    }
    return std::max(0.0, d);
}

double binary_kl_nats(double a, double b) {
    auto term = [](double u, double v) {
        if (u == 0.0) return 0.0;
        if (v == 0.0) return kInf;
        return u * std::log(u / v);
    };
    double d = term(a, b) + term(1.0 - a, 1.0 - b);
    return std::max(0.0, d);
}

}  // namespace detail

double entropy(const Distribution& p, InfoBase base) {
    return detail::entropy_nats(p.weights()) * from_nats_factor(base);
}

double kl_divergence(const Distribution& s, const Distribution& q, InfoBase base) {
    if (s.alphabet() != q.alphabet())
        throw AlphabetMismatch("kl_divergence requires a shared alphabet");
    return detail::kl_nats(s.weights(), q.weights()) * from_nats_factor(base);
}

double binary_kl(double a, double b, InfoBase base) {
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
        throw OutOfRange("binary_kl arguments must lie in [0, 1]");
    return detail::binary_kl_nats(a, b) * from_nats_factor(base);
}

Distribution channel_marginal(const Channel& ch, const Distribution& source) {
    if (source.alphabet() != ch.source_alphabet())
        throw AlphabetMismatch("source distribution does not match channel source alphabet");
    std::vector<double> marginal(ch.dest_size(), 0.0);
    for (std::size_t x = 0; x < ch.source_size(); ++x) {
        double sx = source[x];
        if (sx == 0.0) continue;
        auto row = ch.row(x);
        for (std::size_t y = 0; y < row.size(); ++y) marginal[y] += sx * row[y];
    }
    return Distribution(ch.dest_alphabet(), std::move(marginal));
}

double specific_mi(const Distribution& posterior, const Distribution& prior, InfoBase base) {
    return kl_divergence(posterior, prior, base);
}

double mutual_information(const Channel& ch, const Distribution& source, InfoBase base) {
    Distribution marginal = channel_marginal(ch, source);
    double mi = 0.0;
    for (std::size_t x = 0; x < ch.source_size(); ++x) {
        if (source[x] == 0.0) continue;
        mi += source[x] * detail::kl_nats(ch.row(x), marginal.weights());
    }
    return std::max(0.0, mi) * from_nats_factor(base);
}

double conditional_entropy(const Channel& ch, const Distribution& source, InfoBase base) {
    if (source.alphabet() != ch.source_alphabet())
        throw AlphabetMismatch("source distribution does not match channel source alphabet");
    double h = 0.0;
    for (std::size_t x = 0; x < ch.source_size(); ++x) {
        if (source[x] == 0.0) continue;
        h += source[x] * detail::entropy_nats(ch.row(x));
    }
    return h * from_nats_factor(base);
}

}  // namespace copyinfo
