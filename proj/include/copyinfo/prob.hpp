#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copyinfo/errors.hpp"

namespace copyinfo {

/// Unit in which information amounts are reported. All internal sums are
/// accumulated in nats and converted on output, so bits * ln 2 == nats to
/// machine precision.
enum class InfoBase { bits, nats };

/// Multiply a nats value by this to express it in `base`.
double from_nats_factor(InfoBase base);

std::string to_string(InfoBase base);
InfoBase info_base_from_string(std::string_view s);

/// Ordered set of distinct symbol labels; index <-> label is a bijection.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    bool contains(std::string_view label) const;
    /// Throws SymbolNotInAlphabet.
    std::size_t index_of(std::string_view label) const;

    bool operator==(const Alphabet& other) const { return labels_ == other.labels_; }
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Finite probability vector over an Alphabet. Immutable after construction.
///
/// Weights must be non-negative and finite. A total within 1e-9 of 1 is
/// renormalized silently; larger deviations throw NotNormalized unless
/// `renormalize` is set.
class Distribution {
public:
    Distribution(Alphabet alphabet, std::vector<double> weights, bool renormalize = false);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    double at_label(std::string_view label) const { return weights_[alphabet_.index_of(label)]; }

private:
    Alphabet alphabet_;
    std::vector<double> weights_;
};

Distribution make_distribution(std::vector<std::string> labels, std::vector<double> weights,
                               bool renormalize = false);
Distribution uniform_distribution(Alphabet alphabet);
Distribution point_mass(Alphabet alphabet, std::size_t index);

/// Row-stochastic conditional distribution p(y|x); rows indexed by source
/// symbols, columns by destination symbols.
class Channel {
public:
    Channel(Alphabet source, Alphabet dest, std::vector<std::vector<double>> rows,
            bool renormalize = false);

    const Alphabet& source_alphabet() const noexcept { return source_; }
    const Alphabet& dest_alphabet() const noexcept { return dest_; }
    std::size_t source_size() const noexcept { return rows_.size(); }
    std::size_t dest_size() const noexcept { return dest_.size(); }

    std::span<const double> row(std::size_t x) const { return rows_.at(x); }
    Distribution row_distribution(std::size_t x) const;
    double prob(std::size_t x, std::size_t y) const { return rows_[x][y]; }

    /// Source and destination alphabets are identical (labels and order).
    bool square() const { return source_ == dest_; }

    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

    static Channel identity(Alphabet alphabet);

private:
    Alphabet source_;
    Alphabet dest_;
    std::vector<std::vector<double>> rows_;
};

/// Shannon entropy H(p), with the convention 0 log 0 = 0.
double entropy(const Distribution& p, InfoBase base);

/// KL divergence D(s || q). Returns +inf when supp(s) is not within supp(q).
double kl_divergence(const Distribution& s, const Distribution& q, InfoBase base);

/// Binary KL d(a, b) between (a, 1-a) and (b, 1-b); a, b in [0, 1].
double binary_kl(double a, double b, InfoBase base);

/// p(y) = sum_x s(x) p(y|x).
Distribution channel_marginal(const Channel& ch, const Distribution& source);

/// Specific MI for one source message, i.e. the Bayesian surprise
/// D(posterior || prior).
double specific_mi(const Distribution& posterior, const Distribution& prior, InfoBase base);

double mutual_information(const Channel& ch, const Distribution& source, InfoBase base);

double conditional_entropy(const Channel& ch, const Distribution& source, InfoBase base);

namespace detail {

/// Natural-log KL between raw weight vectors (assumed normalized).
double kl_nats(std::span<const double> s, std::span<const double> q);
double entropy_nats(std::span<const double> p);
double binary_kl_nats(double a, double b);

}  // namespace detail

}  // namespace copyinfo
