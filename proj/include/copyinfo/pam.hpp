#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "copyinfo/decomp.hpp"
#include "copyinfo/prob.hpp"

namespace copyinfo {

/// The 20 standard amino acids in canonical PAML order.
const Alphabet& amino_acid_alphabet();

/// Symmetric exchangeability rates plus equilibrium frequencies (GTR-style
/// parameterization of a substitution model).
struct ExchangeabilityModel {
    Alphabet alphabet;
    Eigen::MatrixXd exchangeabilities;  // symmetric, zero diagonal
    Distribution frequencies;
};

/// Parses the PAML .dat layout: n-1 whitespace-separated lower-triangular
/// rows followed by n frequencies. '#' starts a comment.
ExchangeabilityModel parse_exchangeability(const std::string& text);
ExchangeabilityModel parse_exchangeability(const std::string& text, const Alphabet& alphabet);

/// Continuous-time generator. q(y, x) is the instantaneous rate x -> y, so
/// columns are indexed by the source state and sum to zero.
struct RateMatrix {
    Alphabet alphabet;
    Eigen::MatrixXd q;
    bool normalized = false;
};

/// Q(y, x) = exch(x, y) freq(y) off the diagonal; when `normalize` is set the
/// generator is scaled so the mean substitution rate under the stationary
/// distribution is 1.
RateMatrix build_rate_matrix(const ExchangeabilityModel& model, bool normalize = true);

/// Channel rows p(.|x) of exp(tau Q), computed by scaling and squaring with a
/// diagonal Pade approximant.
Channel matrix_exponential(const RateMatrix& q, double tau);

/// The distribution annihilated by the generator; throws ReducibleChain when
/// the support graph is disconnected or the residual cannot be met.
Distribution stationary_distribution(const RateMatrix& q);

struct SpearmanResult {
    double rho = 0.0;
    double p = 1.0;
};

/// Spearman rank correlation with average ranks for ties; the p-value uses
/// the two-sided t approximation.
SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys);

struct PamCorrelations {
    double copy_rho = 0.0;
    double copy_p = 1.0;
    double trans_rho = 0.0;
    double trans_p = 1.0;
};

struct PamReport {
    double tau = 1.0;
    bool normalized = true;
    Channel channel;
    Distribution source;  // stationary distribution of the generator
    DecompositionReport decomposition;
    std::optional<std::vector<double>> outlierness;  // mean distance to the other symbols
    std::optional<PamCorrelations> correlations;
    double stationary_vs_frequencies = 0.0;  // max |stationary - file frequencies|
};

/// End-to-end analysis: build the generator, exponentiate at tau, decompose
/// with the stationary source, and (optionally) correlate per-symbol copy and
/// transformation information with distance-based outlierness.
PamReport analyze_pam(const ExchangeabilityModel& model, double tau,
                      const std::optional<Eigen::MatrixXd>& distances = std::nullopt,
                      bool normalize = true, InfoBase base = InfoBase::bits);

/// Parses a labeled square distance CSV (header row and label column) and
/// reorders it to match `alphabet`. Requires symmetry and a zero diagonal.
Eigen::MatrixXd parse_distance_csv(const std::string& text, const Alphabet& alphabet);

}  // namespace copyinfo
