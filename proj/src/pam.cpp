#include "copyinfo/pam.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace copyinfo {

namespace {

const char* kAminoAcids[] = {"A", "R", "N", "D", "C", "Q", "E", "G", "H", "I",
                             "L", "K", "M", "F", "P", "S", "T", "W", "Y", "V"};

std::vector<double> read_numbers(const std::string& text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    bool in_comment = false;
    for (char c : text) {
        if (c == '#') in_comment = true;
        if (c == '\n') in_comment = false;
        cleaned.push_back(in_comment ? ' ' : c);
    }
    std::istringstream stream(cleaned);
    std::vector<double> numbers;
    std::string token;
    while (stream >> token) {
        try {
            std::size_t used = 0;
            double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            numbers.push_back(v);
        } catch (const std::exception&) {
            throw MalformedMatrix("unexpected token '" + token + "' in exchangeability file");
        }
    }
    return numbers;
}

}  // namespace

const Alphabet& amino_acid_alphabet() {
    static const Alphabet alphabet(
        std::vector<std::string>(std::begin(kAminoAcids), std::end(kAminoAcids)));
    return alphabet;
}

ExchangeabilityModel parse_exchangeability(const std::string& text) {
    return parse_exchangeability(text, amino_acid_alphabet());
}

ExchangeabilityModel parse_exchangeability(const std::string& text, const Alphabet& alphabet) {
    const std::size_t n = alphabet.size();
    if (n < 2) throw MalformedMatrix("exchangeability models need at least two states");
    std::vector<double> numbers = read_numbers(text);
    const std::size_t triangle = n * (n - 1) / 2;
    if (numbers.size() < triangle)
        throw MalformedMatrix("expected " + std::to_string(triangle) +
                              " lower-triangular exchangeabilities, found " +
                              std::to_string(numbers.size()));
    if (numbers.size() != triangle + n)
        throw BadFrequencyCount("expected " + std::to_string(n) + " frequencies after the " +
                                std::to_string(triangle) + " exchangeabilities, found " +
                                std::to_string(numbers.size() - triangle));

    Eigen::MatrixXd exch = Eigen::MatrixXd::Zero(n, n);
    std::size_t pos = 0;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            double v = numbers[pos++];
            if (v < 0.0) throw NegativeEntry("exchangeabilities must be non-negative");
            exch(i, j) = exch(j, i) = v;
        }

    std::vector<double> freqs(numbers.begin() + triangle, numbers.end());
    double total = std::accumulate(freqs.begin(), freqs.end(), 0.0);
    for (double f : freqs)
        if (f < 0.0) throw NegativeEntry("frequencies must be non-negative");
    if (std::abs(total - 1.0) > 1e-6)
        throw NotNormalized("frequencies sum to " + std::to_string(total));

    return ExchangeabilityModel{alphabet, std::move(exch),
                                Distribution(alphabet, std::move(freqs), true)};
}

RateMatrix build_rate_matrix(const ExchangeabilityModel& model, bool normalize) {
    const std::size_t n = model.alphabet.size();
    const auto& pi = model.frequencies.weights();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y) q(y, x) = model.exchangeabilities(x, y) * pi[y];
    for (std::size_t x = 0; x < n; ++x) q(x, x) = -q.col(x).sum();

    if (normalize) {
        double mean_rate = 0.0;
        for (std::size_t x = 0; x < n; ++x) mean_rate += pi[x] * (-q(x, x));
        if (mean_rate <= 0.0) throw MalformedMatrix("rate matrix has zero mean rate");
        q /= mean_rate;
    }
    return RateMatrix{model.alphabet, std::move(q), normalize};
}

namespace {

/// Diagonal Pade-13 approximant with scaling and squaring (Higham 2005).
Eigen::MatrixXd expm_pade(const Eigen::MatrixXd& a) {
    static const double theta13 = 5.371920351148152;
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const Eigen::Index n = a.rows();
    double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int squarings = 0;
    if (norm > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    Eigen::MatrixXd scaled = a / std::pow(2.0, squarings);

    Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd a2 = scaled * scaled;
    Eigen::MatrixXd a4 = a2 * a2;
    Eigen::MatrixXd a6 = a4 * a2;
    Eigen::MatrixXd u = scaled * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                  b[5] * a4 + b[3] * a2 + b[1] * ident);
    Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                        b[2] * a2 + b[0] * ident;
    Eigen::MatrixXd result = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

std::vector<std::vector<std::string>> parse_csv_table(const std::string& text) {
    std::vector<std::vector<std::string>> table;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            auto begin = cell.find_first_not_of(" \t");
            auto end = cell.find_last_not_of(" \t");
            cells.push_back(begin == std::string::npos ? "" : cell.substr(begin, end - begin + 1));
        }
        table.push_back(std::move(cells));
    }
    return table;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = 0.5 * static_cast<double>(i + j) + 1.0;  // average of 1-based ranks
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

Channel matrix_exponential(const RateMatrix& q, double tau) {
    if (tau < 0.0) throw OutOfRange("tau must be non-negative");
    const std::size_t n = q.alphabet.size();
    Eigen::MatrixXd p = expm_pade(tau * q.q);

    // Column x of exp(tau Q) is the distribution of the destination given
    // source x; channel rows are the transpose.
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < n; ++y) sum += p(y, x);
        if (std::abs(sum - 1.0) > 1e-8)
            throw NumericalBlowup("matrix exponential row deviates from stochasticity by " +
                                  std::to_string(std::abs(sum - 1.0)));
        for (std::size_t y = 0; y < n; ++y) {
            double v = p(y, x);
            if (v < -1e-12 || v > 1.0 + 1e-12)
                throw NumericalBlowup("matrix exponential entry outside [0, 1]");
            rows[x][y] = std::clamp(v, 0.0, 1.0);
        }
    }
    return Channel(q.alphabet, q.alphabet, std::move(rows), true);
}

Distribution stationary_distribution(const RateMatrix& q) {
    const std::size_t n = q.alphabet.size();

    // Connectivity of the support graph; a reducible generator has no unique
    // stationary distribution.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y && (q.q(y, x) > 0.0 || q.q(x, y) > 0.0)) parent[find(x)] = find(y);
    for (std::size_t v = 1; v < n; ++v)
        if (find(v) != find(0))
            throw ReducibleChain("generator support graph is not connected");

    Eigen::MatrixXd system(n + 1, n);
    system.topRows(n) = q.q;
    system.row(n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);

    double residual = (q.q * pi).cwiseAbs().maxCoeff();
    if (residual > 1e-10)
        throw ReducibleChain("stationary residual " + std::to_string(residual) +
                             " exceeds tolerance");
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (pi(i) < -1e-12) throw ReducibleChain("stationary solution has negative mass");
        weights[i] = std::max(0.0, pi(i));
    }
    return Distribution(q.alphabet, std::move(weights), true);
}

SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw LengthMismatch("spearman requires equally long vectors");
    const std::size_t n = xs.size();
    if (n < 3) throw LengthMismatch("spearman requires at least 3 observations");

    auto rx = average_ranks(xs);
    auto ry = average_ranks(ys);
    double mean = 0.5 * static_cast<double>(n + 1);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mean, dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateVariance("an input vector is constant after ranking");
    double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

    SpearmanResult result;
    result.rho = rho;
    double denom = 1.0 - rho * rho;
    if (denom <= 0.0) {
        result.p = 0.0;
    } else {
        double t = rho * std::sqrt(static_cast<double>(n - 2) / denom);
        boost::math::students_t_distribution<double> dist(static_cast<double>(n - 2));
        result.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    return result;
}

Eigen::MatrixXd parse_distance_csv(const std::string& text, const Alphabet& alphabet) {
    auto table = parse_csv_table(text);
    const std::size_t n = alphabet.size();
    if (table.size() != n + 1)
        throw MalformedMatrix("distance table must have a header row plus one row per symbol");
    const auto& header = table[0];
    if (header.size() != n + 1)
        throw MalformedMatrix("distance table header must list every symbol");

    std::vector<std::size_t> col_of(n);  // column position of alphabet symbol i
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        for (std::size_t j = 1; j < header.size(); ++j)
            if (header[j] == alphabet.label(i)) {
                col_of[i] = j;
                found = true;
                break;
            }
        if (!found)
            throw MalformedMatrix("distance table is missing symbol '" + alphabet.label(i) + "'");
    }

    std::vector<std::size_t> row_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        for (std::size_t r = 1; r < table.size(); ++r)
            if (table[r].at(0) == alphabet.label(i)) {
                row_of[i] = r;
                found = true;
                break;
            }
        if (!found)
            throw MalformedMatrix("distance table is missing row '" + alphabet.label(i) + "'");
    }

    Eigen::MatrixXd dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = table[row_of[i]];
        if (row.size() != n + 1)
            throw MalformedMatrix("distance table rows must have one entry per symbol");
        for (std::size_t j = 0; j < n; ++j) {
            try {
                dist(i, j) = std::stod(row.at(col_of[j]));
            } catch (const std::exception&) {
                throw MalformedMatrix("non-numeric distance entry '" + row.at(col_of[j]) + "'");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist(i, i) != 0.0) throw MalformedMatrix("distance diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(dist(i, j) - dist(j, i)) > 1e-9)
                throw MalformedMatrix("distance table must be symmetric");
    }
    return dist;
}

PamReport analyze_pam(const ExchangeabilityModel& model, double tau,
                      const std::optional<Eigen::MatrixXd>& distances, bool normalize,
                      InfoBase base) {
    RateMatrix q = build_rate_matrix(model, normalize);
    Channel channel = matrix_exponential(q, tau);
    Distribution source = stationary_distribution(q);

    double freq_gap = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i)
        freq_gap = std::max(freq_gap, std::abs(source[i] - model.frequencies[i]));

    DecompositionReport decomposition = decompose_channel(channel, source, base);

    PamReport report{.tau = tau,
                     .normalized = normalize,
                     .channel = std::move(channel),
                     .source = source,
                     .decomposition = std::move(decomposition),
                     .stationary_vs_frequencies = freq_gap};

    if (distances) {
        const std::size_t n = model.alphabet.size();
        if (distances->rows() != static_cast<Eigen::Index>(n) ||
            distances->cols() != static_cast<Eigen::Index>(n))
            throw AlphabetMismatch("distance matrix must cover the model alphabet");
        std::vector<double> outl(n, 0.0), copies(n), transs(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) outl[i] += (*distances)(i, j);
            outl[i] /= static_cast<double>(n - 1);
            copies[i] = report.decomposition.per_message[i].copy;
            transs[i] = report.decomposition.per_message[i].transformation;
        }
        PamCorrelations corr;
        SpearmanResult sc = spearman(outl, copies);
        SpearmanResult st = spearman(outl, transs);
        corr.copy_rho = sc.rho;
        corr.copy_p = sc.p;
        corr.trans_rho = st.rho;
        corr.trans_p = st.p;
        report.outlierness = std::move(outl);
        report.correlations = corr;
    }
    return report;
}

}  // namespace copyinfo
