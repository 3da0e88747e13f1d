#include "simcal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "simcal/error.hpp"

namespace simcal {

std::vector<double> SampleMatrix::column(std::size_t param) const {
    std::vector<double> out;
    out.reserve(chromosomes.size());
    for (const auto& c : chromosomes) out.push_back(c.values[param]);
    return out;
}

SampleMatrix run_sampling(const ParameterSpace& space, Evaluator& evaluator, int n, Rng& rng) {
    if (n < 2) throw Error(Errc::invalid_argument, "sampling needs at least 2 rows");
    SampleMatrix m;
    m.space = space;
    m.chromosomes.reserve(static_cast<std::size_t>(n));
    m.fitness.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Chromosome c = sample_uniform(space, rng);
        m.fitness.push_back(evaluator.evaluate(c).f);
        m.chromosomes.push_back(std::move(c));
    }
    return m;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(Errc::invalid_argument, "vector lengths differ");
    if (x.size() < 2) throw Error(Errc::invalid_argument, "pearson needs at least 2 points");
    const auto n = static_cast<double>(x.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(Errc::degenerate_data, "correlation undefined for a constant vector");
    }
    return sxy / std::sqrt(sxx * syy);
}

CorrelationReport correlation_report(const SampleMatrix& m) {
    if (m.rows() < 2) throw Error(Errc::invalid_argument, "need at least 2 rows");
    CorrelationReport report;
    for (std::size_t p = 0; p < m.space.size(); ++p) {
        CorrelationEntry entry;
        entry.param = m.space[p].name;
        try {
            entry.r = pearson(m.column(p), m.fitness);
            entry.r_squared = entry.r * entry.r;
            entry.defined = true;
        } catch (const Error&) {
            entry.r = std::numeric_limits<double>::quiet_NaN();
            entry.r_squared = std::numeric_limits<double>::quiet_NaN();
            entry.defined = false;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double incbeta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error(Errc::invalid_argument, "incomplete beta requires a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // Use the symmetry relation where the continued fraction converges fast.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * incbeta_cf(a, b, x) / a;
    }
    return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw Error(Errc::invalid_argument, "degrees of freedom must be > 0");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double t_test_p_value(double t, double df) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

RegressionReport ols_fit(const SampleMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.rows());
    const auto p = static_cast<Eigen::Index>(m.space.size());
    if (n <= p + 1) {
        throw Error(Errc::invalid_argument,
                    "regression needs more rows than parameters plus intercept");
    }

    Eigen::MatrixXd design(n, p + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        const auto& values = m.chromosomes[static_cast<std::size_t>(i)].values;
        for (Eigen::Index j = 0; j < p; ++j) design(i, j + 1) = values[static_cast<std::size_t>(j)];
        y(i) = m.fitness[static_cast<std::size_t>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p + 1) {
        // Columns permuted past the numerical rank are the dependent ones.
        const auto& perm = qr.colsPermutation().indices();
        std::string collinear;
        for (Eigen::Index pos = qr.rank(); pos <= p; ++pos) {
            const Eigen::Index j = perm(pos);
            if (!collinear.empty()) collinear += ", ";
            collinear += j == 0 ? "intercept" : m.space[static_cast<std::size_t>(j - 1)].name;
        }
        throw Error(Errc::degenerate_data, "design matrix is rank deficient; collinear columns: " +
                                               collinear);
    }

    const Eigen::VectorXd coef = qr.solve(y);
    const Eigen::VectorXd residuals = y - design * coef;
    const double ssr = residuals.squaredNorm();
    const double mean_y = y.mean();
    const double sst = (y.array() - mean_y).square().sum();
    const auto dof = n - p - 1;
    const double sigma2 = std::max(ssr, 0.0) / static_cast<double>(dof);

    // (X'X)^-1 from the decomposition: X P = Q R gives
    // (X'X)^-1 = P (R^-1 R^-T) P'.
    const Eigen::MatrixXd r_top =
        qr.matrixR().topRows(p + 1).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r_top.triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(p + 1, p + 1));
    const Eigen::MatrixXd gram_inv =
        qr.colsPermutation() * (r_inv * r_inv.transpose()) *
        qr.colsPermutation().transpose();

    RegressionReport report;
    report.observations = static_cast<int>(n);
    report.dof = static_cast<int>(dof);
    report.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    for (Eigen::Index j = 0; j <= p; ++j) {
        RegressionTerm term;
        term.name = j == 0 ? "intercept" : m.space[static_cast<std::size_t>(j - 1)].name;
        term.coefficient = coef(j);
        term.std_error = std::sqrt(std::max(0.0, sigma2 * gram_inv(j, j)));
        if (term.std_error > 0.0) {
            term.t_stat = term.coefficient / term.std_error;
        } else {
            // Zero residual variance: the fit is exact.
            term.t_stat = term.coefficient == 0.0
                              ? 0.0
                              : std::copysign(std::numeric_limits<double>::infinity(),
                                              term.coefficient);
        }
        term.p_value = term.t_stat == 0.0 ? 1.0 : t_test_p_value(term.t_stat, static_cast<double>(dof));
        report.terms.push_back(std::move(term));
    }
    return report;
}

} // namespace simcal
