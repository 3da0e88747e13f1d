#pragma once

#include <span>
#include <string>
#include <vector>

#include "simcal/fitness.hpp"
#include "simcal/param_space.hpp"
#include "simcal/rng.hpp"

namespace simcal {

/// Rows of (chromosome, fitness) from uniform sampling of the space; the
/// input to the correlation and regression analyses.
struct SampleMatrix {
    ParameterSpace space;
    std::vector<Chromosome> chromosomes;
    std::vector<double> fitness;

    std::size_t rows() const { return chromosomes.size(); }
    // Values of one parameter across all rows.
    std::vector<double> column(std::size_t param) const;
};

// n uniformly sampled chromosomes, each scored through the evaluator.
SampleMatrix run_sampling(const ParameterSpace& space, Evaluator& evaluator, int n, Rng& rng);

// Sample Pearson product-moment correlation. Throws Errc::degenerate_data
// when either vector is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationEntry {
    std::string param;
    double r = 0.0;
    double r_squared = 0.0;
    bool defined = false; // false when the column was constant
};

struct CorrelationReport {
    std::vector<CorrelationEntry> entries; // one per parameter, space order
};

CorrelationReport correlation_report(const SampleMatrix& m);

struct RegressionTerm {
    std::string name; // "intercept" or a parameter name
    double coefficient = 0.0;
    double std_error = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
};

struct RegressionReport {
    std::vector<RegressionTerm> terms; // intercept first, then parameters
    double r_squared = 0.0;
    int observations = 0;
    int dof = 0; // n - p - 1
};

// Ordinary least squares of fitness on all parameters plus an intercept,
// solved by Householder QR. Standard errors come from the residual variance
// and the inverse Gram matrix; p-values from the two-sided Student-t test.
// Throws Errc::degenerate_data on rank deficiency, naming the columns.
RegressionReport ols_fit(const SampleMatrix& m);

// Regularized incomplete beta function I_x(a, b), evaluated with the
// continued-fraction expansion.
double regularized_incomplete_beta(double a, double b, double x);

// Student-t cumulative distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);

// Two-sided p-value for a t statistic.
double t_test_p_value(double t, double df);

} // namespace simcal
