#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nlpc/jsa.hpp"

namespace nlpc {

struct SchmidtResult {
    double schmidt_number = 1.0;
    std::vector<double> eigenvalues;  // normalized, descending
    int modes_retained = 0;
    double truncation_error = 0.0;    // discarded weight before renormalization
};

/// SVD of f(w_s, w_i) sqrt(dw_s dw_i). lambda_n = s_n^2 / sum s_k^2 over the
/// singular values kept (s_n >= cutoff * s_max); K = 1 / sum lambda_n^2.
/// Throws DomainError for an empty or all-zero matrix.
SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& amplitude, double d_signal = 1.0, double d_idler = 1.0,
                                double cutoff = 1e-12);

enum class SchmidtInput { amplitude, modulus };

SchmidtResult schmidt_decompose(const JointSpectrum& js, SchmidtInput input = SchmidtInput::amplitude,
                                double cutoff = 1e-12);

}  // namespace nlpc
