#include "nlpc/schmidt.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace nlpc {

SchmidtResult schmidt_decompose(const Eigen::MatrixXcd& amplitude, double d_signal, double d_idler, double cutoff) {
    if (amplitude.size() == 0) throw DomainError("empty joint spectrum");
    if (!(d_signal > 0.0) || !(d_idler > 0.0)) throw DomainError("grid steps must be positive");
    if (!amplitude.allFinite()) throw DomainError("joint spectrum contains non-finite values");
    const double scale = amplitude.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw DomainError("joint spectrum is identically zero");

    // On a uniform grid the measure sqrt(dw_s dw_i) scales every singular value
    // alike and drops out of lambda_n; dividing by the peak keeps the SVD well scaled.
    const Eigen::MatrixXcd m = amplitude / scale;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const Eigen::VectorXd s = svd.singularValues();

    SchmidtResult r;
    const double smax = s(0);
    double total = 0.0;
    double kept = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double w = s(k) * s(k);
        total += w;
        if (s(k) >= cutoff * smax) {
            kept += w;
            r.eigenvalues.push_back(w);
        }
    }
    r.modes_retained = static_cast<int>(r.eigenvalues.size());
    r.truncation_error = (total - kept) / total;
    double purity = 0.0;
    for (auto& l : r.eigenvalues) {
        l /= kept;
        purity += l * l;
    }
    r.schmidt_number = 1.0 / purity;
    return r;
}

SchmidtResult schmidt_decompose(const JointSpectrum& js, SchmidtInput input, double cutoff) {
    if (input == SchmidtInput::modulus)
        return schmidt_decompose(js.amplitude.cwiseAbs().cast<std::complex<double>>(), js.signal_step(),
                                 js.idler_step(), cutoff);
    return schmidt_decompose(js.amplitude, js.signal_step(), js.idler_step(), cutoff);
}

}  // namespace nlpc
