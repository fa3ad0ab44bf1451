#include "specgraph/energy.hpp"

#include <stdexcept>
#include <string>

namespace specgraph {

namespace {
constexpr double kEigenvalueSlack = 1e-9;

Eigen::VectorXd profile_from_spectrum(const Eigen::VectorXd& eigenvalues,
                                      const Eigen::MatrixXd& coeff_sq,
                                      const Eigen::VectorXd& eval_points) {
    const int n = static_cast<int>(eigenvalues.size());
    const int d = static_cast<int>(coeff_sq.rows());
    const int m = static_cast<int>(eval_points.size());

    Eigen::VectorXd values(static_cast<Eigen::Index>(m) * d);
    for (int f = 0; f < d; ++f) {
        // Eigenvalues are ascending, so each bin extends the previous one.
        double acc = 0.0;
        int j = 0;
        for (int b = 0; b < m; ++b) {
            while (j < n && eigenvalues(j) <= eval_points(b) + kEigenvalueSlack) {
                acc += coeff_sq(f, j);
                ++j;
            }
            values(static_cast<Eigen::Index>(f) * m + b) = acc;
        }
    }
    return values;
}
}  // namespace

double cumulative_energy(const SpectralDecomposition& decomp, const Eigen::VectorXd& signal,
                         double z) {
    const Eigen::VectorXd coeffs = graph_fourier_transform(decomp, signal);
    double acc = 0.0;
    for (int j = 0; j < coeffs.size(); ++j) {
        if (decomp.eigenvalues(j) <= z + kEigenvalueSlack) acc += coeffs(j) * coeffs(j);
    }
    return acc;
}

Eigen::VectorXd energy_eval_points(int num_eval_points) {
    if (num_eval_points < 2) {
        throw std::invalid_argument("need at least 2 evaluation points, got " +
                                    std::to_string(num_eval_points));
    }
    return Eigen::VectorXd::LinSpaced(num_eval_points, 0.0, 2.0);
}

EnergyProfile fourier_features(const Graph& g, const SpectralDecomposition& decomp,
                               int num_eval_points) {
    EnergyProfile profile;
    profile.eval_points = energy_eval_points(num_eval_points);

    const int d = g.feature_dim();
    Eigen::MatrixXd coeff_sq(d, g.num_nodes);
    for (int f = 0; f < d; ++f) {
        coeff_sq.row(f) =
            graph_fourier_transform(decomp, g.features.col(f)).array().square().transpose();
    }
    profile.values = profile_from_spectrum(decomp.eigenvalues, coeff_sq, profile.eval_points);
    return profile;
}

Eigen::VectorXd energy_profile_vector(const GraphSpectrum& spectrum, int num_eval_points) {
    return profile_from_spectrum(spectrum.eigenvalues, spectrum.coeff_sq,
                                 energy_eval_points(num_eval_points));
}

Eigen::MatrixXd energy_feature_matrix(const std::vector<GraphSpectrum>& spectra,
                                      int num_eval_points) {
    if (spectra.empty()) throw std::invalid_argument("no graphs supplied");
    const Eigen::VectorXd points = energy_eval_points(num_eval_points);
    const int d = spectra.front().feature_dim();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(spectra.size()),
                        static_cast<Eigen::Index>(num_eval_points) * d);
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        if (spectra[i].feature_dim() != d) {
            throw std::invalid_argument("graphs disagree on feature dimension");
        }
        out.row(static_cast<Eigen::Index>(i)) =
            profile_from_spectrum(spectra[i].eigenvalues, spectra[i].coeff_sq, points)
                .transpose();
    }
    return out;
}

}  // namespace specgraph
