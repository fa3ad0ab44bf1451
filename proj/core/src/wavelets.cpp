#include "specgraph/wavelets.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace specgraph {

namespace {
constexpr double kZeroFeature = 1e-12;
}

double ExpLowpass::value(double x) const { return std::exp(-x); }
double ExpLowpass::deriv(double x) const { return -std::exp(-x); }

double ExpBandpass::value(double x) const { return x * std::exp(-x); }
double ExpBandpass::deriv(double x) const { return (1.0 - x) * std::exp(-x); }

const AtomSet& AtomSet::exponential() {
    static const ExpLowpass lowpass;
    static const ExpBandpass bandpass;
    static const AtomSet set{&lowpass, &bandpass};
    return set;
}

Eigen::VectorXd FilterBank::pack_log_scales() const {
    const int stride = 1 + num_bandpass();
    Eigen::VectorXd packed(num_scale_params());
    for (int k = 0; k < num_filters(); ++k) {
        packed(static_cast<Eigen::Index>(k) * stride) = filters[static_cast<std::size_t>(k)].log_lowpass_scale;
        packed.segment(static_cast<Eigen::Index>(k) * stride + 1, num_bandpass()) =
            filters[static_cast<std::size_t>(k)].log_bandpass_scales;
    }
    return packed;
}

void FilterBank::unpack_log_scales(const Eigen::VectorXd& packed) {
    if (packed.size() != num_scale_params()) {
        throw std::invalid_argument("packed scale vector has length " +
                                    std::to_string(packed.size()) + ", expected " +
                                    std::to_string(num_scale_params()));
    }
    const int stride = 1 + num_bandpass();
    for (int k = 0; k < num_filters(); ++k) {
        filters[static_cast<std::size_t>(k)].log_lowpass_scale =
            packed(static_cast<Eigen::Index>(k) * stride);
        filters[static_cast<std::size_t>(k)].log_bandpass_scales =
            packed.segment(static_cast<Eigen::Index>(k) * stride + 1, num_bandpass());
    }
}

FilterBank FilterBank::random_init(int num_filters, int num_bandpass, double lowpass_lo,
                                   double lowpass_hi, double bandpass_lo, double bandpass_hi,
                                   Rng& rng) {
    if (num_filters < 1) {
        throw std::invalid_argument("filter bank needs at least one filter");
    }
    if (num_bandpass < 0) {
        throw std::invalid_argument("number of band-pass atoms cannot be negative");
    }
    FilterBank bank;
    bank.filters.resize(static_cast<std::size_t>(num_filters));
    for (auto& filter : bank.filters) {
        filter.log_lowpass_scale = std::log(rng.uniform_real(lowpass_lo, lowpass_hi));
        filter.log_bandpass_scales.resize(num_bandpass);
        for (int l = 0; l < num_bandpass; ++l) {
            filter.log_bandpass_scales(l) = std::log(rng.uniform_real(bandpass_lo, bandpass_hi));
        }
    }
    return bank;
}

double filter_response(const WaveletFilter& filter, double lambda, const AtomSet& atoms) {
    double g = atoms.lowpass->value(std::exp(filter.log_lowpass_scale) * lambda);
    for (int l = 0; l < filter.log_bandpass_scales.size(); ++l) {
        g += atoms.bandpass->value(std::exp(filter.log_bandpass_scales(l)) * lambda);
    }
    return g;
}

Eigen::VectorXd filter_response_gradient(const WaveletFilter& filter, double lambda,
                                         const AtomSet& atoms) {
    // d g / d log(s) = s * lambda * atom'(s * lambda).
    Eigen::VectorXd grad(1 + filter.log_bandpass_scales.size());
    const double alpha = std::exp(filter.log_lowpass_scale);
    grad(0) = alpha * lambda * atoms.lowpass->deriv(alpha * lambda);
    for (int l = 0; l < filter.log_bandpass_scales.size(); ++l) {
        const double beta = std::exp(filter.log_bandpass_scales(l));
        grad(l + 1) = beta * lambda * atoms.bandpass->deriv(beta * lambda);
    }
    return grad;
}

Eigen::VectorXd wavelet_feature_vector(const GraphSpectrum& spectrum, const FilterBank& bank,
                                       const AtomSet& atoms) {
    const int n = spectrum.num_nodes();
    const int d = spectrum.feature_dim();
    const int k = bank.num_filters();

    // Filter responses depend only on the eigenvalues; evaluate once per filter.
    Eigen::MatrixXd response_sq(k, n);
    for (int f = 0; f < k; ++f) {
        for (int j = 0; j < n; ++j) {
            const double g = filter_response(bank.filters[static_cast<std::size_t>(f)],
                                             spectrum.eigenvalues(j), atoms);
            response_sq(f, j) = g * g;
        }
    }

    Eigen::VectorXd features(static_cast<Eigen::Index>(k) * d);
    for (int dim = 0; dim < d; ++dim) {
        for (int f = 0; f < k; ++f) {
            const double sq = response_sq.row(f).dot(spectrum.coeff_sq.row(dim));
            features(static_cast<Eigen::Index>(dim) * k + f) = std::sqrt(std::max(sq, 0.0));
        }
    }
    return features;
}

Eigen::MatrixXd wavelet_feature_jacobian(const GraphSpectrum& spectrum, const FilterBank& bank,
                                         const AtomSet& atoms) {
    const int n = spectrum.num_nodes();
    const int d = spectrum.feature_dim();
    const int k = bank.num_filters();
    const int stride = 1 + bank.num_bandpass();

    Eigen::MatrixXd jacobian =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k) * d, bank.num_scale_params());

    for (int f = 0; f < k; ++f) {
        const WaveletFilter& filter = bank.filters[static_cast<std::size_t>(f)];
        Eigen::VectorXd response(n);
        Eigen::MatrixXd response_grad(stride, n);  // per-eigenvalue d g / d log-scale
        for (int j = 0; j < n; ++j) {
            response(j) = filter_response(filter, spectrum.eigenvalues(j), atoms);
            response_grad.col(j) = filter_response_gradient(filter, spectrum.eigenvalues(j), atoms);
        }

        for (int dim = 0; dim < d; ++dim) {
            double w_sq = 0.0;
            for (int j = 0; j < n; ++j) w_sq += response(j) * response(j) * spectrum.coeff_sq(dim, j);
            const double w = std::sqrt(std::max(w_sq, 0.0));
            if (w < kZeroFeature) continue;  // subgradient 0 at the norm's kink

            // dw/dtheta = (1/w) sum_j g(lambda_j) dg/dtheta(lambda_j) xhat_j^2
            for (int s = 0; s < stride; ++s) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) {
                    acc += response(j) * response_grad(s, j) * spectrum.coeff_sq(dim, j);
                }
                jacobian(static_cast<Eigen::Index>(dim) * k + f,
                         static_cast<Eigen::Index>(f) * stride + s) = acc / w;
            }
        }
    }
    return jacobian;
}

Eigen::MatrixXd wavelet_feature_matrix(const std::vector<GraphSpectrum>& spectra,
                                       const FilterBank& bank, const AtomSet& atoms) {
    if (spectra.empty()) throw std::invalid_argument("no graphs supplied");
    const int d = spectra.front().feature_dim();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(spectra.size()),
                        static_cast<Eigen::Index>(bank.num_filters()) * d);
    for (std::size_t i = 0; i < spectra.size(); ++i) {
        if (spectra[i].feature_dim() != d) {
            throw std::invalid_argument("graphs disagree on feature dimension");
        }
        out.row(static_cast<Eigen::Index>(i)) =
            wavelet_feature_vector(spectra[i], bank, atoms).transpose();
    }
    return out;
}

Eigen::VectorXd wavelet_features(const Graph& g, const SpectralDecomposition& decomp,
                                 const FilterBank& bank, const AtomSet& atoms) {
    const int n = g.num_nodes;
    const int d = g.feature_dim();
    const int k = bank.num_filters();

    Eigen::VectorXd features(static_cast<Eigen::Index>(k) * d);
    for (int f = 0; f < k; ++f) {
        Eigen::VectorXd response(n);
        for (int j = 0; j < n; ++j) {
            response(j) = filter_response(bank.filters[static_cast<std::size_t>(f)],
                                          decomp.eigenvalues(j), atoms);
        }
        for (int dim = 0; dim < d; ++dim) {
            const Eigen::VectorXd coeffs = graph_fourier_transform(decomp, g.features.col(dim));
            const Eigen::VectorXd filtered =
                decomp.eigenvectors * (response.array() * coeffs.array()).matrix();
            features(static_cast<Eigen::Index>(dim) * k + f) = filtered.norm();
        }
    }
    return features;
}

}  // namespace specgraph
