#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specgraph/graph.hpp"
#include "specgraph/rng.hpp"
#include "specgraph/spectral.hpp"

namespace specgraph {

// Atomic filter shape evaluated at a scaled argument x = scale * lambda.
// Implementations must be smooth; deriv is d(value)/dx, which the scale
// gradient chains with dx/d(scale) = lambda.
class FilterAtom {
public:
    virtual ~FilterAtom() = default;
    virtual double value(double x) const = 0;
    virtual double deriv(double x) const = 0;
};

// Low-pass h(x) = exp(-x): h(0) = 1, decays over the spectrum.
class ExpLowpass final : public FilterAtom {
public:
    double value(double x) const override;
    double deriv(double x) const override;
};

// Band-pass b(x) = x * exp(-x): zero at DC, single peak at x = 1, so a scale
// beta places the peak at lambda = 1/beta.
class ExpBandpass final : public FilterAtom {
public:
    double value(double x) const override;
    double deriv(double x) const override;
};

struct AtomSet {
    const FilterAtom* lowpass = nullptr;
    const FilterAtom* bandpass = nullptr;

    static const AtomSet& exponential();
};

// One filter g(lambda) = h(alpha * lambda) + sum_l b(beta_l * lambda).
// Scales live in log-space so plain unconstrained optimization keeps them
// positive.
struct WaveletFilter {
    double log_lowpass_scale = 0.0;
    Eigen::VectorXd log_bandpass_scales;  // length L (possibly 0)
};

struct FilterBank {
    std::vector<WaveletFilter> filters;  // K filters, all with the same L

    int num_filters() const { return static_cast<int>(filters.size()); }
    int num_bandpass() const {
        return filters.empty() ? 0 : static_cast<int>(filters[0].log_bandpass_scales.size());
    }
    int num_scale_params() const { return num_filters() * (1 + num_bandpass()); }

    // Filter-major packing: [log a_0, log b_01..log b_0L, log a_1, ...].
    Eigen::VectorXd pack_log_scales() const;
    void unpack_log_scales(const Eigen::VectorXd& packed);

    // K filters with L band-passes each; scales drawn uniformly (in linear
    // space) from the given ranges, per filter alpha first then each beta.
    static FilterBank random_init(int num_filters, int num_bandpass, double lowpass_lo,
                                  double lowpass_hi, double bandpass_lo, double bandpass_hi,
                                  Rng& rng);
};

double filter_response(const WaveletFilter& filter, double lambda, const AtomSet& atoms);

// d(filter_response)/d(log-scale) for every scale of one filter, at one lambda.
// Entry 0 is the low-pass scale, then the band-pass scales in order.
Eigen::VectorXd filter_response_gradient(const WaveletFilter& filter, double lambda,
                                         const AtomSet& atoms);

// Feature vector over a cached spectrum, dimension-major: entry d*K + k is
// w_{d,k} = sqrt(sum_j g_k(lambda_j)^2 xhat_{d,j}^2).
Eigen::VectorXd wavelet_feature_vector(const GraphSpectrum& spectrum, const FilterBank& bank,
                                       const AtomSet& atoms);

// Jacobian of the feature vector with respect to the packed log-scales:
// (K*D) x (K*(1+L)). Rows follow wavelet_feature_vector order; columns follow
// pack_log_scales order. Features below 1e-12 get a zero gradient row.
Eigen::MatrixXd wavelet_feature_jacobian(const GraphSpectrum& spectrum, const FilterBank& bank,
                                         const AtomSet& atoms);

// Spatial-domain form ||U g(Lambda) U^T x_d||_2, kept for agreement checks
// against the spectral form above.
Eigen::VectorXd wavelet_features(const Graph& g, const SpectralDecomposition& decomp,
                                 const FilterBank& bank, const AtomSet& atoms);

// One row per graph; all graphs must share a feature dimension.
Eigen::MatrixXd wavelet_feature_matrix(const std::vector<GraphSpectrum>& spectra,
                                       const FilterBank& bank,
                                       const AtomSet& atoms = AtomSet::exponential());

}  // namespace specgraph
