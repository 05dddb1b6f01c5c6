#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "invedit/generator.hpp"
#include "invedit/image.hpp"

namespace invedit {

struct MetricsReport {
  double psnr_db = 0.0;  // +inf when the images are identical
  double ssim = 0.0;
  double perceptual = 0.0;
  std::optional<double> frechet;
  std::optional<double> identity;
};

struct GaussianFit {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

// 10*log10(1/mse) for unit data range; +inf sentinel at mse 0.
double psnr(const ImageBuf& a, const ImageBuf& b);

// Gaussian-windowed SSIM, 11x11 window sigma 1.5, K1=0.01, K2=0.03, data
// range 1, windows fully inside the image, channels averaged. Needs n >= 11.
double ssim(const ImageBuf& a, const ImageBuf& b);

// Mean squared difference of unit-normalized feature vectors.
double perceptual_distance(const FeatureExtractor& ext, const ImageBuf& a,
                           const ImageBuf& b);

// Sample mean and unbiased covariance, covariance nudged by +1e-6*I.
GaussianFit fit_gaussian(const std::vector<Eigen::VectorXd>& feats);

// |mu1-mu2|^2 + Tr(S1 + S2 - 2*sqrtm(S1*S2)), square root taken by
// symmetric eigendecomposition of sqrtm(S1)*S2*sqrtm(S1).
double frechet_distance(const GaussianFit& g1, const GaussianFit& g2);

// Squared distance of unit-normalized embeddings, in [0, 4].
double identity_distance(const FeatureExtractor& embedder, const ImageBuf& a,
                         const ImageBuf& b);

}  // namespace invedit
