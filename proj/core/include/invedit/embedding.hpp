#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "invedit/generator.hpp"
#include "invedit/image.hpp"
#include "invedit/latent.hpp"

namespace invedit {

struct LossWeights {
  double lambda_vgg = 1.0;
  double lambda_mse = 1.0;
};

// Bias-corrected Adam moments for one latent code.
struct AdamState {
  RowMatrixXd m;
  RowMatrixXd v;
  int t = 0;
  double eta = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;

  static AdamState fresh(int layers, int dim);
};

// In-place Adam update of w from grad. Increments state.t.
void adam_step(LatentCode& w, const RowMatrixXd& grad, AdamState& state);

struct RandomInit {
  std::uint64_t seed = 0;
};
struct MeanLatentInit {
  int samples = 10000;
  std::uint64_t seed = 0;
};
// Ridge least-squares pre-image of the target's logits; valid only for
// LinearGenerator (lambda = 1e-3). Other generators raise Unsupported.
struct EncoderInit {};

using InitStrategy = std::variant<RandomInit, MeanLatentInit, EncoderInit>;

struct EmbedConfig {
  int iterations = 1000;
  InitStrategy init = RandomInit{};
  LossWeights weights;
  AdamState adam;       // t/m/v ignored as input; hyperparameters used
  int vgg_image_size = 0;  // 0: generator out_size / 4 (floor 1)
  int mse_image_size = 0;  // 0: generator out_size
};

struct EmbeddingResult {
  LatentCode w_star;
  double best_loss = 0.0;
  int best_iteration = 0;           // 0-based index into loss_trace
  int iterations_run = 0;
  std::vector<double> loss_trace;   // loss before each update, length iterations
};

LatentCode init_latent(const InitStrategy& strategy, const GeneratorSpec& gen,
                       const ImageBuf* target);

// (1/N_F) * squared feature distance.
double perceptual_loss(const FeatureExtractor& ext, const ImageBuf& a,
                       const ImageBuf& b);

// (1/N) * squared pixel distance, N = h*w*c.
double pixel_mse(const ImageBuf& a, const ImageBuf& b);

// lambda_vgg * perceptual_loss at vgg_size + lambda_mse * pixel_mse at
// mse_size, each after area-downsampling both images to that size.
double total_loss(const LossWeights& weights, const FeatureExtractor& ext,
                  const ImageBuf& gen_img, const ImageBuf& target, int vgg_size,
                  int mse_size);

// total_loss plus its gradient with respect to gen_img pixels.
double total_loss_grad(const LossWeights& weights, const FeatureExtractor& ext,
                       const ImageBuf& gen_img, const ImageBuf& target,
                       int vgg_size, int mse_size, Array3* grad_out);

// Inverts target into the generator's latent space by gradient descent on
// total_loss; keeps the best latent seen. Deterministic for fixed inputs.
EmbeddingResult embed(const ImageBuf& target, const GeneratorSpec& gen,
                      const FeatureExtractor& ext, const EmbedConfig& cfg);

}  // namespace invedit
