#include "invedit/embedding.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <string>

#include "invedit/error.hpp"
#include "invedit/prng.hpp"

namespace invedit {

AdamState AdamState::fresh(int layers, int dim) {
  AdamState s;
  s.m = RowMatrixXd::Zero(layers, dim);
  s.v = RowMatrixXd::Zero(layers, dim);
  return s;
}

void adam_step(LatentCode& w, const RowMatrixXd& grad, AdamState& state) {
  if (grad.rows() != w.values.rows() || grad.cols() != w.values.cols() ||
      state.m.rows() != w.values.rows() || state.m.cols() != w.values.cols())
    raise(ErrorCode::ShapeMismatch, "adam state/gradient shape mismatch");
  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(state.beta1, state.t);
  const double c2 = 1.0 - std::pow(state.beta2, state.t);
  const RowMatrixXd mhat = state.m / c1;
  const RowMatrixXd vhat = state.v / c2;
  w.values.array() -=
      state.eta * mhat.array() / (vhat.array().sqrt() + state.eps);
}

namespace {

double clamped_logit(double p) {
  const double eps = 1e-6;
  const double q = std::min(1.0 - eps, std::max(eps, p));
  return std::log(q / (1.0 - q));
}

LatentCode encoder_init(const GeneratorSpec& gen, const ImageBuf& target) {
  const auto* lin = dynamic_cast<const LinearGenerator*>(&gen);
  if (!lin)
    raise(ErrorCode::Unsupported, "encoder init requires a linear generator");
  if (target.height() != gen.out_size() || target.width() != gen.out_size() ||
      target.channels() != gen.channels())
    raise(ErrorCode::ShapeMismatch, "encoder target shape mismatch");

  const Eigen::MatrixXd& a = lin->weight();
  Eigen::VectorXd rhs(a.rows());
  for (Eigen::Index i = 0; i < rhs.size(); ++i)
    rhs[i] = clamped_logit(target.data().v[i]) - lin->bias()[i];

  const double lambda = 1e-3;
  const Eigen::Index k = a.cols();
  const Eigen::MatrixXd gram =
      a.transpose() * a + lambda * Eigen::MatrixXd::Identity(k, k);
  const Eigen::VectorXd x = gram.ldlt().solve(a.transpose() * rhs);

  const auto [layers, dim] = gen.latent_shape();
  RowMatrixXd values(layers, dim);
  Eigen::Map<Eigen::VectorXd>(values.data(), values.size()) = x;
  return LatentCode(std::move(values));
}

}  // namespace

LatentCode init_latent(const InitStrategy& strategy, const GeneratorSpec& gen,
                       const ImageBuf* target) {
  const auto [layers, dim] = gen.latent_shape();
  if (const auto* r = std::get_if<RandomInit>(&strategy))
    return sample_latent(r->seed, layers, dim);
  if (const auto* m = std::get_if<MeanLatentInit>(&strategy)) {
    if (m->samples < 1) raise(ErrorCode::TooFewSamples, "mean init needs samples >= 1");
    // One stream, codes drawn back to back, then averaged.
    Pcg64 rng(m->seed);
    RowMatrixXd acc = RowMatrixXd::Zero(layers, dim);
    RowMatrixXd code(layers, dim);
    for (int s = 0; s < m->samples; ++s) {
      for (Eigen::Index i = 0; i < code.size(); ++i)
        code.data()[i] = rng.next_normal();
      acc += code;
    }
    return LatentCode(acc / static_cast<double>(m->samples));
  }
  if (!target) raise(ErrorCode::MissingTarget, "encoder init needs a target image");
  return encoder_init(gen, *target);
}

double perceptual_loss(const FeatureExtractor& ext, const ImageBuf& a,
                       const ImageBuf& b) {
  if (!a.same_shape(b)) raise(ErrorCode::ShapeMismatch, "perceptual loss inputs differ in shape");
  const Eigen::VectorXd diff = ext.extract(a) - ext.extract(b);
  return diff.squaredNorm() / static_cast<double>(diff.size());
}

double pixel_mse(const ImageBuf& a, const ImageBuf& b) {
  if (!a.same_shape(b)) raise(ErrorCode::ShapeMismatch, "mse inputs differ in shape");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data().v[i] - b.data().v[i];
    s += d * d;
  }
  return s / static_cast<double>(a.data().size());
}

double total_loss(const LossWeights& weights, const FeatureExtractor& ext,
                  const ImageBuf& gen_img, const ImageBuf& target, int vgg_size,
                  int mse_size) {
  return total_loss_grad(weights, ext, gen_img, target, vgg_size, mse_size,
                         nullptr);
}

double total_loss_grad(const LossWeights& weights, const FeatureExtractor& ext,
                       const ImageBuf& gen_img, const ImageBuf& target,
                       int vgg_size, int mse_size, Array3* grad_out) {
  if (!(weights.lambda_vgg >= 0.0) || !(weights.lambda_mse >= 0.0))
    raise(ErrorCode::NonFiniteValue, "loss weights must be finite and nonnegative");
  if (weights.lambda_vgg == 0.0 && weights.lambda_mse == 0.0)
    raise(ErrorCode::EmptyInput, "at least one loss weight must be positive");
  if (!gen_img.same_shape(target))
    raise(ErrorCode::ShapeMismatch, "loss inputs differ in shape");

  const int n = gen_img.height();
  double loss = 0.0;
  Array3 grad;
  if (grad_out) grad = Array3(n, gen_img.width(), gen_img.channels());

  if (weights.lambda_mse > 0.0) {
    const ImageBuf gm = area_downsample(gen_img, mse_size);
    const ImageBuf tm = area_downsample(target, mse_size);
    loss += weights.lambda_mse * pixel_mse(gm, tm);
    if (grad_out) {
      Array3 g(mse_size, mse_size, gm.channels());
      const double scale =
          weights.lambda_mse * 2.0 / static_cast<double>(g.size());
      for (std::size_t i = 0; i < g.size(); ++i)
        g.v[i] = scale * (gm.data().v[i] - tm.data().v[i]);
      const Array3 up = area_upsample_grad(g, n / mse_size);
      for (std::size_t i = 0; i < grad.size(); ++i) grad.v[i] += up.v[i];
    }
  }
  if (weights.lambda_vgg > 0.0) {
    const ImageBuf gv = area_downsample(gen_img, vgg_size);
    const ImageBuf tv = area_downsample(target, vgg_size);
    const Eigen::VectorXd fg = ext.extract(gv);
    const Eigen::VectorXd ft = ext.extract(tv);
    const Eigen::VectorXd diff = fg - ft;
    loss += weights.lambda_vgg * diff.squaredNorm() /
            static_cast<double>(diff.size());
    if (grad_out) {
      const Eigen::VectorXd up_feat =
          (weights.lambda_vgg * 2.0 / static_cast<double>(diff.size())) * diff;
      const Array3 g = ext.vjp(gv, up_feat);
      const Array3 up = area_upsample_grad(g, n / vgg_size);
      for (std::size_t i = 0; i < grad.size(); ++i) grad.v[i] += up.v[i];
    }
  }
  if (grad_out) *grad_out = std::move(grad);
  return loss;
}

EmbeddingResult embed(const ImageBuf& target, const GeneratorSpec& gen,
                      const FeatureExtractor& ext, const EmbedConfig& cfg) {
  if (cfg.iterations < 1) raise(ErrorCode::TooSmall, "iterations must be >= 1");
  const int n = gen.out_size();
  if (target.channels() != gen.channels())
    raise(ErrorCode::ShapeMismatch, "target channel count does not match generator");
  // Targets larger than the generator output are area-downsampled once.
  ImageBuf t = target;
  if (target.height() != n || target.width() != n) {
    if (target.height() != target.width() || target.height() % n != 0)
      raise(ErrorCode::ShapeMismatch, "target not resampleable to generator size");
    t = area_downsample(target, n);
  }
  const int vgg_size =
      cfg.vgg_image_size > 0 ? cfg.vgg_image_size : std::max(1, n / 4);
  const int mse_size = cfg.mse_image_size > 0 ? cfg.mse_image_size : n;
  if (n % vgg_size != 0 || n % mse_size != 0)
    raise(ErrorCode::ShapeMismatch, "loss sizes must divide generator size");

  LatentCode w = init_latent(cfg.init, gen, &t);
  AdamState state = AdamState::fresh(w.layers(), w.dim());
  state.eta = cfg.adam.eta;
  state.beta1 = cfg.adam.beta1;
  state.beta2 = cfg.adam.beta2;
  state.eps = cfg.adam.eps;

  EmbeddingResult res;
  res.loss_trace.reserve(cfg.iterations);
  res.best_loss = std::numeric_limits<double>::infinity();

  for (int it = 0; it < cfg.iterations; ++it) {
    const ImageBuf img = gen.generate(w);
    Array3 grad_img;
    const double loss = total_loss_grad(cfg.weights, ext, img, t, vgg_size,
                                        mse_size, &grad_img);
    if (!std::isfinite(loss))
      raise(ErrorCode::NonFiniteLoss,
            "loss diverged at iteration " + std::to_string(it));
    res.loss_trace.push_back(loss);
    if (loss < res.best_loss) {
      res.best_loss = loss;
      res.best_iteration = it;
      res.w_star = w;  // captured before the update that moves past it
    }
    const RowMatrixXd grad_w = gen.vjp(w, grad_img);
    adam_step(w, grad_w, state);
  }
  res.iterations_run = static_cast<int>(res.loss_trace.size());
  return res;
}

}  // namespace invedit
