#include "invedit/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "invedit/error.hpp"

namespace invedit {

namespace {

void check_same_shape(const ImageBuf& a, const ImageBuf& b) {
  if (!a.same_shape(b)) raise(ErrorCode::ShapeMismatch, "images differ in shape");
  if (a.empty()) raise(ErrorCode::EmptyInput, "empty image");
}

constexpr int kWin = 11;

std::array<double, kWin> gaussian_window() {
  std::array<double, kWin> w{};
  const double sigma = 1.5;
  double sum = 0.0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - (kWin - 1) / 2.0;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

// Separable valid-mode Gaussian filter of one channel plane.
std::vector<double> blur_valid(const std::vector<double>& src, int n,
                               const std::array<double, kWin>& w) {
  const int m = n - kWin + 1;
  std::vector<double> rows(static_cast<std::size_t>(n) * m);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < m; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWin; ++k) s += w[k] * src[y * n + x + k];
      rows[y * m + x] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(m) * m);
  for (int y = 0; y < m; ++y)
    for (int x = 0; x < m; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWin; ++k) s += w[k] * rows[(y + k) * m + x];
      out[y * m + x] = s;
    }
  return out;
}

Eigen::VectorXd unit_embedding(const FeatureExtractor& ext, const ImageBuf& img,
                               bool* zero) {
  Eigen::VectorXd f = ext.extract(img);
  const double norm = f.norm();
  if (norm == 0.0) {
    *zero = true;
    return f;
  }
  *zero = false;
  return f / norm;
}

// Symmetric PSD square root; eigenvalues below -1e-8 are rejected, small
// negatives are treated as zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    raise(ErrorCode::NonPSDProduct, "eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-8)
      raise(ErrorCode::NonPSDProduct, std::string(what) + " has a negative eigenvalue");
    ev[i] = ev[i] > 0.0 ? std::sqrt(ev[i]) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double psnr(const ImageBuf& a, const ImageBuf& b) {
  check_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data().v[i] - b.data().v[i];
    s += d * d;
  }
  const double mse = s / static_cast<double>(a.data().size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImageBuf& a, const ImageBuf& b) {
  check_same_shape(a, b);
  const int n = a.height();
  if (a.width() != n) raise(ErrorCode::ShapeMismatch, "ssim expects square images");
  if (n < kWin) raise(ErrorCode::TooSmall, "image smaller than the ssim window");

  const auto w = gaussian_window();
  const double c1 = 0.01 * 0.01;
  const double c2 = 0.03 * 0.03;
  const int m = n - kWin + 1;

  double total = 0.0;
  std::vector<double> px(static_cast<std::size_t>(n) * n);
  std::vector<double> py(px.size()), pxx(px.size()), pyy(px.size()), pxy(px.size());
  for (int ch = 0; ch < a.channels(); ++ch) {
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double va = a.at(y, x, ch);
        const double vb = b.at(y, x, ch);
        const std::size_t i = static_cast<std::size_t>(y) * n + x;
        px[i] = va;
        py[i] = vb;
        pxx[i] = va * va;
        pyy[i] = vb * vb;
        pxy[i] = va * vb;
      }
    const auto mx = blur_valid(px, n, w);
    const auto my = blur_valid(py, n, w);
    const auto mxx = blur_valid(pxx, n, w);
    const auto myy = blur_valid(pyy, n, w);
    const auto mxy = blur_valid(pxy, n, w);

    double acc = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
      const double vx = mxx[i] - mx[i] * mx[i];
      const double vy = myy[i] - my[i] * my[i];
      const double vxy = mxy[i] - mx[i] * my[i];
      const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * vxy + c2);
      const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
      acc += num / den;
    }
    total += acc / static_cast<double>(m * m);
  }
  return total / a.channels();
}

double perceptual_distance(const FeatureExtractor& ext, const ImageBuf& a,
                           const ImageBuf& b) {
  check_same_shape(a, b);
  bool za = false, zb = false;
  const Eigen::VectorXd u = unit_embedding(ext, a, &za);
  const Eigen::VectorXd v = unit_embedding(ext, b, &zb);
  if (za && zb) return 0.0;
  if (za || zb) raise(ErrorCode::ZeroEmbedding, "feature vector has zero norm");
  return (u - v).squaredNorm() / static_cast<double>(u.size());
}

GaussianFit fit_gaussian(const std::vector<Eigen::VectorXd>& feats) {
  if (feats.size() < 2) raise(ErrorCode::TooFewSamples, "need at least 2 feature vectors");
  const Eigen::Index d = feats.front().size();
  for (const auto& f : feats)
    if (f.size() != d) raise(ErrorCode::DimensionMismatch, "feature vectors differ in length");

  GaussianFit g;
  g.mu = Eigen::VectorXd::Zero(d);
  for (const auto& f : feats) g.mu += f;
  g.mu /= static_cast<double>(feats.size());

  g.sigma = Eigen::MatrixXd::Zero(d, d);
  for (const auto& f : feats) {
    const Eigen::VectorXd c = f - g.mu;
    g.sigma += c * c.transpose();
  }
  g.sigma /= static_cast<double>(feats.size() - 1);
  g.sigma += 1e-6 * Eigen::MatrixXd::Identity(d, d);
  return g;
}

double frechet_distance(const GaussianFit& g1, const GaussianFit& g2) {
  if (g1.mu.size() != g2.mu.size() || g1.sigma.rows() != g2.sigma.rows() ||
      g1.sigma.cols() != g1.sigma.rows() || g2.sigma.cols() != g2.sigma.rows())
    raise(ErrorCode::DimensionMismatch, "gaussian fits differ in dimension");

  const Eigen::MatrixXd s1h = psd_sqrt(g1.sigma, "first covariance");
  const Eigen::MatrixXd inner = s1h * g2.sigma * s1h;
  const Eigen::MatrixXd cross = psd_sqrt(inner, "covariance product");
  const double d = (g1.mu - g2.mu).squaredNorm() + g1.sigma.trace() +
                   g2.sigma.trace() - 2.0 * cross.trace();
  return d > 0.0 ? d : 0.0;
}

double identity_distance(const FeatureExtractor& embedder, const ImageBuf& a,
                         const ImageBuf& b) {
  check_same_shape(a, b);
  bool za = false, zb = false;
  const Eigen::VectorXd u = unit_embedding(embedder, a, &za);
  const Eigen::VectorXd v = unit_embedding(embedder, b, &zb);
  if (za && zb) return 0.0;
  if (za || zb) raise(ErrorCode::ZeroEmbedding, "embedding has zero norm");
  const double d = (u - v).squaredNorm();
  return d < 0.0 ? 0.0 : (d > 4.0 ? 4.0 : d);
}

}  // namespace invedit
