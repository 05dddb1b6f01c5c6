#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace invedit {

// Row-major so the in-memory layout matches the LAT1/DIR1 row-major dumps.
using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Layered latent code: one row per generator layer. A full StyleGAN W+ code
// is 18x512; the desk-scale default here is 4x16.
struct LatentCode {
  RowMatrixXd values;

  LatentCode() = default;
  explicit LatentCode(RowMatrixXd v) : values(std::move(v)) {}

  int layers() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
  bool same_shape(const LatentCode& o) const {
    return layers() == o.layers() && dim() == o.dim();
  }
};

void validate_latent(const LatentCode& w);

// Entries i.i.d. standard normal from a fresh Pcg64 stream for `seed`,
// filled row-major. Identical seed, identical matrix.
LatentCode sample_latent(std::uint64_t seed, int layers, int dim);

// LAT1 file: magic "LAT1", u16 version=1, u32 L, u32 D, then L*D f32
// little-endian row-major.
std::string encode_latent(const LatentCode& w);
LatentCode decode_latent(const std::string& bytes, const std::string& context);
void save_latent(const std::string& path, const LatentCode& w);
LatentCode load_latent(const std::string& path);

}  // namespace invedit
