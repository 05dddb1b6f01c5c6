#include "invedit/latent.hpp"

#include <cmath>

#include "invedit/error.hpp"
#include "invedit/prng.hpp"
#include "invedit/wire.hpp"

namespace invedit {

void validate_latent(const LatentCode& w) {
  if (w.layers() < 1 || w.dim() < 1)
    raise(ErrorCode::ShapeMismatch, "latent code needs at least 1 layer and 1 dim");
  if (!w.values.allFinite()) raise(ErrorCode::NonFiniteValue, "non-finite latent entry");
}

LatentCode sample_latent(std::uint64_t seed, int layers, int dim) {
  if (layers < 1 || dim < 1)
    raise(ErrorCode::ShapeMismatch, "latent code needs at least 1 layer and 1 dim");
  Pcg64 rng(seed);
  RowMatrixXd m(layers, dim);
  for (int l = 0; l < layers; ++l)
    for (int d = 0; d < dim; ++d) m(l, d) = rng.next_normal();
  return LatentCode(std::move(m));
}

std::string encode_latent(const LatentCode& w) {
  validate_latent(w);
  std::string out;
  out += "LAT1";
  wire::put_u16(out, 1);
  wire::put_u32(out, static_cast<std::uint32_t>(w.layers()));
  wire::put_u32(out, static_cast<std::uint32_t>(w.dim()));
  for (int l = 0; l < w.layers(); ++l)
    for (int d = 0; d < w.dim(); ++d)
      wire::put_f32(out, static_cast<float>(w.values(l, d)));
  return out;
}

LatentCode decode_latent(const std::string& bytes, const std::string& context) {
  wire::Reader r(bytes, context);
  r.expect_magic("LAT1");
  const std::uint16_t version = r.get_u16();
  if (version != 1) raise(ErrorCode::BadFormat, context + ": unsupported LAT1 version");
  const int layers = static_cast<int>(r.get_u32());
  const int dim = static_cast<int>(r.get_u32());
  if (layers < 1 || dim < 1 || layers > (1 << 20) || dim > (1 << 20))
    raise(ErrorCode::BadFormat, context + ": bad LAT1 shape");
  RowMatrixXd m(layers, dim);
  for (int l = 0; l < layers; ++l)
    for (int d = 0; d < dim; ++d) m(l, d) = r.get_f32();
  r.require_end();
  LatentCode w(std::move(m));
  validate_latent(w);
  return w;
}

void save_latent(const std::string& path, const LatentCode& w) {
  wire::write_file(path, encode_latent(w));
}

LatentCode load_latent(const std::string& path) {
  return decode_latent(wire::read_file(path), path);
}

}  // namespace invedit
