#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invedit/latent.hpp"

namespace invedit {

struct LabeledLatentDataset {
  std::vector<std::pair<LatentCode, int>> records;  // label 0 or 1
  std::string negative_name = "negative";
  std::string positive_name = "positive";
};

// Unit-norm attribute hyperplane. classify() uses sigmoid(<a,w> + b); editing
// uses a alone.
struct AttributeDirection {
  RowMatrixXd a;
  double b = 0.0;
  std::string name;
  std::optional<double> train_accuracy;

  int layers() const { return static_cast<int>(a.rows()); }
  int dim() const { return static_cast<int>(a.cols()); }
};

struct LogisticConfig {
  double learning_rate = 0.5;
  int epochs = 500;
  double l2 = 1e-4;  // applied to weights, not bias
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
};

struct LogisticFit {
  RowMatrixXd a_raw;
  double b = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Full-batch gradient descent on L2-regularized cross-entropy, weights
// initialized to zero. The train/test split shuffles record indices with a
// seeded Fisher-Yates pass. Accuracies use the 0.5 threshold.
LogisticFit train_logistic(const LabeledLatentDataset& ds,
                           const LogisticConfig& cfg);

// Normalizes a_raw to unit L2 and rescales b by the same factor, preserving
// the zero level set.
AttributeDirection extract_direction(const RowMatrixXd& a_raw, double b,
                                     const std::string& name);

double classify(const AttributeDirection& dir, const LatentCode& w);

double cosine_similarity(const AttributeDirection& d1,
                         const AttributeDirection& d2);

// Symmetric, unit diagonal, entries are pairwise cosine similarities.
RowMatrixXd correlation_matrix(const std::vector<AttributeDirection>& dirs);

// One sequential pass of a <- a - <a,x>x over xs; with iterate, passes repeat
// until max_x |<a,x>| <= 1e-10. Result renormalized, bias zeroed.
AttributeDirection project_subtract(const AttributeDirection& a,
                                    const std::vector<AttributeDirection>& xs,
                                    bool iterate);

// DIR1 file: magic "DIR1", u16 version=1, u32 L, u32 D, L*D f32 LE row-major
// values, f32 bias, u16 name length, name bytes.
std::string encode_direction(const AttributeDirection& dir);
AttributeDirection decode_direction(const std::string& bytes,
                                    const std::string& context);
void save_direction(const std::string& path, const AttributeDirection& dir);
AttributeDirection load_direction(const std::string& path);

}  // namespace invedit
