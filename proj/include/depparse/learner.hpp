#ifndef DEPPARSE_LEARNER_HPP
#define DEPPARSE_LEARNER_HPP

#include <cstdint>
#include <vector>

#include "depparse/core.hpp"
#include "depparse/features.hpp"

namespace depparse {

// Dense multiclass linear model. Weights live in a row-major feature-by-class
// matrix; absent features simply contribute nothing at scoring time.
struct LinearModel {
  int feature_count = 0;
  int class_count = 0;
  std::vector<double> weights;  // size feature_count * class_count

  double weight(int feature, int cls) const {
    return weights[static_cast<std::size_t>(feature) * static_cast<std::size_t>(class_count) +
                   static_cast<std::size_t>(cls)];
  }
  double& weight(int feature, int cls) {
    return weights[static_cast<std::size_t>(feature) * static_cast<std::size_t>(class_count) +
                   static_cast<std::size_t>(cls)];
  }

  bool operator==(const LinearModel&) const = default;
};

struct TrainingInstance {
  FeatureVector features;
  int cls = 0;
};

struct TrainOptions {
  int epochs = 10;
  std::uint64_t seed = 1;
  bool shuffle = true;
  bool averaged = true;
};

// Averaged multiclass perceptron. Deterministic: the same instances and
// options produce bit-identical weights. Prediction ties break toward the
// lowest class index. When `mistakes_per_epoch` is given it receives one
// count per epoch. Throws Error on empty input or out-of-range indices.
LinearModel train_classifier(const std::vector<TrainingInstance>& instances,
                             int class_count, int feature_count,
                             const TrainOptions& opts,
                             std::vector<int>* mistakes_per_epoch = nullptr);

// score[c] = sum of weights over the vector's active features.
std::vector<double> score(const LinearModel& m, const FeatureVector& v);

// Argmax of score restricted to `legal` (lowest index on ties).
// Throws Error when legal is empty or contains an out-of-range class.
int predict_legal(const LinearModel& m, const FeatureVector& v,
                  const std::vector<int>& legal);

}  // namespace depparse

#endif  // DEPPARSE_LEARNER_HPP
