#include "depparse/learner.hpp"

#include <random>
#include <string>

namespace depparse {

namespace {

// Argmax over all classes, lowest index on ties. Scores are accumulated into
// a caller-provided buffer to avoid re-allocating per instance.
int predict_dense(const LinearModel& m, const FeatureVector& v, std::vector<double>& buf) {
  buf.assign(static_cast<std::size_t>(m.class_count), 0.0);
  for (int f : v.indices) {
    const double* row = m.weights.data() +
                        static_cast<std::size_t>(f) * static_cast<std::size_t>(m.class_count);
    for (int c = 0; c < m.class_count; ++c) buf[static_cast<std::size_t>(c)] += row[c];
  }
  int best = 0;
  for (int c = 1; c < m.class_count; ++c) {
    if (buf[static_cast<std::size_t>(c)] > buf[static_cast<std::size_t>(best)]) best = c;
  }
  return best;
}

// Fisher-Yates with a fixed modulo draw. std::shuffle's use of the generator
// is implementation-defined, so spelling the algorithm out keeps training
// order identical across standard libraries.
void shuffle_indices(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

LinearModel train_classifier(const std::vector<TrainingInstance>& instances,
                             int class_count, int feature_count,
                             const TrainOptions& opts,
                             std::vector<int>* mistakes_per_epoch) {
  if (instances.empty()) throw Error("train_classifier: empty instance set");
  if (class_count < 1) throw Error("train_classifier: class_count must be positive");
  if (feature_count < 0) throw Error("train_classifier: negative feature_count");
  if (opts.epochs < 1) throw Error("train_classifier: epochs must be >= 1");
  for (const TrainingInstance& inst : instances) {
    if (inst.cls < 0 || inst.cls >= class_count) {
      throw Error("train_classifier: class index " + std::to_string(inst.cls) +
                  " out of range");
    }
    for (int f : inst.features.indices) {
      if (f < 0 || f >= feature_count) {
        throw Error("train_classifier: feature index " + std::to_string(f) +
                    " out of range");
      }
    }
  }

  LinearModel model;
  model.feature_count = feature_count;
  model.class_count = class_count;
  const std::size_t cells =
      static_cast<std::size_t>(feature_count) * static_cast<std::size_t>(class_count);
  model.weights.assign(cells, 0.0);

  // Averaging via the lag trick: totals accumulate (t-1) * delta so the
  // final average is w - totals / T without storing per-step snapshots.
  // All updates are +-1, so both accumulators stay exactly integral.
  std::vector<double> totals;
  if (opts.averaged) totals.assign(cells, 0.0);

  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(opts.seed);
  std::vector<double> scores;

  if (mistakes_per_epoch) mistakes_per_epoch->clear();
  std::uint64_t step = 0;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    if (opts.shuffle) shuffle_indices(order, rng);
    int mistakes = 0;
    for (std::size_t idx : order) {
      ++step;
      const TrainingInstance& inst = instances[idx];
      int predicted = predict_dense(model, inst.features, scores);
      if (predicted == inst.cls) continue;
      ++mistakes;
      const double lag = static_cast<double>(step - 1);
      for (int f : inst.features.indices) {
        model.weight(f, inst.cls) += 1.0;
        model.weight(f, predicted) -= 1.0;
        if (opts.averaged) {
          const std::size_t base =
              static_cast<std::size_t>(f) * static_cast<std::size_t>(class_count);
          totals[base + static_cast<std::size_t>(inst.cls)] += lag;
          totals[base + static_cast<std::size_t>(predicted)] -= lag;
        }
      }
    }
    if (mistakes_per_epoch) mistakes_per_epoch->push_back(mistakes);
  }

  if (opts.averaged && step > 0) {
    const double total_steps = static_cast<double>(step);
    for (std::size_t i = 0; i < cells; ++i) {
      model.weights[i] -= totals[i] / total_steps;
    }
  }
  return model;
}

std::vector<double> score(const LinearModel& m, const FeatureVector& v) {
  std::vector<double> out(static_cast<std::size_t>(m.class_count), 0.0);
  for (int f : v.indices) {
    if (f < 0 || f >= m.feature_count) continue;  // stale index: contributes 0
    for (int c = 0; c < m.class_count; ++c) {
      out[static_cast<std::size_t>(c)] += m.weight(f, c);
    }
  }
  return out;
}

int predict_legal(const LinearModel& m, const FeatureVector& v,
                  const std::vector<int>& legal) {
  if (legal.empty()) throw Error("predict_legal: empty legal set");
  std::vector<double> s = score(m, v);
  int best = -1;
  for (int c : legal) {
    if (c < 0 || c >= m.class_count) {
      throw Error("predict_legal: class index " + std::to_string(c) + " out of range");
    }
    if (best < 0 || s[static_cast<std::size_t>(c)] > s[static_cast<std::size_t>(best)] ||
        (s[static_cast<std::size_t>(c)] == s[static_cast<std::size_t>(best)] && c < best)) {
      best = c;
    }
  }
  return best;
}

}  // namespace depparse
