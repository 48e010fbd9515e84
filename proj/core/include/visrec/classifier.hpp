#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "visrec/cnn.hpp"
#include "visrec/image.hpp"

namespace visrec {

/// Class descriptions; the position of a label is its class index.
struct LabelSet {
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return labels.size(); }
  const std::string& operator[](std::size_t i) const { return labels.at(i); }
};

/// One label per line, in file order; trailing blank lines are dropped.
LabelSet load_labels(const std::filesystem::path& path);

struct ConfidenceVector {
  std::vector<double> scores;

  std::size_t size() const noexcept { return scores.size(); }
  double operator[](std::size_t i) const { return scores.at(i); }
  /// Lowest index among the maximal scores.
  std::size_t argmax() const;
};

struct Prediction {
  std::size_t class_index = 0;
  double score = 0.0;
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct ChannelMean {
  std::array<double, 3> means{0.0, 0.0, 0.0};
};

/// plane[c](x, y) = img(x, y, c) - mean[c].
ChannelPlanes subtract_mean(const Image& img, const ChannelMean& mean);

/// exp(z_j - max z) / sum_k exp(z_k - max z). Throws on empty or non-finite input.
ConfidenceVector softmax(std::span<const double> z);

/// k highest scores, descending; equal scores keep ascending class index.
std::vector<Prediction> top_k(const ConfidenceVector& scores, std::size_t k);

/// Inference interface shared by every model. Loaded models are immutable;
/// scoring is const and safe to call concurrently.
class Classifier {
 public:
  static constexpr int kDefaultWorkers = 4;

  virtual ~Classifier() = default;

  const LabelSet& labels() const noexcept { return labels_; }
  virtual bool loaded() const = 0;

  /// Full per-class distribution. Throws model_not_loaded before loading.
  ConfidenceVector confidence_scores(const Image& img) const;
  std::vector<Prediction> predict_top_k(const Image& img, std::size_t k) const;

  /// Upper bound on internal parallelism; never changes results.
  void set_worker_count(int n);
  int worker_count() const noexcept { return workers_; }

 protected:
  virtual ConfidenceVector compute_scores(const Image& img) const = 0;
  void set_labels(LabelSet labels) { labels_ = std::move(labels); }

 private:
  LabelSet labels_;
  int workers_ = kDefaultWorkers;
};

/// Joint colour histogram with 8 bins per channel (512 bins), L1-normalized.
std::vector<double> color_histogram(const Image& img, int workers = 1);

/// Nearest-centroid model over colour histograms; scores are the softmax of
/// negative euclidean distances to each class centroid.
class CentroidClassifier final : public Classifier {
 public:
  static constexpr int kBinsPerChannel = 8;
  static constexpr std::size_t kFeatureDims = 512;

  CentroidClassifier() = default;
  CentroidClassifier(LabelSet labels, std::vector<std::vector<double>> centroids);

  bool loaded() const override { return !centroids_.empty(); }

  /// Reads a model written by save_model; its class count must match `labels`.
  void load_model(const std::filesystem::path& model_path, LabelSet labels);
  void save_model(const std::filesystem::path& model_path) const;

  const std::vector<std::vector<double>>& centroids() const noexcept { return centroids_; }

 protected:
  ConfidenceVector compute_scores(const Image& img) const override;

 private:
  std::vector<std::vector<double>> centroids_;
};

struct LabeledImage {
  Image image;
  std::size_t class_index = 0;
};

CentroidClassifier train_reference_classifier(std::span<const LabeledImage> samples, LabelSet labels);

/// Small feed-forward network with injected weights: mean subtraction, then
/// conv / ReLU / max-pool / fully-connected layers, then softmax.
class ConvNetClassifier final : public Classifier {
 public:
  struct Relu {};
  struct Dense {
    std::vector<double> weights;
    std::vector<double> bias;
  };
  using Layer = std::variant<ConvFilters, Relu, PoolSpec, Dense>;

  ConvNetClassifier() = default;
  ConvNetClassifier(LabelSet labels, std::vector<Layer> layers);

  bool loaded() const override { return !layers_.empty(); }
  void set_mean(const ChannelMean& mean);
  const ChannelMean& mean() const noexcept { return mean_; }

  /// Raw scores of the last layer, before softmax.
  std::vector<double> forward(const Image& img) const;

 protected:
  ConfidenceVector compute_scores(const Image& img) const override;

 private:
  std::vector<Layer> layers_;
  ChannelMean mean_;
};

}  // namespace visrec
