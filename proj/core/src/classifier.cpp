#include "visrec/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ios>
#include <numeric>
#include <sstream>

#include "parallel.hpp"
#include "visrec/error.hpp"

namespace visrec {

namespace {

constexpr const char* kModelMagic = "visrec-centroid-model";
constexpr int kModelVersion = 1;

}  // namespace

LabelSet load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_not_found, "cannot read label file: " + path.string());
  LabelSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    set.labels.push_back(line);
  }
  while (!set.labels.empty() && set.labels.back().empty()) set.labels.pop_back();
  if (set.labels.empty()) throw Error(Errc::empty_input, "label file is empty: " + path.string());
  return set;
}

std::size_t ConfidenceVector::argmax() const {
  if (scores.empty()) throw Error(Errc::empty_input, "argmax of an empty score vector");
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

ChannelPlanes subtract_mean(const Image& img, const ChannelMean& mean) {
  auto planes = split_channels(img);
  for (std::size_t c = 0; c < 3; ++c) {
    for (auto& v : planes[c].data()) v -= mean.means[c];
  }
  return planes;
}

ConfidenceVector softmax(std::span<const double> z) {
  if (z.empty()) throw Error(Errc::empty_input, "softmax of an empty vector");
  if (!std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(Errc::invalid_argument, "softmax input must be finite");
  }
  const double peak = *std::max_element(z.begin(), z.end());
  ConfidenceVector out;
  out.scores.resize(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.scores[i] = std::exp(z[i] - peak);
    sum += out.scores[i];
  }
  for (auto& s : out.scores) s /= sum;
  return out;
}

std::vector<Prediction> top_k(const ConfidenceVector& scores, std::size_t k) {
  if (k < 1 || k > scores.size()) {
    throw Error(Errc::invalid_argument, "k must lie in [1, " + std::to_string(scores.size()) +
                                            "], got " + std::to_string(k));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores.scores[a] > scores.scores[b];
  });
  std::vector<Prediction> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({order[i], scores.scores[order[i]]});
  return out;
}

ConfidenceVector Classifier::confidence_scores(const Image& img) const {
  if (!loaded()) throw Error(Errc::model_not_loaded, "classifier has no model loaded");
  return compute_scores(img);
}

std::vector<Prediction> Classifier::predict_top_k(const Image& img, std::size_t k) const {
  if (!loaded()) throw Error(Errc::model_not_loaded, "classifier has no model loaded");
  if (k < 1 || k > labels().size()) {
    throw Error(Errc::invalid_argument, "k must lie in [1, " + std::to_string(labels().size()) +
                                            "], got " + std::to_string(k));
  }
  return top_k(compute_scores(img), k);
}

void Classifier::set_worker_count(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "worker count must be at least 1");
  workers_ = n;
}

std::vector<double> color_histogram(const Image& img, int workers) {
  constexpr std::size_t kBins = CentroidClassifier::kFeatureDims;
  const std::size_t rows = static_cast<std::size_t>(img.height());
  const int chunks = std::max(1, std::min(workers, static_cast<int>(rows)));
  std::vector<std::vector<std::size_t>> partial(static_cast<std::size_t>(chunks),
                                                std::vector<std::size_t>(kBins, 0));
  const std::size_t per_chunk = (rows + static_cast<std::size_t>(chunks) - 1) /
                                static_cast<std::size_t>(chunks);
  detail::parallel_for(static_cast<std::size_t>(chunks), chunks, [&](std::size_t b, std::size_t e) {
    for (std::size_t chunk = b; chunk < e; ++chunk) {
      auto& counts = partial[chunk];
      const std::size_t y_end = std::min(rows, (chunk + 1) * per_chunk);
      for (std::size_t y = chunk * per_chunk; y < y_end; ++y) {
        for (int x = 0; x < img.width(); ++x) {
          const auto px = img.pixel(x, static_cast<int>(y));
          counts[static_cast<std::size_t>((px[0] >> 5) * 64 + (px[1] >> 5) * 8 + (px[2] >> 5))]++;
        }
      }
    }
  });
  std::vector<double> hist(kBins, 0.0);
  const double total = static_cast<double>(img.pixel_count());
  for (std::size_t bin = 0; bin < kBins; ++bin) {
    std::size_t count = 0;
    for (const auto& counts : partial) count += counts[bin];
    hist[bin] = static_cast<double>(count) / total;
  }
  return hist;
}

CentroidClassifier::CentroidClassifier(LabelSet labels, std::vector<std::vector<double>> centroids)
    : centroids_(std::move(centroids)) {
  if (labels.size() == 0) throw Error(Errc::empty_input, "label set is empty");
  if (centroids_.size() != labels.size()) {
    throw Error(Errc::dimension_mismatch, "centroid count does not match label count");
  }
  for (const auto& c : centroids_) {
    if (c.size() != kFeatureDims) throw Error(Errc::dimension_mismatch, "centroid must have 512 entries");
  }
  set_labels(std::move(labels));
}

ConfidenceVector CentroidClassifier::compute_scores(const Image& img) const {
  const auto feature = color_histogram(img, worker_count());
  std::vector<double> neg_dist(centroids_.size());
  detail::parallel_for(centroids_.size(), worker_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < kFeatureDims; ++i) {
        const double d = feature[i] - centroids_[k][i];
        acc += d * d;
      }
      neg_dist[k] = -std::sqrt(acc);
    }
  });
  return softmax(neg_dist);
}

void CentroidClassifier::save_model(const std::filesystem::path& model_path) const {
  if (!loaded()) throw Error(Errc::model_not_loaded, "nothing to save: classifier not trained");
  std::ofstream out(model_path, std::ios::trunc);
  if (!out) throw Error(Errc::unwritable_path, "cannot write model: " + model_path.string());
  out << kModelMagic << ' ' << kModelVersion << '\n'
      << "classes " << centroids_.size() << '\n'
      << "bins_per_channel " << kBinsPerChannel << '\n'
      << std::hexfloat;
  for (const auto& c : centroids_) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
  out.close();
  if (!out) throw Error(Errc::unwritable_path, "failed writing model: " + model_path.string());
}

void CentroidClassifier::load_model(const std::filesystem::path& model_path, LabelSet labels) {
  std::ifstream in(model_path);
  if (!in) throw Error(Errc::file_not_found, "cannot read model: " + model_path.string());
  auto bad = [&](const std::string& why) {
    return Error(Errc::malformed_model, model_path.string() + ": " + why);
  };

  std::string magic, key;
  int version = 0;
  std::size_t classes = 0;
  int bins = 0;
  if (!(in >> magic >> version) || magic != kModelMagic) throw bad("not a centroid model");
  if (version != kModelVersion) throw bad("unsupported version " + std::to_string(version));
  if (!(in >> key >> classes) || key != "classes" || classes == 0) throw bad("missing class count");
  if (!(in >> key >> bins) || key != "bins_per_channel" || bins != kBinsPerChannel) {
    throw bad("unsupported histogram layout");
  }
  std::string line;
  std::getline(in, line);

  std::vector<std::vector<double>> centroids;
  centroids.reserve(classes);
  for (std::size_t k = 0; k < classes; ++k) {
    if (!std::getline(in, line)) throw bad("truncated centroid table");
    std::vector<double> row;
    row.reserve(kFeatureDims);
    const char* cursor = line.c_str();
    for (std::size_t i = 0; i < kFeatureDims; ++i) {
      char* end = nullptr;
      const double v = std::strtod(cursor, &end);
      if (end == cursor || !std::isfinite(v)) throw bad("bad centroid value");
      row.push_back(v);
      cursor = end;
    }
    centroids.push_back(std::move(row));
  }
  if (labels.size() != classes) {
    throw Error(Errc::dimension_mismatch, "model has " + std::to_string(classes) +
                                              " classes but label file has " +
                                              std::to_string(labels.size()));
  }
  centroids_ = std::move(centroids);
  set_labels(std::move(labels));
}

CentroidClassifier train_reference_classifier(std::span<const LabeledImage> samples, LabelSet labels) {
  if (labels.size() == 0) throw Error(Errc::empty_input, "label set is empty");
  const std::size_t classes = labels.size();
  std::vector<std::vector<double>> sums(classes,
                                        std::vector<double>(CentroidClassifier::kFeatureDims, 0.0));
  std::vector<std::size_t> counts(classes, 0);
  for (const auto& s : samples) {
    if (s.class_index >= classes) {
      throw Error(Errc::invalid_argument, "sample class index out of range");
    }
    const auto h = color_histogram(s.image);
    for (std::size_t i = 0; i < h.size(); ++i) sums[s.class_index][i] += h[i];
    ++counts[s.class_index];
  }
  for (std::size_t k = 0; k < classes; ++k) {
    if (counts[k] == 0) {
      throw Error(Errc::invalid_argument, "class '" + labels[k] + "' has no training samples");
    }
    for (auto& v : sums[k]) v /= static_cast<double>(counts[k]);
  }
  return CentroidClassifier(std::move(labels), std::move(sums));
}

ConvNetClassifier::ConvNetClassifier(LabelSet labels, std::vector<Layer> layers)
    : layers_(std::move(layers)) {
  if (labels.size() == 0) throw Error(Errc::empty_input, "label set is empty");
  if (layers_.empty()) throw Error(Errc::invalid_argument, "network has no layers");
  set_labels(std::move(labels));
}

void ConvNetClassifier::set_mean(const ChannelMean& mean) {
  for (const double m : mean.means) {
    if (!(m >= 0.0 && m <= 255.0)) throw Error(Errc::invalid_argument, "channel mean outside [0, 255]");
  }
  mean_ = mean;
}

std::vector<double> ConvNetClassifier::forward(const Image& img) const {
  if (!loaded()) throw Error(Errc::model_not_loaded, "network has no layers");
  Volume v = volume_from_planes(subtract_mean(img, mean_));
  for (const auto& layer : layers_) {
    if (const auto* conv = std::get_if<ConvFilters>(&layer)) {
      v = conv_forward(v, *conv, worker_count());
    } else if (std::holds_alternative<Relu>(layer)) {
      v = relu(std::move(v));
    } else if (const auto* pool = std::get_if<PoolSpec>(&layer)) {
      v = max_pool(v, *pool);
    } else {
      const auto& dense = std::get<Dense>(layer);
      auto out = fully_connected(v.data(), dense.weights, dense.bias);
      const int n = static_cast<int>(out.size());
      v = Volume(n, 1, 1, std::move(out));
    }
  }
  return {v.data().begin(), v.data().end()};
}

ConfidenceVector ConvNetClassifier::compute_scores(const Image& img) const {
  const auto raw = forward(img);
  if (raw.size() != labels().size()) {
    throw Error(Errc::dimension_mismatch, "network output size does not match label count");
  }
  return softmax(raw);
}

}  // namespace visrec
