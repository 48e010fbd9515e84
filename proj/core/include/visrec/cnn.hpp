#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "visrec/image.hpp"

namespace visrec {

/// Convolution hyper-parameters: receptive field, stride, zero padding, filter count.
struct ConvSpec {
  int filter_size = 1;
  int stride = 1;
  int pad = 0;
  int num_filters = 1;

  void validate() const;
};

/// Max-pooling window; overlapping when stride < window.
struct PoolSpec {
  int window = 1;
  int stride = 1;

  bool overlapping() const noexcept { return stride < window; }
  void validate() const;
};

/// Depth x height x width activation volume, stored slice by slice.
class Volume {
 public:
  Volume() = default;
  Volume(int depth, int height, int width, double fill = 0.0);
  Volume(int depth, int height, int width, std::vector<double> data);

  int depth() const noexcept { return depth_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  double at(int d, int y, int x) const { return data_[index(d, y, x)]; }
  double& at(int d, int y, int x) { return data_[index(d, y, x)]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  std::size_t index(int d, int y, int x) const noexcept {
    return (static_cast<std::size_t>(d) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(y)) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int depth_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// A bank of spec.num_filters filters, each depth x F x F.
/// weights layout: [filter][depth][fy][fx]; bias is empty or one value per filter.
struct ConvFilters {
  ConvSpec spec;
  int depth = 1;
  std::vector<double> weights;
  std::vector<double> bias;

  double weight(int k, int d, int fy, int fx) const {
    const auto f = static_cast<std::size_t>(spec.filter_size);
    return weights[((static_cast<std::size_t>(k) * static_cast<std::size_t>(depth) +
                     static_cast<std::size_t>(d)) * f + static_cast<std::size_t>(fy)) * f +
                   static_cast<std::size_t>(fx)];
  }
};

/// floor((in - F + 2P) / S) + 1. Throws when the window exceeds the padded input.
int conv_output_shape(int in_size, const ConvSpec& spec);
/// floor((in - z) / stride) + 1.
int pool_output_shape(int in_size, const PoolSpec& spec);

/// Slides every filter over the zero-padded input; output depth = filter count.
/// Work is split across `workers` threads by filter; results do not depend on it.
Volume conv_forward(const Volume& input, const ConvFilters& filters, int workers = 1);

/// Per-slice max over window x window regions; depth is unchanged.
Volume max_pool(const Volume& input, const PoolSpec& spec);

inline double relu(double x) noexcept { return x > 0.0 ? x : 0.0; }
Volume relu(Volume v);
std::vector<double> relu(std::vector<double> v);

/// out[j] = bias[j] + sum_i weights[j * in + i] * input[i].
std::vector<double> fully_connected(std::span<const double> input, std::span<const double> weights,
                                    std::span<const double> bias);

Volume volume_from_planes(const ChannelPlanes& planes);

}  // namespace visrec
