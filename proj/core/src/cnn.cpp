#include "visrec/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "visrec/error.hpp"

namespace visrec {

void ConvSpec::validate() const {
  if (filter_size < 1 || stride < 1 || pad < 0 || num_filters < 1) {
    throw Error(Errc::invalid_argument, "conv spec requires F>=1, S>=1, P>=0, K>=1");
  }
}

void PoolSpec::validate() const {
  if (window < 1 || stride < 1) {
    throw Error(Errc::invalid_argument, "pool spec requires window>=1 and stride>=1");
  }
}

Volume::Volume(int depth, int height, int width, double fill)
    : depth_(depth), height_(height), width_(width) {
  if (depth < 1 || height < 1 || width < 1) {
    throw Error(Errc::invalid_argument, "volume dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(depth) * static_cast<std::size_t>(height) *
                   static_cast<std::size_t>(width), fill);
}

Volume::Volume(int depth, int height, int width, std::vector<double> data)
    : depth_(depth), height_(height), width_(width), data_(std::move(data)) {
  if (depth < 1 || height < 1 || width < 1) {
    throw Error(Errc::invalid_argument, "volume dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(depth) * static_cast<std::size_t>(height) *
                          static_cast<std::size_t>(width)) {
    throw Error(Errc::invalid_argument, "volume data length mismatch");
  }
}

int conv_output_shape(int in_size, const ConvSpec& spec) {
  spec.validate();
  if (in_size < 1 || in_size + 2 * spec.pad < spec.filter_size) {
    throw Error(Errc::invalid_argument, "filter of size " + std::to_string(spec.filter_size) +
                                            " larger than padded input " +
                                            std::to_string(in_size + 2 * spec.pad));
  }
  return (in_size - spec.filter_size + 2 * spec.pad) / spec.stride + 1;
}

int pool_output_shape(int in_size, const PoolSpec& spec) {
  spec.validate();
  if (in_size < spec.window) {
    throw Error(Errc::invalid_argument, "pooling window larger than input");
  }
  return (in_size - spec.window) / spec.stride + 1;
}

Volume conv_forward(const Volume& input, const ConvFilters& filters, int workers) {
  const auto& spec = filters.spec;
  spec.validate();
  const auto f = static_cast<std::size_t>(spec.filter_size);
  if (filters.depth != input.depth()) {
    throw Error(Errc::dimension_mismatch, "filter depth " + std::to_string(filters.depth) +
                                              " != input depth " + std::to_string(input.depth()));
  }
  if (filters.weights.size() !=
      static_cast<std::size_t>(spec.num_filters) * static_cast<std::size_t>(filters.depth) * f * f) {
    throw Error(Errc::dimension_mismatch, "filter weight count does not match spec");
  }
  if (!filters.bias.empty() && filters.bias.size() != static_cast<std::size_t>(spec.num_filters)) {
    throw Error(Errc::dimension_mismatch, "bias length must equal filter count");
  }
  const int out_h = conv_output_shape(input.height(), spec);
  const int out_w = conv_output_shape(input.width(), spec);
  Volume out(spec.num_filters, out_h, out_w);

  detail::parallel_for(static_cast<std::size_t>(spec.num_filters), workers,
                       [&](std::size_t begin, std::size_t end) {
    for (auto k = static_cast<int>(begin); k < static_cast<int>(end); ++k) {
      const double b = filters.bias.empty() ? 0.0 : filters.bias[static_cast<std::size_t>(k)];
      for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
          const int y0 = oy * spec.stride - spec.pad;
          const int x0 = ox * spec.stride - spec.pad;
          double acc = b;
          for (int d = 0; d < input.depth(); ++d) {
            for (int fy = 0; fy < spec.filter_size; ++fy) {
              const int y = y0 + fy;
              if (y < 0 || y >= input.height()) continue;
              for (int fx = 0; fx < spec.filter_size; ++fx) {
                const int x = x0 + fx;
                if (x < 0 || x >= input.width()) continue;
                acc += filters.weight(k, d, fy, fx) * input.at(d, y, x);
              }
            }
          }
          out.at(k, oy, ox) = acc;
        }
      }
    }
  });
  return out;
}

Volume max_pool(const Volume& input, const PoolSpec& spec) {
  const int out_h = pool_output_shape(input.height(), spec);
  const int out_w = pool_output_shape(input.width(), spec);
  Volume out(input.depth(), out_h, out_w);
  for (int d = 0; d < input.depth(); ++d) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        double best = input.at(d, oy * spec.stride, ox * spec.stride);
        for (int wy = 0; wy < spec.window; ++wy) {
          for (int wx = 0; wx < spec.window; ++wx) {
            best = std::max(best, input.at(d, oy * spec.stride + wy, ox * spec.stride + wx));
          }
        }
        out.at(d, oy, ox) = best;
      }
    }
  }
  return out;
}

Volume relu(Volume v) {
  for (auto& x : v.data()) x = relu(x);
  return v;
}

std::vector<double> relu(std::vector<double> v) {
  for (auto& x : v) x = relu(x);
  return v;
}

std::vector<double> fully_connected(std::span<const double> input, std::span<const double> weights,
                                    std::span<const double> bias) {
  if (bias.empty() || weights.size() != bias.size() * input.size()) {
    throw Error(Errc::dimension_mismatch, "fully connected weights do not match input/bias size");
  }
  std::vector<double> out(bias.begin(), bias.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto row = weights.subspan(j * input.size(), input.size());
    for (std::size_t i = 0; i < input.size(); ++i) out[j] += row[i] * input[i];
  }
  return out;
}

Volume volume_from_planes(const ChannelPlanes& planes) {
  const int w = planes[0].width();
  const int h = planes[0].height();
  Volume v(3, h, w);
  for (int d = 0; d < 3; ++d) {
    const auto& p = planes[static_cast<std::size_t>(d)];
    if (p.width() != w || p.height() != h) {
      throw Error(Errc::dimension_mismatch, "channel planes differ in size");
    }
    std::copy(p.data().begin(), p.data().end(),
              v.data().begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(d) * p.size()));
  }
  return v;
}

}  // namespace visrec
