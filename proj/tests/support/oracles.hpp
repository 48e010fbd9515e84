#pragma once

// Brute-force reference implementations. None of these share code paths with
// the library routines they check.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "visrec/classifier.hpp"
#include "visrec/cnn.hpp"
#include "visrec/contours.hpp"
#include "visrec/discovery.hpp"
#include "visrec/image.hpp"

namespace visrec::testing {

struct NestedComponent {
  std::vector<Point> pixels;              // raster order
  std::size_t enclosed = 0;               // component + everything it surrounds
  std::optional<std::size_t> parent;      // innermost enclosing component
};

/// 8-connected components in raster order of their first pixel; enclosure by
/// 4-connected flood fill from outside the image.
std::vector<NestedComponent> nesting_oracle(const GrayPlane& binary);

/// Zero-pads the input explicitly, then evaluates every output element with
/// six nested loops.
Volume naive_conv(const Volume& input, const ConvFilters& filters);

/// Gathers each window into a list and takes its maximum.
Volume naive_pool(const Volume& input, const PoolSpec& spec);

/// Enumerates every (frame, top-k slot) pair, keeps the first matching slot
/// of each frame, then picks the highest score, earliest frame on ties.
DiscoveryResult discovery_oracle(const std::vector<ConfidenceVector>& frame_scores,
                                 const LabelSet& labels, const std::string& query, std::size_t k);

/// Sort-by-score with explicit index tie-break.
std::vector<Prediction> sort_oracle(const std::vector<double>& scores, std::size_t k);

}  // namespace visrec::testing
