#pragma once

#include <cstddef>
#include <span>

#include "mocap/image.hpp"

namespace mocap {

/// Pixel-wise comparison of an observed silhouette against a rendered model
/// silhouette of identical dimensions.
struct PixelCounts {
    std::size_t n_common = 0;      // foreground in both
    std::size_t n_sil_only = 0;    // observed foreground the model misses
    std::size_t n_model_only = 0;  // model foreground outside the observation
};

PixelCounts pixel_counts(const SilhouetteImage& observed, const SilhouetteImage& model);

/// Overlap score n_common / (n_sil_only + n_model_only).
///
/// Rewards model pixels that land on the observed silhouette and penalizes
/// both kinds of mismatch; a perfect match has zero denominator and scores
/// n_common, which dominates any imperfect match of the same silhouette.
double weight_from_counts(const PixelCounts& counts);

double silhouette_weight(const SilhouetteImage& observed, const SilhouetteImage& model);

/// Mean of per-camera weights. Throws on an empty span.
double combine_cameras(std::span<const double> weights);

}  // namespace mocap
