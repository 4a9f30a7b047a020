#include "mocap/likelihood.hpp"

#include <string>

#include "mocap/errors.hpp"

namespace mocap {

PixelCounts pixel_counts(const SilhouetteImage& observed, const SilhouetteImage& model) {
    if (observed.width != model.width || observed.height != model.height)
        throw DimensionError("weight: observed is " + std::to_string(observed.width) +
                             "x" + std::to_string(observed.height) + " but model is " +
                             std::to_string(model.width) + "x" +
                             std::to_string(model.height));
    PixelCounts counts;
    const std::uint8_t* a = observed.mask.data();
    const std::uint8_t* b = model.mask.data();
    std::size_t n = observed.mask.size();
    for (std::size_t i = 0; i < n; ++i) {
        counts.n_common += static_cast<std::size_t>(a[i] & b[i]);
        counts.n_sil_only += static_cast<std::size_t>(a[i] & ~b[i] & 1);
        counts.n_model_only += static_cast<std::size_t>(~a[i] & b[i] & 1);
    }
    return counts;
}

double weight_from_counts(const PixelCounts& counts) {
    std::size_t denom = counts.n_sil_only + counts.n_model_only;
    if (denom == 0) return static_cast<double>(counts.n_common);
    return static_cast<double>(counts.n_common) / static_cast<double>(denom);
}

double silhouette_weight(const SilhouetteImage& observed, const SilhouetteImage& model) {
    return weight_from_counts(pixel_counts(observed, model));
}

double combine_cameras(std::span<const double> weights) {
    if (weights.empty()) throw Error("weight: no camera weights to combine");
    // A single value, or identical values from every camera, pass through
    // exactly; the mean of c equal doubles is not always bit-exact.
    bool all_equal = true;
    for (double w : weights)
        if (w != weights.front()) {
            all_equal = false;
            break;
        }
    if (all_equal) return weights.front();
    double sum = 0.0;
    for (double w : weights) sum += w;
    return sum / static_cast<double>(weights.size());
}

}  // namespace mocap
