#pragma once

#include <string>
#include <vector>

#include "ortho3d/errors.hpp"

namespace ortho3d {

// Row-major grid of intensities normalized to [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Row-major grid of unbounded per-pixel values (gradients, cornerness, ...).
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    static ScalarField zeros(int w, int h) {
        return {w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0)};
    }

    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Square symmetric kernel, center-indexed; weights sum to 1.
struct Kernel {
    int radius = 0;
    std::vector<double> weights; // (2*radius+1)^2, row-major

    double at(int dx, int dy) const {
        int side = 2 * radius + 1;
        return weights[static_cast<std::size_t>(dy + radius) * side + (dx + radius)];
    }
};

// Reads a PGM (P2/P5, maxval <= 65535) or an 8-bit grayscale/RGB PNG.
// Multi-channel input is collapsed with luma 0.299 R + 0.587 G + 0.114 B.
GrayImage load_image(const std::string& path);

// The unnormalized Gaussian sample 1/(2 pi sigma^2) exp(-(x^2+y^2)/(2 sigma^2)).
double gaussian_weight(int x, int y, double sigma);

// Truncated at radius ceil(3 sigma), renormalized to sum exactly 1.
Kernel gaussian_kernel(double sigma);

// Central differences in the interior, one-sided at borders.
// Requires width >= 3 and height >= 3.
void gradients(const GrayImage& img, ScalarField& ix, ScalarField& iy);

// Discrete convolution with a symmetric kernel, clamp-to-edge borders.
// Row-parallel when workers > 1; bit-identical to the sequential result.
ScalarField convolve(const ScalarField& field, const Kernel& k, int workers = 1);

} // namespace ortho3d
