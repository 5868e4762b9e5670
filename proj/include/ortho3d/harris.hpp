#pragma once

#include <string>
#include <vector>

#include "ortho3d/image.hpp"

namespace ortho3d {

// How the per-pixel structure matrix M is assembled.
//
// SmoothedGradients follows the cornerness formulation literally:
// L_x = G * I_x, L_y = G * I_y, then M = [[Lx^2, LxLy], [LxLy, Ly^2]].
// That M is rank-1 at every pixel, so det(M) = 0 and R = -k trace^2 <= 0:
// nothing ever scores positive. SmoothedProducts is the standard Harris
// form (smooth Ix^2, IxIy, Iy^2) and is the operative default for
// detection; see README for the discussion.
enum class TensorMode {
    SmoothedGradients,
    SmoothedProducts,
};

struct HarrisParams {
    double sigma = 1.0;          // Gaussian scale for smoothing
    double k = 0.04;             // cornerness constant
    double rel_threshold = 0.01; // fraction of max R, in (0, 1]
    int nms_radius = 2;          // suppression window radius, >= 1
    TensorMode mode = TensorMode::SmoothedProducts;

    void validate() const;
};

struct ControlPoint {
    int x = 0;
    int y = 0;
    double score = 0.0;
};

// Detected corners, sorted by descending score. No two points are within
// Chebyshev distance nms_radius of each other.
struct ControlPointSet {
    std::string view_id;
    std::vector<ControlPoint> points;
};

// Structure matrix fields per the literal formulation: smooth the
// gradients, then form the products.  a = Lx^2, b = Lx*Ly, c = Ly^2.
void structure_tensor(const ScalarField& ix, const ScalarField& iy, double sigma, ScalarField& a,
                      ScalarField& b, ScalarField& c, int workers = 1);

// Standard Harris structure matrix: form the products, then smooth them.
void structure_tensor_products(const ScalarField& ix, const ScalarField& iy, double sigma, ScalarField& a,
                               ScalarField& b, ScalarField& c, int workers = 1);

// R = (a c - b^2) - k (a + c)^2 per pixel.
ScalarField cornerness(const ScalarField& a, const ScalarField& b, const ScalarField& c, double k = 0.04);

// Full response field for an image under the given parameters.
ScalarField harris_response(const GrayImage& img, const HarrisParams& p, int workers = 1);

// Thresholding at rel_threshold * max(R) plus strict non-max suppression.
ControlPointSet detect_corners(const GrayImage& img, const HarrisParams& p, int workers = 1);

// Control-point CSV dump: one "x,y,score" line per point, 6 significant digits.
void dump_control_points(const ControlPointSet& cps, const std::string& path);

} // namespace ortho3d
