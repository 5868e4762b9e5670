#include "ortho3d/harris.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ortho3d/parallel.hpp"

namespace ortho3d {

namespace {

void require_same_dims(const ScalarField& a, const ScalarField& b) {
    if (a.width != b.width || a.height != b.height)
        throw Error(Errc::DimensionMismatch, "scalar fields differ in dimensions");
}

} // namespace

void HarrisParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::InvalidSigma, "sigma must be > 0");
    if (!(k > 0.0)) throw Error(Errc::ConfigError, "harris k must be > 0");
    if (!(rel_threshold > 0.0 && rel_threshold <= 1.0))
        throw Error(Errc::ConfigError, "rel_threshold must be in (0, 1]");
    if (nms_radius < 1) throw Error(Errc::ConfigError, "nms_radius must be >= 1");
}

void structure_tensor(const ScalarField& ix, const ScalarField& iy, double sigma, ScalarField& a,
                      ScalarField& b, ScalarField& c, int workers) {
    require_same_dims(ix, iy);
    Kernel g = gaussian_kernel(sigma);
    ScalarField lx = convolve(ix, g, workers);
    ScalarField ly = convolve(iy, g, workers);
    a = ScalarField::zeros(ix.width, ix.height);
    b = ScalarField::zeros(ix.width, ix.height);
    c = ScalarField::zeros(ix.width, ix.height);
    for (std::size_t i = 0; i < lx.data.size(); ++i) {
        a.data[i] = lx.data[i] * lx.data[i];
        b.data[i] = lx.data[i] * ly.data[i];
        c.data[i] = ly.data[i] * ly.data[i];
    }
}

void structure_tensor_products(const ScalarField& ix, const ScalarField& iy, double sigma, ScalarField& a,
                               ScalarField& b, ScalarField& c, int workers) {
    require_same_dims(ix, iy);
    ScalarField xx = ScalarField::zeros(ix.width, ix.height);
    ScalarField xy = ScalarField::zeros(ix.width, ix.height);
    ScalarField yy = ScalarField::zeros(ix.width, ix.height);
    for (std::size_t i = 0; i < ix.data.size(); ++i) {
        xx.data[i] = ix.data[i] * ix.data[i];
        xy.data[i] = ix.data[i] * iy.data[i];
        yy.data[i] = iy.data[i] * iy.data[i];
    }
    Kernel g = gaussian_kernel(sigma);
    a = convolve(xx, g, workers);
    b = convolve(xy, g, workers);
    c = convolve(yy, g, workers);
}

ScalarField cornerness(const ScalarField& a, const ScalarField& b, const ScalarField& c, double k) {
    require_same_dims(a, b);
    require_same_dims(a, c);
    ScalarField r = ScalarField::zeros(a.width, a.height);
    for (std::size_t i = 0; i < r.data.size(); ++i) {
        double det = a.data[i] * c.data[i] - b.data[i] * b.data[i];
        double trace = a.data[i] + c.data[i];
        r.data[i] = det - k * trace * trace;
    }
    return r;
}

ScalarField harris_response(const GrayImage& img, const HarrisParams& p, int workers) {
    p.validate();
    ScalarField ix, iy;
    gradients(img, ix, iy);
    ScalarField a, b, c;
    if (p.mode == TensorMode::SmoothedGradients)
        structure_tensor(ix, iy, p.sigma, a, b, c, workers);
    else
        structure_tensor_products(ix, iy, p.sigma, a, b, c, workers);
    return cornerness(a, b, c, p.k);
}

ControlPointSet detect_corners(const GrayImage& img, const HarrisParams& p, int workers) {
    ScalarField r = harris_response(img, p, workers);

    double max_r = *std::max_element(r.data.begin(), r.data.end());
    ControlPointSet cps;
    if (!(max_r > 0.0)) return cps; // no corner response anywhere

    const double threshold = p.rel_threshold * max_r;
    const int w = r.width;
    const int h = r.height;
    const int nr = p.nms_radius;

    std::vector<std::vector<ControlPoint>> rows(static_cast<std::size_t>(h));
    parallel_for(static_cast<std::size_t>(h), workers, [&](std::size_t y0, std::size_t y1) {
        for (std::size_t yy = y0; yy < y1; ++yy) {
            int y = static_cast<int>(yy);
            for (int x = 0; x < w; ++x) {
                double v = r.at(x, y);
                if (!(v > threshold)) continue;
                bool strict_max = true;
                for (int dy = -nr; dy <= nr && strict_max; ++dy) {
                    int sy = y + dy;
                    if (sy < 0 || sy >= h) continue;
                    for (int dx = -nr; dx <= nr; ++dx) {
                        int sx = x + dx;
                        if (sx < 0 || sx >= w || (dx == 0 && dy == 0)) continue;
                        if (!(v > r.at(sx, sy))) {
                            strict_max = false;
                            break;
                        }
                    }
                }
                if (strict_max) rows[yy].push_back({x, y, v});
            }
        }
    });

    for (auto& row : rows)
        cps.points.insert(cps.points.end(), row.begin(), row.end());
    // descending score; ties by (lower y, lower x) for cross-run determinism
    std::stable_sort(cps.points.begin(), cps.points.end(), [](const ControlPoint& a, const ControlPoint& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    return cps;
}

void dump_control_points(const ControlPointSet& cps, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, path + ": cannot open for writing");
    char line[96];
    for (const ControlPoint& p : cps.points) {
        std::snprintf(line, sizeof(line), "%d,%d,%.6g\n", p.x, p.y, p.score);
        out << line;
    }
    if (!out) throw Error(Errc::IoError, path + ": write failed");
}

} // namespace ortho3d
