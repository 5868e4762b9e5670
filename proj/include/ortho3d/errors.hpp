#pragma once

#include <stdexcept>
#include <string>

namespace ortho3d {

enum class Errc {
    // config / orchestration
    ConfigError,
    // image-core
    FileNotFound,
    UnsupportedFormat,
    CorruptImage,
    InvalidSigma,
    ImageTooSmall,
    DimensionMismatch,
    NoCornersFound,
    // envelope
    NoSilhouette,
    SelfIntersectingContour,
    TooFewVertices,
    // hull-intersect
    DuplicateAxis,
    TooFewEnvelopes,
    InconsistentViews,
    EmptyIntersection,
    EmptyGrid,
    // delaunay3d
    TooFewPoints,
    AllCoplanar,
    NumericalFailure,
    DegenerateTetrahedron,
    VertexNotInTriangulation,
    // crust
    EmptyCrust,
    // serialization
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message) : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

const char* errc_name(Errc code);

} // namespace ortho3d
