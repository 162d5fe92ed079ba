#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "corrtherm/spectrum.hpp"

namespace corrtherm {

struct CurvePoint {
    double x;
    double y;
};

// Vertices start at (0, 0); x accumulates e^{-E} scaled by e^{-w}.
struct MajorizationCurve {
    std::vector<CurvePoint> vertices;
    std::vector<std::size_t> beta_order;
    double w = 0.0;

    // Piecewise-linear height, flat at the last vertex beyond its abscissa.
    double y_at(double x) const;
};

std::vector<std::size_t> beta_order(const DiagonalState& state, const LocalSystem& sys);

MajorizationCurve curve(const DiagonalState& state, const LocalSystem& sys, double w);

bool can_transform(const DiagonalState& src, const DiagonalState& dst, const LocalSystem& sys_src,
                   const LocalSystem& sys_dst, double w);

double min_work(const DiagonalState& src, const DiagonalState& dst, const LocalSystem& sys_src,
                const LocalSystem& sys_dst, double tol);

double min_work(const DiagonalState& src, const DiagonalState& dst, const LocalSystem& sys, double tol);

// Expand a level distribution into one entry per joint microstate.
std::pair<LocalSystem, DiagonalState> joint_as_local(std::span<const double> occupations,
                                                     const SpectrumN& spec,
                                                     std::size_t max_states = std::size_t{1} << 20);

}  // namespace corrtherm
