// Shared aliases over the library's built-in instances.
#pragma once

#include "motpaver/instances.hpp"

namespace golden {

using motpaver::Numerics;
using motpaver::Rational;
using motpaver::Vec;
using R = Rational;

inline Vec<R> pt(int a, int b, int den = 1) { return {R(a) / den, R(b) / den}; }

struct TwoTriangles : motpaver::TwoTrianglesInstance {
    std::vector<std::vector<R>>&P1, &P2;
    TwoTriangles()
        : motpaver::TwoTrianglesInstance(motpaver::two_triangles_instance()),
          P1(extreme1),
          P2(extreme2) {}
};

}  // namespace golden
