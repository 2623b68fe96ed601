#pragma once

#include <doctest.h>

// Purely relative comparison; doctest's default Approx adds an absolute
// tolerance of epsilon, which hides errors on the tiny channel gains.
inline doctest::Approx rel(double v) { return doctest::Approx(v).scale(0.0); }
inline doctest::Approx rel(double v, double eps) { return doctest::Approx(v).scale(0.0).epsilon(eps); }
