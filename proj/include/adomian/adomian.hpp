#pragma once

// Umbrella header: Adomian polynomial generation by the explicit partition
// formula, the symbolic recursion, and direct/recursive Fourier quadrature,
// with the composition rules, multivariable extension, and the fractional
// Schrodinger solver.

#include "combinatorics.hpp"
#include "components.hpp"
#include "expr.hpp"
#include "fourier.hpp"
#include "fractional.hpp"
#include "generators.hpp"
#include "multivar.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "schrodinger.hpp"
#include "series.hpp"
