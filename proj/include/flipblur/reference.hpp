#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "flipblur/boundary.hpp"

namespace flipblur::reference {

/// One term of a ghost-pixel expansion: (vectorized interior index, weight).
using Term = std::pair<std::size_t, double>;

/// Expresses the (possibly out-of-window) sample f(i, j), 1-based, as a linear
/// combination of interior samples, using the explicit per-region formulas
/// (edges and the four corners written out separately). For a rank-1 shape
/// only i = 1 is meaningful.
std::vector<Term> ghost_terms(const Shape& shape, std::ptrdiff_t i, std::ptrdiff_t j, BcKind bc);

/// Dense operator built row by row from ghost_terms, with no use of the
/// separable padding code.
DenseMatrix dense_operator(const Psf& psf, BcKind bc, const Shape& shape);

}  // namespace flipblur::reference
