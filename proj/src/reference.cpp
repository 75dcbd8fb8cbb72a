#include "flipblur/reference.hpp"

namespace flipblur::reference {

namespace {

enum class Region { Low, Inside, High };

Region region_of(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (i < 1) return Region::Low;
  if (i > n) return Region::High;
  return Region::Inside;
}

std::ptrdiff_t wrap(std::ptrdiff_t i, std::ptrdiff_t n) { return ((i - 1) % n + n) % n + 1; }

// Reflection without repeating the edge sample: f(1-a) = f(a), f(n+a) = f(n+1-a).
std::ptrdiff_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (i < 1) return 1 - i;
  if (i > n) return 2 * n + 1 - i;
  return i;
}

}  // namespace

std::vector<Term> ghost_terms(const Shape& shape, std::ptrdiff_t i, std::ptrdiff_t j, BcKind bc) {
  const auto n1 = static_cast<std::ptrdiff_t>(shape.rows);
  const auto n2 = static_cast<std::ptrdiff_t>(shape.cols);
  auto at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    return static_cast<std::size_t>((r - 1) * n2 + (c - 1));
  };
  const Region ri = region_of(i, n1);
  const Region rj = region_of(j, n2);
  if (ri == Region::Inside && rj == Region::Inside) return {{at(i, j), 1.0}};

  switch (bc) {
    case BcKind::Zero:
      return {};
    case BcKind::Periodic:
      return {{at(wrap(i, n1), wrap(j, n2)), 1.0}};
    case BcKind::Reflective:
      return {{at(reflect(i, n1), reflect(j, n2)), 1.0}};
    case BcKind::AntiReflective:
      break;
  }

  // Edges.
  if (rj == Region::Inside) {
    if (ri == Region::Low) {
      const std::ptrdiff_t a = 1 - i;  // f(1-a, j) = 2 f(1, j) - f(a+1, j)
      return {{at(1, j), 2.0}, {at(a + 1, j), -1.0}};
    }
    const std::ptrdiff_t a = i - n1;  // f(n+a, j) = 2 f(n, j) - f(n-a, j)
    return {{at(n1, j), 2.0}, {at(n1 - a, j), -1.0}};
  }
  if (ri == Region::Inside) {
    if (rj == Region::Low) {
      const std::ptrdiff_t b = 1 - j;
      return {{at(i, 1), 2.0}, {at(i, b + 1), -1.0}};
    }
    const std::ptrdiff_t b = j - n2;
    return {{at(i, n2), 2.0}, {at(i, n2 - b), -1.0}};
  }

  // Corners.
  if (ri == Region::Low && rj == Region::Low) {
    const std::ptrdiff_t a = 1 - i, b = 1 - j;
    // f(1-a, 1-b) = 4 f(1,1) - 2 f(1, b+1) - 2 f(a+1, 1) + f(a+1, b+1)
    return {{at(1, 1), 4.0}, {at(1, b + 1), -2.0}, {at(a + 1, 1), -2.0}, {at(a + 1, b + 1), 1.0}};
  }
  if (ri == Region::Low && rj == Region::High) {
    const std::ptrdiff_t a = 1 - i, b = j - n2;
    // f(1-a, n+b) = 4 f(1,n) - 2 f(1, n-b) - 2 f(a+1, n) + f(a+1, n-b)
    return {{at(1, n2), 4.0}, {at(1, n2 - b), -2.0}, {at(a + 1, n2), -2.0}, {at(a + 1, n2 - b), 1.0}};
  }
  if (ri == Region::High && rj == Region::Low) {
    const std::ptrdiff_t a = i - n1, b = 1 - j;
    // f(n+a, 1-b) = 4 f(n,1) - 2 f(n, b+1) - 2 f(n-a, 1) + f(n-a, b+1)
    return {{at(n1, 1), 4.0}, {at(n1, b + 1), -2.0}, {at(n1 - a, 1), -2.0}, {at(n1 - a, b + 1), 1.0}};
  }
  const std::ptrdiff_t a = i - n1, b = j - n2;
  // f(n+a, n+b) = 4 f(n,n) - 2 f(n, n-b) - 2 f(n-a, n) + f(n-a, n-b)
  return {{at(n1, n2), 4.0}, {at(n1, n2 - b), -2.0}, {at(n1 - a, n2), -2.0}, {at(n1 - a, n2 - b), 1.0}};
}

DenseMatrix dense_operator(const Psf& psf, BcKind bc, const Shape& shape) {
  const auto n = static_cast<Eigen::Index>(shape.size());
  DenseMatrix dense = DenseMatrix::Zero(n, n);
  const auto m1 = static_cast<std::ptrdiff_t>(psf.row_halfwidth());
  const auto m2 = static_cast<std::ptrdiff_t>(psf.col_halfwidth());
  const auto n1 = static_cast<std::ptrdiff_t>(shape.rows);
  const auto n2 = static_cast<std::ptrdiff_t>(shape.cols);
  for (std::ptrdiff_t r = 1; r <= n1; ++r)
    for (std::ptrdiff_t c = 1; c <= n2; ++c) {
      const auto row = static_cast<Eigen::Index>((r - 1) * n2 + (c - 1));
      // g(r, c) = sum_k h(k) f(r - k1, c - k2)
      for (std::ptrdiff_t k1 = -m1; k1 <= m1; ++k1)
        for (std::ptrdiff_t k2 = -m2; k2 <= m2; ++k2) {
          const double h = psf.at(k1, k2);
          for (const auto& [index, weight] : ghost_terms(shape, r - k1, c - k2, bc))
            dense(row, static_cast<Eigen::Index>(index)) += h * weight;
        }
    }
  return dense;
}

}  // namespace flipblur::reference
