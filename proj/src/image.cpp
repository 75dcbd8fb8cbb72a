#include "flipblur/image.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "flipblur/error.hpp"

namespace flipblur {

std::ostream& operator<<(std::ostream& os, const Shape& shape) {
  if (shape.rank == 1) return os << "(" << shape.cols << ")";
  return os << "(" << shape.rows << ", " << shape.cols << ")";
}

Image::Image(Shape shape, double fill) : shape_(shape), data_(shape.size(), fill) {
  if (shape.rows == 0 || shape.cols == 0)
    throw Error(ErrorKind::DimensionError, "image extents must be positive");
}

Image::Image(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  if (shape.rows == 0 || shape.cols == 0)
    throw Error(ErrorKind::DimensionError, "image extents must be positive");
  if (data_.size() != shape.size())
    throw Error(ErrorKind::DimensionError, "pixel count does not match shape");
  for (double v : data_)
    if (!std::isfinite(v)) throw Error(ErrorKind::NumericalFailure, "non-finite pixel value");
}

double Image::norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Image::max() const { return *std::max_element(data_.begin(), data_.end()); }

TextGrid parse_text_grid(std::string_view text) {
  TextGrid grid;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;

    std::size_t count = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      std::string_view token = line.substr(i, j - i);
      double value = 0.0;
      const char* first = token.data();
      if (!token.empty() && token.front() == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
        throw Error(ErrorKind::ParseError, "not a finite number: '" + std::string(token) + "'");
      grid.values.push_back(value);
      ++count;
      i = j;
    }
    if (count == 0) continue;
    if (grid.rows == 0) {
      grid.cols = count;
    } else if (count != grid.cols) {
      throw Error(ErrorKind::ParseError, "ragged grid: row " + std::to_string(grid.rows + 1) +
                                             " has " + std::to_string(count) + " entries, expected " +
                                             std::to_string(grid.cols));
    }
    ++grid.rows;
  }
  return grid;
}

void write_text_grid(std::ostream& os, std::size_t rows, std::size_t cols,
                     std::span<const double> values) {
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", values[r * cols + c]);
      if (c) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace flipblur
