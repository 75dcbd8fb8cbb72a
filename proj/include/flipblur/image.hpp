#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace flipblur {

// Image extents. A 1D signal of length n is the degenerate grid 1 x n with
// rank 1, so every operator works on a (rows, cols) grid.
struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int rank = 2;

  static Shape line(std::size_t n) { return {1, n, 1}; }
  static Shape grid(std::size_t rows, std::size_t cols) { return {rows, cols, 2}; }

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::ostream& operator<<(std::ostream& os, const Shape& shape);

// Real pixel data in row-major (lexicographic, first index slowest) order.
class Image {
 public:
  Image() = default;
  explicit Image(Shape shape, double fill = 0.0);
  Image(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * shape_.cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * shape_.cols + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  double norm() const;
  double max() const;

 private:
  Shape shape_{};
  std::vector<double> data_;
};

// Whitespace-separated real grid, one row per line. Blank lines are skipped.
struct TextGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};

TextGrid parse_text_grid(std::string_view text);
void write_text_grid(std::ostream& os, std::size_t rows, std::size_t cols,
                     std::span<const double> values);

}  // namespace flipblur
