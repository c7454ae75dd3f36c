#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "budgetbo/rng.hpp"

namespace budgetbo {

// Gray-code Sobol sequence.  Direction numbers follow the Joe-Kuo tables for
// the first 21 dimensions; higher dimensions reuse the table cyclically with
// a fixed per-dimension digital XOR shift, which preserves the per-dimension
// (0,1) base-2 equidistribution and is deterministic.  That is plenty for the
// flattened scenario-tree spaces, whose points only seed local searches.
class SobolSequence {
 public:
  explicit SobolSequence(int dim, std::uint64_t scramble_seed = 0) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("SobolSequence: dim must be >= 1");
    v_.assign(static_cast<std::size_t>(dim), std::vector<std::uint32_t>(kBits));
    shift_.assign(static_cast<std::size_t>(dim), 0u);
    x_.assign(static_cast<std::size_t>(dim), 0u);
    for (int j = 0; j < dim; ++j) init_dimension(j);
    if (scramble_seed != 0) {
      RngStream rs(derive_seed(scramble_seed, {0x536f626f6cULL}));
      for (int j = 0; j < dim; ++j) shift_[static_cast<std::size_t>(j)] ^= static_cast<std::uint32_t>(rs.next_u64() >> 32);
    }
    index_ = 0;
    next();  // skip the origin
  }

  int dim() const { return dim_; }

  Eigen::VectorXd next() {
    Eigen::VectorXd p(dim_);
    for (int j = 0; j < dim_; ++j) {
      const std::uint32_t bits = x_[static_cast<std::size_t>(j)] ^ shift_[static_cast<std::size_t>(j)];
      p[j] = static_cast<double>(bits) * 0x1.0p-32;
    }
    const unsigned c = ctz(~index_);  // Gray-code flip position
    for (int j = 0; j < dim_; ++j) x_[static_cast<std::size_t>(j)] ^= v_[static_cast<std::size_t>(j)][c];
    ++index_;
    return p;
  }

  Eigen::MatrixXd take(int n) {
    Eigen::MatrixXd out(n, dim_);
    for (int i = 0; i < n; ++i) out.row(i) = next().transpose();
    return out;
  }

 private:
  static constexpr int kBits = 32;

  struct JoeKuoRow {
    int degree;
    std::uint32_t poly;  // inner coefficients a_1..a_{s-1} packed as an integer
    std::uint32_t m[7];
  };

  static const JoeKuoRow* table(int* count) {
    // new-joe-kuo-6 direction numbers, dimensions 2..21 (dimension 1 is the
    // van der Corput sequence and needs no row).
    static const JoeKuoRow rows[] = {
        {1, 0, {1}},
        {2, 1, {1, 3}},
        {3, 1, {1, 3, 1}},
        {3, 2, {1, 1, 1}},
        {4, 1, {1, 1, 3, 3}},
        {4, 4, {1, 3, 5, 13}},
        {5, 2, {1, 1, 5, 5, 17}},
        {5, 4, {1, 1, 5, 5, 5}},
        {5, 7, {1, 1, 7, 11, 19}},
        {5, 11, {1, 1, 5, 1, 1}},
        {5, 13, {1, 1, 1, 3, 11}},
        {5, 14, {1, 3, 5, 5, 31}},
        {6, 1, {1, 3, 3, 9, 7, 49}},
        {6, 13, {1, 1, 1, 15, 21, 21}},
        {6, 16, {1, 3, 1, 13, 27, 49}},
        {6, 19, {1, 1, 1, 15, 7, 5}},
        {6, 22, {1, 3, 1, 15, 13, 25}},
        {6, 25, {1, 1, 5, 5, 19, 61}},
        {7, 1, {1, 3, 7, 11, 23, 15, 103}},
        {7, 4, {1, 3, 7, 13, 13, 15, 69}},
    };
    *count = static_cast<int>(sizeof(rows) / sizeof(rows[0]));
    return rows;
  }

  void init_dimension(int j) {
    auto& v = v_[static_cast<std::size_t>(j)];
    if (j == 0) {
      for (int i = 0; i < kBits; ++i) v[static_cast<std::size_t>(i)] = 1u << (kBits - 1 - i);
      return;
    }
    int rows = 0;
    const JoeKuoRow* tab = table(&rows);
    const JoeKuoRow& row = tab[(j - 1) % rows];
    const int s = row.degree;
    for (int i = 0; i < s && i < kBits; ++i) {
      v[static_cast<std::size_t>(i)] = row.m[i] << (kBits - 1 - i);
    }
    for (int i = s; i < kBits; ++i) {
      std::uint32_t val = v[static_cast<std::size_t>(i - s)] ^ (v[static_cast<std::size_t>(i - s)] >> s);
      for (int k = 1; k < s; ++k) {
        if ((row.poly >> (s - 1 - k)) & 1u) val ^= v[static_cast<std::size_t>(i - k)];
      }
      v[static_cast<std::size_t>(i)] = val;
    }
    if (j - 1 >= rows) {
      // beyond the embedded table: decorrelate the reused dimension
      shift_[static_cast<std::size_t>(j)] ^= static_cast<std::uint32_t>(
          splitmix64(0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(j)) >> 32);
    }
  }

  static unsigned ctz(std::uint32_t x) {
    unsigned c = 0;
    while ((x & 1u) == 0u && c < 31) {
      x >>= 1;
      ++c;
    }
    return c;
  }

  int dim_;
  std::uint32_t index_ = 0;
  std::vector<std::vector<std::uint32_t>> v_;
  std::vector<std::uint32_t> shift_;
  std::vector<std::uint32_t> x_;
};

}  // namespace budgetbo
