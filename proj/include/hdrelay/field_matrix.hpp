#pragma once

#include <cstdint>
#include <vector>

namespace hdrelay {

// Dense matrix over the prime field F_p. Entries are kept reduced to [0, p).
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(int p, int rows, int cols);
  // Entries are reduced mod p (negative inputs map to their residues).
  FieldMatrix(int p, const std::vector<std::vector<std::int64_t>>& rows);

  static FieldMatrix identity(int p, int k);
  // S^(k-n): the k x k lower-shift matrix raised to k - n, 0 <= n <= k.
  static FieldMatrix shift_power(int p, int k, int n);

  int p() const noexcept { return p_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  int operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  void set(int r, int c, std::int64_t value);

  std::vector<std::vector<std::int64_t>> to_rows() const;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  int p_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> data_;
};

bool is_prime(int p);

// Rank over F_p by Gaussian elimination with exact modular arithmetic.
int rank_mod_p(const FieldMatrix& m);

}  // namespace hdrelay
