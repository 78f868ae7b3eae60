#include "hdrelay/field_matrix.hpp"

#include <utility>

#include "hdrelay/error.hpp"

namespace hdrelay {

namespace {

int reduce(std::int64_t value, int p) {
  auto r = value % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inverse_mod(int a, int p) {
  // Fermat: a^(p-2) mod p.
  std::int64_t result = 1;
  std::int64_t base = a;
  int e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<int>(result);
}

}  // namespace

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FieldMatrix::FieldMatrix(int p, int rows, int cols)
    : p_(p), rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {
  if (!is_prime(p)) throw Error(ErrorKind::BadArgument, "field size must be prime");
  if (rows < 0 || cols < 0) throw Error(ErrorKind::BadArgument, "negative matrix dimension");
}

FieldMatrix::FieldMatrix(int p, const std::vector<std::vector<std::int64_t>>& rows)
    : FieldMatrix(p, static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size())) {
  for (int r = 0; r < rows_; ++r) {
    if (static_cast<int>(rows[r].size()) != cols_)
      throw Error(ErrorKind::BadArgument, "ragged matrix rows");
    for (int c = 0; c < cols_; ++c) set(r, c, rows[r][c]);
  }
}

FieldMatrix FieldMatrix::identity(int p, int k) { return shift_power(p, k, k); }

FieldMatrix FieldMatrix::shift_power(int p, int k, int n) {
  if (n < 0 || n > k) throw Error(ErrorKind::BadArgument, "shift level outside [0, k]");
  FieldMatrix m(p, k, k);
  const int shift = k - n;
  for (int c = 0; c + shift < k; ++c) m.set(c + shift, c, 1);
  return m;
}

void FieldMatrix::set(int r, int c, std::int64_t value) {
  data_[static_cast<std::size_t>(r) * cols_ + c] = reduce(value, p_);
}

std::vector<std::vector<std::int64_t>> FieldMatrix::to_rows() const {
  std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c);
  return out;
}

int rank_mod_p(const FieldMatrix& m) {
  const int p = m.p();
  const int rows = m.rows();
  const int cols = m.cols();
  std::vector<std::vector<std::int64_t>> a(rows, std::vector<std::int64_t>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a[r][c] = m(r, c);

  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    const std::int64_t inv = inverse_mod(static_cast<int>(a[rank][c]), p);
    for (int cc = c; cc < cols; ++cc) a[rank][cc] = a[rank][cc] * inv % p;
    for (int r = rank + 1; r < rows; ++r) {
      const std::int64_t f = a[r][c];
      if (f == 0) continue;
      for (int cc = c; cc < cols; ++cc) a[r][cc] = reduce(a[r][cc] - f * a[rank][cc], p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace hdrelay
