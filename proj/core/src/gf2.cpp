#include "eqplant/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "eqplant/errors.hpp"

namespace eqplant {

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw std::invalid_argument("BitVector: expected '0' or '1'");
    v.set(i, bits[i] == '1');
  }
  return v;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector: length mismatch in xor");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (const Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::any() const noexcept {
  return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (get(i)) out[i] = '1';
  return out;
}

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(BitVector::word_count(cols)), data_(rows * stride_, 0) {}

Gf2Matrix Gf2Matrix::from_rows(const std::vector<std::string>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Gf2Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("Gf2Matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const char ch = rows[r][c];
      if (ch != '0' && ch != '1') throw std::invalid_argument("Gf2Matrix: expected '0' or '1'");
      m.set(r, c, ch == '1');
    }
  }
  return m;
}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
  Gf2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

void Gf2Matrix::set(std::size_t r, std::size_t c, bool value) noexcept {
  Word& w = data_[r * stride_ + c / 64];
  const Word mask = Word{1} << (c % 64);
  w = value ? (w | mask) : (w & ~mask);
}

bool Gf2Matrix::row_is_zero(std::size_t r) const noexcept {
  const auto words = row(r);
  return std::all_of(words.begin(), words.end(), [](Word w) { return w == 0; });
}

void Gf2Matrix::xor_row(std::size_t dst, std::size_t src, std::size_t first_word) noexcept {
  Word* d = data_.data() + dst * stride_;
  const Word* s = data_.data() + src * stride_;
  for (std::size_t w = first_word; w < stride_; ++w) d[w] ^= s[w];
}

void Gf2Matrix::swap_rows(std::size_t a, std::size_t b) noexcept {
  if (a == b) return;
  std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

BitVector Gf2Matrix::multiply(const BitVector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("Gf2Matrix::multiply: length mismatch");
  BitVector y(rows_);
  const auto xw = x.words();
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto rw = row(r);
    Word acc = 0;
    for (std::size_t w = 0; w < stride_; ++w) acc ^= rw[w] & xw[w];
    y.set(r, (std::popcount(acc) & 1) != 0);
  }
  return y;
}

RowEchelon row_reduce(Gf2Matrix a) {
  RowEchelon out;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < a.cols() && pivot_row < a.rows(); ++c) {
    std::size_t r = pivot_row;
    while (r < a.rows() && !a.get(r, c)) ++r;
    if (r == a.rows()) continue;
    a.swap_rows(pivot_row, r);
    // Columns left of c are already zero in the pivot row.
    const std::size_t first_word = c / 64;
    for (std::size_t other = 0; other < a.rows(); ++other)
      if (other != pivot_row && a.get(other, c)) a.xor_row(other, pivot_row, first_word);
    out.pivot_cols.push_back(c);
    ++pivot_row;
  }
  out.rank = pivot_row;
  out.reduced = std::move(a);
  return out;
}

std::size_t rank(const Gf2Matrix& a) { return row_reduce(a).rank; }

std::optional<std::uint64_t> Gf2SolutionSet::solution_count() const {
  if (!consistent) return std::uint64_t{0};
  if (nullity >= 64) return std::nullopt;
  return std::uint64_t{1} << nullity;
}

Gf2SolutionSet solve_affine(const Gf2Matrix& a, const BitVector& b) {
  if (b.size() != a.rows())
    throw std::invalid_argument("solve_affine: rhs length " + std::to_string(b.size()) +
                                " does not match " + std::to_string(a.rows()) + " rows");
  const std::size_t n = a.cols();
  Gf2Matrix aug(a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto src = a.row(r);
    auto dst = aug.row(r);
    std::copy(src.begin(), src.end(), dst.begin());
    if (b.get(r)) aug.set(r, n, true);
  }
  const RowEchelon ech = row_reduce(std::move(aug));

  Gf2SolutionSet s;
  s.n_vars = n;
  std::vector<std::size_t> pivots;
  for (const auto c : ech.pivot_cols)
    if (c < n) pivots.push_back(c);
  s.rank = pivots.size();
  s.nullity = n - s.rank;
  s.consistent = pivots.size() == ech.rank;

  std::vector<bool> is_pivot(n, false);
  for (const auto c : pivots) is_pivot[c] = true;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) s.free_cols.push_back(c);

  const Gf2Matrix& rref = ech.reduced;
  for (const auto f : s.free_cols) {
    BitVector v(n);
    v.set(f, true);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (rref.get(r, f)) v.set(pivots[r], true);
    s.basis.push_back(std::move(v));
  }
  if (s.consistent) {
    BitVector p(n);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (rref.get(r, n)) p.set(pivots[r], true);
    s.particular = std::move(p);
  }
  return s;
}

BitVector solution_at(const Gf2SolutionSet& s, std::uint64_t t) {
  if (!s.consistent) throw DomainError("solution_at: system is inconsistent");
  if (s.nullity < 64 && t >= (std::uint64_t{1} << s.nullity))
    throw std::out_of_range("solution_at: index out of range");
  BitVector x = *s.particular;
  const std::size_t d = s.nullity;
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t shift = d - 1 - j;
    if (shift < 64 && ((t >> shift) & 1U)) x ^= s.basis[j];
  }
  return x;
}

std::vector<BitVector> enumerate_solutions(const Gf2SolutionSet& s, std::uint64_t limit) {
  if (!s.consistent) throw DomainError("enumerate_solutions: system is inconsistent");
  const auto count = s.solution_count();
  if (!count || *count > limit)
    throw DomainError("enumerate_solutions: 2^" + std::to_string(s.nullity) +
                      " solutions exceed the limit of " + std::to_string(limit));
  std::vector<BitVector> out;
  out.reserve(static_cast<std::size_t>(*count));
  for (std::uint64_t t = 0; t < *count; ++t) out.push_back(solution_at(s, t));
  return out;
}

std::optional<std::uint64_t> solution_index(const Gf2SolutionSet& s, const BitVector& x) {
  if (!s.consistent || x.size() != s.n_vars) return std::nullopt;
  if (s.nullity >= 64) throw DomainError("solution_index: nullity too large for a 64-bit index");
  const BitVector delta = x ^ *s.particular;
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < s.nullity; ++j)
    if (delta.get(s.free_cols[j])) t |= std::uint64_t{1} << (s.nullity - 1 - j);
  if (solution_at(s, t) != x) return std::nullopt;
  return t;
}

}  // namespace eqplant
