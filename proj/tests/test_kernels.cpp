#include <doctest.h>

#include <cmath>

#include "bhed/kernels.hpp"
#include "support/generators.hpp"

using namespace bhed::kernels;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<cplx> noise(std::mt19937_64& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = {gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)};
  return v;
}

}  // namespace

TEST_CASE("scalar reference kernels on hand values") {
  const KernelTable& s = scalar_table();
  const std::vector<cplx> x{{1, 2}, {3, -1}};
  const std::vector<cplx> y{{0, 1}, {2, 2}};
  // conj(1+2i)(i) + conj(3-i)(2+2i) = (2+i) + (4+8i)
  CHECK(s.dotc(x.data(), y.data(), 2) == cplx(6, 9));
  CHECK(s.norm_sq(x.data(), 2) == doctest::Approx(15.0));
  auto z = y;
  s.axpy({0, 1}, x.data(), z.data(), 2);
  CHECK(z[0] == cplx(-2, 2));
  CHECK(z[1] == cplx(3, 5));
  s.scale({2, 0}, z.data(), 2);
  CHECK(z[1] == cplx(6, 10));
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const KernelTable* v = avx2_table();
  if (v == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this CPU; equivalence not exercised");
    return;
  }
  const KernelTable& s = scalar_table();
  for (const auto seed : gen::seeds()) {
    std::mt19937_64 rng(seed);
    for (std::size_t n = 0; n < 70; ++n) {
      // Offset by one element to exercise unaligned loads.
      auto x = noise(rng, n + 1);
      auto y = noise(rng, n + 1);
      const cplx* xp = x.data() + 1;
      const cplx* yp = y.data() + 1;
      CHECK(rel(v->dotc(xp, yp, n), s.dotc(xp, yp, n)) < 1e-13);
      CHECK(std::abs(v->norm_sq(xp, n) - s.norm_sq(xp, n)) < 1e-13 * std::max(1.0, s.norm_sq(xp, n)));

      const cplx a{gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2)};
      auto y1 = y, y2 = y;
      s.axpy(a, xp, y1.data() + 1, n);
      v->axpy(a, xp, y2.data() + 1, n);
      for (std::size_t i = 0; i <= n; ++i) CHECK(rel(y2[i], y1[i]) < 1e-14);
      s.scale(a, y1.data() + 1, n);
      v->scale(a, y2.data() + 1, n);
      for (std::size_t i = 0; i <= n; ++i) CHECK(rel(y2[i], y1[i]) < 1e-14);
    }

    // Random CSR matrix with variable row lengths, including empty rows.
    const std::size_t rows = 97;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> cols;
    std::vector<cplx> vals;
    for (std::size_t r = 0; r < rows; ++r) {
      const int len = gen::integer(rng, 0, 11);
      for (int k = 0; k < len; ++k) {
        cols.push_back(static_cast<std::uint32_t>(gen::integer(rng, 0, static_cast<int>(rows) - 1)));
        vals.push_back({gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)});
      }
      row_ptr.push_back(cols.size());
    }
    const auto x = noise(rng, rows);
    std::vector<cplx> y1(rows, cplx(9, 9)), y2(rows, cplx(-9, 9));
    s.csr_matvec(row_ptr.data(), cols.data(), vals.data(), x.data(), y1.data(), 0, rows);
    v->csr_matvec(row_ptr.data(), cols.data(), vals.data(), x.data(), y2.data(), 0, rows);
    for (std::size_t r = 0; r < rows; ++r) CHECK(rel(y2[r], y1[r]) < 1e-14);
    // Partial row ranges leave other rows untouched.
    std::vector<cplx> y3(rows, cplx(5, 5));
    v->csr_matvec(row_ptr.data(), cols.data(), vals.data(), x.data(), y3.data(), 10, 20);
    CHECK(y3[9] == cplx(5, 5));
    CHECK(y3[20] == cplx(5, 5));
    CHECK(rel(y3[15], y1[15]) < 1e-14);
  }
}

TEST_CASE("dispatch names") {
  CHECK(isa_name(Isa::Scalar) == "scalar");
  CHECK(isa_name(Isa::Avx2) == "avx2");
}
