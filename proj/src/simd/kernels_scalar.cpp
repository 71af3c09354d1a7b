// Copyright 2026 The ouqnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ouq/kernels.hpp"

namespace ouq::kernels::scalar {
namespace {

double Dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void Affine(const double* w, const double* bias, const double* x, double* out,
            std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = bias[r] + Dot(w + r * cols, x, cols);
  }
}

void AffineTransposeAcc(const double* w, const double* v, double* out,
                        std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) Axpy(v[r], w + r * cols, out, cols);
}

void Rank1Update(double alpha, const double* u, const double* x, double* w,
                 std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    Axpy(alpha * u[r], x, w + r * cols, cols);
  }
}

}  // namespace

const KernelTable kTable = {Dot, Axpy, Affine, AffineTransposeAcc,
                            Rank1Update};

}  // namespace ouq::kernels::scalar
