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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels used by the network layers. Every kernel
// has a portable scalar reference implementation; an AVX2/FMA variant is
// compiled in a separate translation unit and chosen at runtime when the
// CPU supports it. The two variants agree to rounding (they differ only in
// summation order and fused multiply-add).
namespace ouq::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Best ISA the running CPU supports (and that was compiled in).
Isa detect_isa();

// ISA used by the dispatching entry points below. Defaults to
// detect_isa(), or Scalar when the OUQ_ISA environment variable is
// "scalar".
Isa active_isa();

// Forces an ISA; throws std::invalid_argument if it is unavailable.
void set_active_isa(Isa isa);

bool isa_available(Isa isa);

// Signatures shared by every variant. Matrices are row-major with `cols`
// entries per row.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[r] = bias[r] + sum_c w[r*cols + c] * x[c]
  void (*affine)(const double* w, const double* bias, const double* x,
                 double* out, std::size_t rows, std::size_t cols);
  // out[c] += sum_r w[r*cols + c] * v[r]
  void (*affine_transpose_acc)(const double* w, const double* v, double* out,
                               std::size_t rows, std::size_t cols);
  // w[r*cols + c] += alpha * u[r] * x[c]
  void (*rank1_update)(double alpha, const double* u, const double* x,
                       double* w, std::size_t rows, std::size_t cols);
};

const KernelTable& table(Isa isa);

namespace scalar {
extern const KernelTable kTable;
}
#if defined(OUQ_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

// Dispatching wrappers over table(active_isa()).
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void affine(std::span<const double> w, std::span<const double> bias,
            std::span<const double> x, std::span<double> out);
void affine_transpose_acc(std::span<const double> w, std::span<const double> v,
                          std::span<double> out);
void rank1_update(double alpha, std::span<const double> u,
                  std::span<const double> x, std::span<double> w);

}  // namespace ouq::kernels
